#include "axbench/protocol.hpp"

#include <json.hpp>

#include "axbench/base64.hpp"
#include "axbench/errors.hpp"

namespace axbench::protocol {
namespace {

using json = nlohmann::json;

json space_json(const ParentSpace& space) {
  json out = json::array();
  for (const auto& d : space.descriptors()) {
    if (d.is_discrete()) {
      out.push_back({{"name", d.name}, {"kind", "discrete"}, {"cardinality", d.cardinality}});
    } else {
      out.push_back({{"name", d.name}, {"kind", "continuous"}, {"lower", d.lower}, {"upper", d.upper}});
    }
  }
  return out;
}

ParentSpace space_from(const json& j) {
  std::vector<ParentDescriptor> parents;
  for (const auto& p : j) {
    const auto kind = p.at("kind").get<std::string>();
    if (kind == "discrete") {
      parents.push_back(ParentDescriptor::discrete(p.at("name").get<std::string>(), p.at("cardinality").get<std::uint32_t>()));
    } else if (kind == "continuous") {
      parents.push_back(ParentDescriptor::continuous(p.at("name").get<std::string>(), p.at("lower").get<double>(),
                                                     p.at("upper").get<double>()));
    } else {
      throw ProtocolError("unknown parent kind '" + kind + "'");
    }
  }
  return ParentSpace(std::move(parents));
}

ParentAssignment assignment_from(const json& j) { return ParentAssignment(j.get<std::vector<double>>()); }

json assignment_json(const ParentAssignment& pa) {
  return json(std::vector<double>(pa.values().begin(), pa.values().end()));
}

}  // namespace

std::string encode(const Message& message) {
  json j;
  std::visit(
      [&j](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Hello>) {
          j = {{"type", "hello"},
               {"shape", {m.shape.height, m.shape.width, m.shape.channels}},
               {"parents", space_json(m.space)},
               {"pipelining", m.pipelining}};
        } else if constexpr (std::is_same_v<T, Request>) {
          j = {{"type", "request"},
               {"id", m.id},
               {"x", encode_f32(m.x)},
               {"pa", assignment_json(m.pa)},
               {"pa_star", assignment_json(m.pa_star)},
               {"seed", m.seed}};
        } else if constexpr (std::is_same_v<T, Result>) {
          j = {{"type", "result"}, {"id", m.id}, {"x_star", encode_f32(m.x_star)}};
        } else if constexpr (std::is_same_v<T, ErrorReply>) {
          j = {{"type", "error"}, {"id", m.id}, {"message", m.message}};
        } else {
          j = {{"type", "shutdown"}};
        }
      },
      message);
  return j.dump();
}

Message decode(std::string_view line) {
  try {
    const auto j = json::parse(line);
    if (!j.is_object()) throw ProtocolError("message is not a JSON object");
    const auto type = j.at("type").get<std::string>();
    if (type == "hello") {
      const auto dims = j.at("shape").get<std::vector<std::uint32_t>>();
      if (dims.size() != 3) throw ProtocolError("hello shape must have three entries");
      Hello h;
      h.shape = {dims[0], dims[1], dims[2]};
      h.space = space_from(j.at("parents"));
      h.pipelining = j.value("pipelining", 1u);
      if (h.pipelining == 0) throw ProtocolError("hello pipelining must be at least 1");
      return h;
    }
    if (type == "request") {
      return Request{j.at("id").get<std::uint64_t>(), decode_f32(j.at("x").get<std::string>()),
                     assignment_from(j.at("pa")), assignment_from(j.at("pa_star")), j.at("seed").get<std::uint64_t>()};
    }
    if (type == "result") {
      return Result{j.at("id").get<std::uint64_t>(), decode_f32(j.at("x_star").get<std::string>())};
    }
    if (type == "error") {
      return ErrorReply{j.at("id").get<std::uint64_t>(), j.at("message").get<std::string>()};
    }
    if (type == "shutdown") return Shutdown{};
    throw ProtocolError("unknown message type '" + type + "'");
  } catch (const ProtocolError&) {
    throw;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  } catch (const Error& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
}

std::string type_name(const Message& message) {
  static constexpr const char* names[] = {"hello", "request", "result", "error", "shutdown"};
  return names[message.index()];
}

}  // namespace axbench::protocol
