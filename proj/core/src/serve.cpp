#include "axbench/serve.hpp"

#include <chrono>
#include <string>

#include "axbench/errors.hpp"
#include "axbench/protocol.hpp"

namespace axbench {

ServeEnd serve_model(const CounterfactualModel& model, LineChannel& channel, const ServeOptions& options) {
  channel.write_line(protocol::encode(protocol::Hello{model.shape(), model.space(), options.pipelining}));
  std::size_t answered = 0;
  std::string line;
  for (;;) {
    if (channel.read_line(line, std::chrono::milliseconds(-1)) != ReadStatus::line) return ServeEnd::eof;
    if (line.empty()) continue;
    protocol::Message msg;
    try {
      msg = protocol::decode(line);
    } catch (const ProtocolError& e) {
      channel.write_line(protocol::encode(protocol::ErrorReply{0, e.what()}));
      continue;
    }
    if (std::holds_alternative<protocol::Shutdown>(msg)) return ServeEnd::shutdown;
    auto* req = std::get_if<protocol::Request>(&msg);
    if (!req) {
      channel.write_line(protocol::encode(protocol::ErrorReply{0, "unexpected " + protocol::type_name(msg)}));
      continue;
    }
    if (options.max_requests != 0 && answered >= options.max_requests) return ServeEnd::request_limit;
    try {
      const Observation x(model.shape(), std::move(req->x));
      const Observation out = apply(model, x, req->pa, req->pa_star, req->seed);
      channel.write_line(protocol::encode(
          protocol::Result{req->id, std::vector<float>(out.pixels().begin(), out.pixels().end())}));
    } catch (const Error& e) {
      channel.write_line(protocol::encode(protocol::ErrorReply{req->id, e.what()}));
    }
    ++answered;
  }
}

}  // namespace axbench
