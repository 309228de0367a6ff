#include "axbench/external.hpp"

#include <charconv>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <semaphore>
#include <thread>

#include "axbench/errors.hpp"
#include "axbench/log.hpp"
#include "axbench/protocol.hpp"

namespace axbench {
namespace {

constexpr std::chrono::milliseconds kReaderTick{100};

class ExternalModel final : public CounterfactualModel {
 public:
  ExternalModel(std::unique_ptr<LineChannel> channel, const Shape& shape, const ParentSpace& space,
                ExternalOptions options)
      : channel_(std::move(channel)), shape_(shape), space_(space), options_(options) {
    handshake();
    slots_ = std::make_unique<std::counting_semaphore<kMaxPipelining>>(pipelining_);
    reader_ = std::jthread([this](std::stop_token stop) { read_loop(stop); });
  }

  ~ExternalModel() override {
    {
      std::lock_guard lock(mutex_);
      closing_ = true;
    }
    try {
      std::lock_guard lock(write_mutex_);
      if (!broken()) channel_->write_line(protocol::encode(protocol::Shutdown{}));
      channel_->close_write();
    } catch (const Error&) {
    }
    reader_.request_stop();
    if (reader_.joinable()) reader_.join();
  }

  std::string id() const override { return "external:" + channel_->describe(); }
  Shape shape() const override { return shape_; }
  const ParentSpace& space() const override { return space_; }
  ModelCapabilities capabilities() const override { return {false, false, true}; }

  Observation counterfactual(const Observation& x, const ParentAssignment& pa, const ParentAssignment& pa_star,
                             std::uint64_t function_seed) const override {
    fail_if_broken();
    slots_->acquire();
    struct Release {
      std::counting_semaphore<kMaxPipelining>* s;
      ~Release() { s->release(); }
    } release{slots_.get()};

    std::uint64_t request_id = 0;
    {
      std::lock_guard lock(mutex_);
      if (broken_) throw_failure();
      request_id = next_id_++;
      pending_.emplace(request_id, Slot{});
    }
    try {
      const std::string line = protocol::encode(
          protocol::Request{request_id, std::vector<float>(x.pixels().begin(), x.pixels().end()), pa, pa_star,
                            function_seed});
      std::lock_guard lock(write_mutex_);
      channel_->write_line(line);
    } catch (const Error& e) {
      mark_broken(std::string("sending request failed: ") + e.what(), false);
    }

    std::unique_lock lock(mutex_);
    auto it = pending_.find(request_id);
    const bool finished = cv_.wait_for(lock, options_.timeout, [&] { return it->second.done || broken_; });
    Slot slot = std::move(it->second);
    pending_.erase(it);
    if (!finished) {
      lock.unlock();
      mark_broken("request " + std::to_string(request_id) + " timed out after " +
                      std::to_string(options_.timeout.count()) + " ms",
                  false);
      throw_failure();
    }
    if (!slot.done) throw_failure();
    lock.unlock();

    if (slot.error) throw ModelError("peer " + channel_->describe() + " failed request: " + *slot.error);
    if (slot.pixels.size() != shape_.size()) {
      throw ModelError("peer returned " + std::to_string(slot.pixels.size()) + " values, expected " +
                       std::to_string(shape_.size()));
    }
    double max_change = 0.0;
    Observation out = Observation::clamped(shape_, std::move(slot.pixels), &max_change);
    if (max_change > 1e-6) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "clamped external output into [0, 1] (max change %.3g)", max_change);
      log_warning(buf);
    }
    return out;
  }

 private:
  static constexpr std::ptrdiff_t kMaxPipelining = 1 << 16;

  struct Slot {
    bool done = false;
    std::vector<float> pixels;
    std::optional<std::string> error;
  };

  void handshake() {
    std::string line;
    const auto status = channel_->read_line(line, options_.handshake_timeout);
    if (status == ReadStatus::eof) throw ProtocolError(channel_->describe() + " closed before sending hello");
    if (status == ReadStatus::timeout) throw ProtocolError(channel_->describe() + " sent no hello in time");
    const auto msg = protocol::decode(line);
    const auto* hello = std::get_if<protocol::Hello>(&msg);
    if (!hello) throw ProtocolError("expected hello, got " + protocol::type_name(msg));
    if (hello->shape != shape_) {
      throw ProtocolError("handshake: peer serves shape " + hello->shape.to_string() + " but " + shape_.to_string() +
                          " is expected");
    }
    if (hello->space != space_) {
      throw ProtocolError("handshake: peer serves parents " + hello->space.to_string() + " but " +
                          space_.to_string() + " are expected");
    }
    pipelining_ = static_cast<std::ptrdiff_t>(std::min<std::uint32_t>(hello->pipelining, kMaxPipelining));
  }

  void read_loop(std::stop_token stop) {
    std::string line;
    while (!stop.stop_requested() && !broken()) {
      ReadStatus status;
      try {
        status = channel_->read_line(line, kReaderTick);
      } catch (const Error& e) {
        mark_broken(e.what(), true);
        return;
      }
      if (status == ReadStatus::timeout) continue;
      if (status == ReadStatus::eof) {
        mark_broken("peer " + channel_->describe() + " closed the connection", false);
        return;
      }
      protocol::Message msg;
      try {
        msg = protocol::decode(line);
      } catch (const ProtocolError& e) {
        mark_broken(e.what(), true);
        return;
      }
      std::uint64_t id = 0;
      Slot filled;
      filled.done = true;
      if (auto* r = std::get_if<protocol::Result>(&msg)) {
        id = r->id;
        filled.pixels = std::move(r->x_star);
      } else if (auto* e = std::get_if<protocol::ErrorReply>(&msg)) {
        id = e->id;
        filled.error = e->message;
      } else {
        mark_broken("unexpected " + protocol::type_name(msg) + " message from peer", true);
        return;
      }
      {
        std::lock_guard lock(mutex_);
        auto it = pending_.find(id);
        if (it == pending_.end() || it->second.done) {
          broken_ = true;
          broken_protocol_ = true;
          reason_ = "peer answered unknown request id " + std::to_string(id);
          cv_.notify_all();
          return;
        }
        it->second = std::move(filled);
      }
      cv_.notify_all();
    }
  }

  bool broken() const {
    std::lock_guard lock(mutex_);
    return broken_;
  }

  void fail_if_broken() const {
    std::lock_guard lock(mutex_);
    if (broken_) throw_failure();
  }

  /// Caller holds mutex_ or knows the state is settled.
  [[noreturn]] void throw_failure() const {
    if (broken_protocol_) throw ProtocolError("external model unusable: " + reason_);
    throw ModelError("external model unusable: " + reason_);
  }

  void mark_broken(const std::string& reason, bool protocol_violation) const {
    {
      std::lock_guard lock(mutex_);
      if (broken_) return;
      broken_ = true;
      broken_protocol_ = protocol_violation;
      reason_ = reason;
      if (closing_) return;
    }
    log_warning("external model: " + reason);
    cv_.notify_all();
  }

  std::unique_ptr<LineChannel> channel_;
  Shape shape_;
  ParentSpace space_;
  ExternalOptions options_;
  std::ptrdiff_t pipelining_ = 1;
  std::unique_ptr<std::counting_semaphore<kMaxPipelining>> slots_;

  mutable std::mutex write_mutex_;
  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  mutable std::map<std::uint64_t, Slot> pending_;
  mutable std::uint64_t next_id_ = 1;
  mutable bool broken_ = false;
  mutable bool broken_protocol_ = false;
  bool closing_ = false;
  mutable std::string reason_;

  std::jthread reader_;
};

}  // namespace

std::shared_ptr<const CounterfactualModel> connect_external(std::unique_ptr<LineChannel> channel, const Shape& shape,
                                                            const ParentSpace& space, ExternalOptions options) {
  if (!channel) throw ContractError("null channel");
  return std::make_shared<ExternalModel>(std::move(channel), shape, space, options);
}

std::shared_ptr<const CounterfactualModel> proxy_external(std::string_view endpoint, const Shape& shape,
                                                          const ParentSpace& space, ExternalOptions options) {
  if (endpoint.starts_with("stdio:")) {
    const auto command = endpoint.substr(6);
    if (command.empty()) throw ContractError("stdio endpoint needs a command");
    return connect_external(spawn_child(std::string(command)), shape, space, options);
  }
  if (endpoint.starts_with("tcp:")) {
    const auto rest = endpoint.substr(4);
    const auto colon = rest.rfind(':');
    unsigned port = 0;
    if (colon == std::string_view::npos) throw ContractError("tcp endpoint must be tcp:<host>:<port>");
    const auto port_text = rest.substr(colon + 1);
    const auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc() || end != port_text.data() + port_text.size() || port == 0 || port > 65535) {
      throw ContractError("bad port in endpoint '" + std::string(endpoint) + "'");
    }
    return connect_external(connect_tcp(std::string(rest.substr(0, colon)), static_cast<std::uint16_t>(port)),
                            shape, space, options);
  }
  throw ContractError("unknown endpoint '" + std::string(endpoint) + "' (expected stdio:<cmd> or tcp:<host>:<port>)");
}

}  // namespace axbench
