#pragma once

#include <cstddef>
#include <cstdint>

#include "axbench/channel.hpp"
#include "axbench/model.hpp"

namespace axbench {

struct ServeOptions {
  std::uint32_t pipelining = 1;  // advertised in Hello
  /// Stop without answering once this many requests have been answered
  /// (0 = no limit). Used to simulate a peer crash.
  std::size_t max_requests = 0;
};

enum class ServeEnd { shutdown, eof, request_limit };

/// Sends Hello, then answers Requests until Shutdown or end of input. A
/// failing call or a malformed line is answered with an Error message and
/// the loop continues.
ServeEnd serve_model(const CounterfactualModel& model, LineChannel& channel, const ServeOptions& options = {});

}  // namespace axbench
