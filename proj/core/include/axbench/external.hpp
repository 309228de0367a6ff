#pragma once

#include <chrono>
#include <memory>
#include <string_view>

#include "axbench/channel.hpp"
#include "axbench/model.hpp"

namespace axbench {

struct ExternalOptions {
  std::chrono::milliseconds timeout{60000};           // per request
  std::chrono::milliseconds handshake_timeout{60000};
};

/// Counterfactual model served by a peer over the line protocol. Reads the
/// peer's Hello and throws ProtocolError unless it advertises `shape` and
/// `space`. Each apply becomes one Request/Result exchange; up to the
/// peer's advertised pipelining count may be in flight at once.
///
/// A timeout, a malformed message, a Result for an unknown id or a closed
/// connection fail the pending calls and every later call with ModelError
/// (ProtocolError for protocol violations); an Error reply fails only its
/// own call.
std::shared_ptr<const CounterfactualModel> connect_external(std::unique_ptr<LineChannel> channel, const Shape& shape,
                                                            const ParentSpace& space, ExternalOptions options = {});

/// Endpoint forms: "stdio:<shell command>" or "tcp:<host>:<port>".
std::shared_ptr<const CounterfactualModel> proxy_external(std::string_view endpoint, const Shape& shape,
                                                          const ParentSpace& space, ExternalOptions options = {});

}  // namespace axbench
