#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "axbench/observation.hpp"
#include "axbench/parents.hpp"

namespace axbench::protocol {

/// First message from the serving peer.
struct Hello {
  Shape shape;
  ParentSpace space;
  std::uint32_t pipelining = 1;  // max requests in flight
};

struct Request {
  std::uint64_t id = 0;
  std::vector<float> x;  // row-major H*W*C
  ParentAssignment pa;
  ParentAssignment pa_star;
  std::uint64_t seed = 0;
};

struct Result {
  std::uint64_t id = 0;
  std::vector<float> x_star;
};

struct ErrorReply {
  std::uint64_t id = 0;
  std::string message;
};

struct Shutdown {};

using Message = std::variant<Hello, Request, Result, ErrorReply, Shutdown>;

/// One JSON object, no trailing newline. Pixel payloads are base64 of
/// little-endian f32.
std::string encode(const Message& message);

/// Throws ProtocolError on malformed JSON, an unknown type or missing fields.
Message decode(std::string_view line);

std::string type_name(const Message& message);

}  // namespace axbench::protocol
