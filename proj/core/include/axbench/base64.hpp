#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace axbench {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws FormatError on invalid characters or length.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Little-endian IEEE-754 payload helpers.
std::string encode_f64(std::span<const double> values);
std::vector<double> decode_f64(std::string_view text);
std::string encode_f32(std::span<const float> values);
std::vector<float> decode_f32(std::string_view text);

}  // namespace axbench
