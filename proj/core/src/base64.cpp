#include "axbench/base64.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "axbench/errors.hpp"

namespace axbench {
namespace {

static_assert(std::endian::native == std::endian::little, "payload helpers assume a little-endian host");

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<int, 256> make_reverse() {
  std::array<int, 256> r{};
  for (auto& v : r) v = -1;
  for (int i = 0; i < 64; ++i) r[static_cast<unsigned char>(kAlphabet[i])] = i;
  return r;
}
constexpr auto kReverse = make_reverse();

template <typename T>
std::string encode_values(std::span<const T> values) {
  return base64_encode({reinterpret_cast<const std::uint8_t*>(values.data()), values.size_bytes()});
}

template <typename T>
std::vector<T> decode_values(std::string_view text) {
  const auto bytes = base64_decode(text);
  if (bytes.size() % sizeof(T) != 0) throw FormatError("payload length is not a multiple of the element size");
  std::vector<T> out(bytes.size() / sizeof(T));
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (std::uint32_t{bytes[i]} << 16) | (std::uint32_t{bytes[i + 1]} << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (const std::size_t rest = bytes.size() - i; rest > 0) {
    std::uint32_t v = std::uint32_t{bytes[i]} << 16;
    if (rest == 2) v |= std::uint32_t{bytes[i + 1]} << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw FormatError("base64 length must be a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) throw FormatError("misplaced base64 padding");
        v[j] = 0;
        ++pad;
      } else {
        if (pad) throw FormatError("misplaced base64 padding");
        v[j] = kReverse[static_cast<unsigned char>(c)];
        if (v[j] < 0) throw FormatError("invalid base64 character");
      }
    }
    const std::uint32_t word = (std::uint32_t(v[0]) << 18) | (std::uint32_t(v[1]) << 12) |
                               (std::uint32_t(v[2]) << 6) | std::uint32_t(v[3]);
    out.push_back(static_cast<std::uint8_t>(word >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(word >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(word));
  }
  return out;
}

std::string encode_f64(std::span<const double> values) { return encode_values(values); }
std::vector<double> decode_f64(std::string_view text) { return decode_values<double>(text); }
std::string encode_f32(std::span<const float> values) { return encode_values(values); }
std::vector<float> decode_f32(std::string_view text) { return decode_values<float>(text); }

}  // namespace axbench
