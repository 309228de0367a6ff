#include "axbench/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "axbench/errors.hpp"

namespace axbench {
namespace {

std::size_t blocks(std::uint32_t extent) noexcept { return (extent + kBlockSize - 1) / kBlockSize; }

}  // namespace

std::size_t feature_length(const Shape& shape) noexcept {
  return shape.size() + shape.channels + shape.channels * blocks(shape.height) * blocks(shape.width) + 3;
}

void featurize_into(const Observation& x, std::span<double> out) {
  const Shape& s = x.shape();
  if (out.size() != feature_length(s)) throw ContractError("feature buffer has the wrong length");
  const auto px = x.pixels();
  const std::size_t C = s.channels;
  std::copy(px.begin(), px.end(), out.begin());
  std::size_t pos = px.size();

  // channel means
  for (std::size_t c = 0; c < C; ++c) {
    double sum = 0.0;
    for (std::size_t i = c; i < px.size(); i += C) sum += px[i];
    out[pos++] = sum / static_cast<double>(s.height * s.width);
  }

  // block means
  const std::size_t by = blocks(s.height), bx = blocks(s.width);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t br = 0; br < by; ++br) {
      for (std::size_t bc = 0; bc < bx; ++bc) {
        const std::size_t r0 = br * kBlockSize, r1 = std::min<std::size_t>(r0 + kBlockSize, s.height);
        const std::size_t c0 = bc * kBlockSize, c1 = std::min<std::size_t>(c0 + kBlockSize, s.width);
        double sum = 0.0;
        for (std::size_t r = r0; r < r1; ++r) {
          for (std::size_t col = c0; col < c1; ++col) sum += px[(r * s.width + col) * C + c];
        }
        out[pos++] = sum / static_cast<double>((r1 - r0) * (c1 - c0));
      }
    }
  }

  // hue embedding
  double cs = 0.0, sn = 0.0;
  std::size_t bright = 0;
  if (C == 3) {
    for (std::size_t i = 0; i < px.size(); i += 3) {
      const double r = px[i], g = px[i + 1], b = px[i + 2];
      if (std::max({r, g, b}) <= 0.5) continue;
      const double angle = std::atan2(std::sqrt(3.0) * (g - b), 2.0 * r - g - b);
      cs += std::cos(angle);
      sn += std::sin(angle);
      ++bright;
    }
  }
  double turn = 0.0;
  if (bright && (cs != 0.0 || sn != 0.0)) {
    turn = std::atan2(sn, cs) / (2.0 * std::numbers::pi);
    if (turn < 0.0) turn += 1.0;
  }
  out[pos++] = bright ? cs / static_cast<double>(bright) : 0.0;
  out[pos++] = bright ? sn / static_cast<double>(bright) : 0.0;
  out[pos++] = turn;
}

std::vector<double> featurize(const Observation& x) {
  std::vector<double> out(feature_length(x.shape()));
  featurize_into(x, out);
  return out;
}

}  // namespace axbench
