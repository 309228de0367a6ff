#include "axbench/observation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "axbench/errors.hpp"

namespace axbench {

std::string Shape::to_string() const {
  return std::to_string(height) + "x" + std::to_string(width) + "x" + std::to_string(channels);
}

void validate_shape(const Shape& shape) {
  if (shape.height == 0 || shape.width == 0 || (shape.channels != 1 && shape.channels != 3)) {
    throw ContractError("invalid observation shape " + shape.to_string());
  }
}

Observation::Observation(Shape shape, std::vector<float> pixels) : shape_(shape), pixels_(std::move(pixels)) {
  validate_shape(shape_);
  if (pixels_.size() != shape_.size()) {
    throw ContractError("observation of shape " + shape_.to_string() + " needs " +
                        std::to_string(shape_.size()) + " intensities, got " +
                        std::to_string(pixels_.size()));
  }
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    const float v = pixels_[i];
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw ContractError("intensity " + std::to_string(v) + " at index " + std::to_string(i) +
                          " outside [0, 1]");
    }
  }
}

Observation Observation::zeros(Shape shape) { return filled(shape, 0.0f); }

Observation Observation::filled(Shape shape, float value) {
  return Observation(shape, std::vector<float>(shape.size(), value));
}

Observation Observation::clamped(Shape shape, std::vector<float> pixels, double* max_change) {
  double worst = 0.0;
  for (float& v : pixels) {
    const float c = std::isnan(v) ? 0.0f : std::clamp(v, 0.0f, 1.0f);
    const double change = std::isnan(v) ? 1.0 : std::abs(static_cast<double>(v) - c);
    worst = std::max(worst, change);
    v = c;
  }
  if (max_change) *max_change = worst;
  return Observation(shape, std::move(pixels));
}

std::uint64_t Observation::content_hash() const noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001B3ull;
    }
  };
  mix(&shape_.height, sizeof shape_.height);
  mix(&shape_.width, sizeof shape_.width);
  mix(&shape_.channels, sizeof shape_.channels);
  mix(pixels_.data(), pixels_.size() * sizeof(float));
  return h;
}

bool operator==(const Observation& a, const Observation& b) noexcept {
  return a.shape_ == b.shape_ &&
         std::memcmp(a.pixels_.data(), b.pixels_.data(), a.pixels_.size() * sizeof(float)) == 0;
}

}  // namespace axbench
