#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace axbench {

struct Shape {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 0;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(height) * width * channels;
  }
  std::string to_string() const;  // "HxWxC"

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Checks height/width > 0 and channels in {1, 3}.
void validate_shape(const Shape& shape);

/// An H x W x C image of unit-interval intensities, row-major with
/// interleaved channels. Immutable after construction.
class Observation {
 public:
  /// Throws ContractError unless pixels.size() == shape.size() and every
  /// intensity lies in [0, 1].
  Observation(Shape shape, std::vector<float> pixels);

  static Observation zeros(Shape shape);
  static Observation filled(Shape shape, float value);

  /// Clamps into [0, 1] (NaN becomes 0). If `max_change` is given it
  /// receives the largest absolute adjustment made.
  static Observation clamped(Shape shape, std::vector<float> pixels, double* max_change = nullptr);

  const Shape& shape() const noexcept { return shape_; }
  std::span<const float> pixels() const noexcept { return pixels_; }
  float at(std::uint32_t row, std::uint32_t col, std::uint32_t channel) const noexcept {
    return pixels_[(static_cast<std::size_t>(row) * shape_.width + col) * shape_.channels + channel];
  }

  /// FNV-1a over the shape and the raw pixel bytes.
  std::uint64_t content_hash() const noexcept;

  /// Bit-level equality (shape and every pixel's bit pattern).
  friend bool operator==(const Observation& a, const Observation& b) noexcept;

 private:
  Observation() = default;

  Shape shape_;
  std::vector<float> pixels_;
};

}  // namespace axbench
