#pragma once

#include <array>

#include "axbench/observation.hpp"
#include "axbench/rng.hpp"

namespace axbench {

inline constexpr Shape kGlyphShape{28, 28, 1};
inline constexpr Shape kColourGlyphShape{28, 28, 3};

/// Writing style of a procedural digit; the exogenous noise of the
/// colour-digit mechanism.
struct GlyphStyle {
  double thickness = 1.0;           // [0.5, 2]
  double slant = 0.0;               // [-0.3, 0.3]
  double scale = 1.0;               // [0.8, 1.1]
  std::array<double, 2> offset{};   // (dx, dy) in pixels, each in [-2, 2]

  bool valid() const noexcept;
  static GlyphStyle sample(CounterRng& rng);
  /// Componentwise alpha * a + (1 - alpha) * b.
  static GlyphStyle blend(const GlyphStyle& a, const GlyphStyle& b, double alpha) noexcept;

  friend bool operator==(const GlyphStyle&, const GlyphStyle&) = default;
};

/// Renders a 28x28 grayscale digit from polyline strokes with an
/// anti-aliased pen. Throws ContractError for digit outside 0..9 or an
/// out-of-range style.
Observation render_digit(int digit, const GlyphStyle& style);

/// Six-sector HSV to RGB with S = 1.
std::array<double, 3> hsv_to_rgb(double hue, double saturation, double value) noexcept;

/// Triplicates a 28x28x1 image into RGB with hue `hue`, saturation 1 and
/// value equal to the gray intensity.
Observation colourise(const Observation& gray, double hue);

/// Fraction of pixels (over all channels) with intensity above `threshold`.
double ink_fraction(const Observation& x, double threshold = 0.5) noexcept;

}  // namespace axbench
