#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "axbench/glyph.hpp"
#include "axbench/observation.hpp"
#include "axbench/parents.hpp"
#include "axbench/rng.hpp"

namespace axbench {

/// Opaque per-sample record of the true exogenous noise used by a synthetic SCM.
struct ExogenousRecord {
  std::vector<std::uint8_t> bytes;

  friend bool operator==(const ExogenousRecord&, const ExogenousRecord&) = default;
};

/// The generative mechanism x := g(noise, pa) of a synthetic SCM.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual std::string name() const = 0;
  virtual Shape shape() const = 0;
  virtual const ParentSpace& space() const = 0;

  /// Pure function of (noise, parents).
  virtual Observation render(const ExogenousRecord& noise, const ParentAssignment& pa) const = 0;
  virtual ExogenousRecord sample_noise(CounterRng& rng) const = 0;
  /// Componentwise alpha * a + (1 - alpha) * b in noise space.
  virtual ExogenousRecord blend_noise(const ExogenousRecord& a, const ExogenousRecord& b, double alpha) const = 0;
};

/// Noise of one colour-digit sample: the glyph style plus how the hue was drawn.
struct ColourDigitNoise {
  GlyphStyle style;
  bool hue_outlier = false;  // drawn from Uniform(0, 1) instead of the confounded Normal
  double hue_draw = 0.0;     // standard-normal draw behind a confounded hue (0 otherwise)

  ExogenousRecord encode() const;
  static ColourDigitNoise decode(const ExogenousRecord& record);
};

/// digit ~ {0..9}, hue in [0, 1]; x = colourise(render_digit(digit, style), hue).
class ColourDigitMechanism final : public Mechanism {
 public:
  ColourDigitMechanism();

  std::string name() const override { return "colour-digit"; }
  Shape shape() const override { return kColourGlyphShape; }
  const ParentSpace& space() const override { return space_; }
  Observation render(const ExogenousRecord& noise, const ParentAssignment& pa) const override;
  ExogenousRecord sample_noise(CounterRng& rng) const override;
  ExogenousRecord blend_noise(const ExogenousRecord& a, const ExogenousRecord& b, double alpha) const override;

  static constexpr std::size_t kDigit = 0;
  static constexpr std::size_t kHue = 1;

 private:
  ParentSpace space_;
};

/// 64x64 procedural scene with four independent discrete parents and no
/// exogenous noise: background colour (8), object colour (8), shape (3:
/// square, disc, triangle), scale (4).
class ShapesMechanism final : public Mechanism {
 public:
  ShapesMechanism();

  std::string name() const override { return "shapes"; }
  Shape shape() const override { return {64, 64, 3}; }
  const ParentSpace& space() const override { return space_; }
  Observation render(const ExogenousRecord& noise, const ParentAssignment& pa) const override;
  ExogenousRecord sample_noise(CounterRng&) const override { return {}; }
  ExogenousRecord blend_noise(const ExogenousRecord&, const ExogenousRecord&, double) const override { return {}; }

 private:
  ParentSpace space_;
};

std::shared_ptr<const Mechanism> colour_digit_mechanism();
std::shared_ptr<const Mechanism> shapes_mechanism();

/// Recognizes a built-in mechanism by its observation shape and parent
/// space; nullptr when the data comes from elsewhere.
std::shared_ptr<const Mechanism> find_mechanism(const Shape& shape, const ParentSpace& space);

}  // namespace axbench
