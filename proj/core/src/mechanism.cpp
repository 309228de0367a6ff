#include "axbench/mechanism.hpp"

#include <cmath>
#include <cstring>

#include "axbench/errors.hpp"

namespace axbench {
namespace {

constexpr std::size_t kNoiseBytes = 6 * sizeof(double) + 1;

void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

double get_f64(const std::uint8_t* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

ExogenousRecord ColourDigitNoise::encode() const {
  ExogenousRecord r;
  r.bytes.reserve(kNoiseBytes);
  put_f64(r.bytes, style.thickness);
  put_f64(r.bytes, style.slant);
  put_f64(r.bytes, style.scale);
  put_f64(r.bytes, style.offset[0]);
  put_f64(r.bytes, style.offset[1]);
  put_f64(r.bytes, hue_draw);
  r.bytes.push_back(hue_outlier ? 1 : 0);
  return r;
}

ColourDigitNoise ColourDigitNoise::decode(const ExogenousRecord& record) {
  if (record.bytes.size() != kNoiseBytes) {
    throw FormatError("colour-digit noise record must be " + std::to_string(kNoiseBytes) + " bytes, got " +
                      std::to_string(record.bytes.size()));
  }
  const auto* p = record.bytes.data();
  ColourDigitNoise n;
  n.style.thickness = get_f64(p);
  n.style.slant = get_f64(p + 8);
  n.style.scale = get_f64(p + 16);
  n.style.offset = {get_f64(p + 24), get_f64(p + 32)};
  n.hue_draw = get_f64(p + 40);
  n.hue_outlier = p[48] != 0;
  return n;
}

ColourDigitMechanism::ColourDigitMechanism()
    : space_({ParentDescriptor::discrete("digit", 10), ParentDescriptor::continuous("hue", 0.0, 1.0)}) {}

Observation ColourDigitMechanism::render(const ExogenousRecord& noise, const ParentAssignment& pa) const {
  pa.validate(space_);
  const auto n = ColourDigitNoise::decode(noise);
  return colourise(render_digit(static_cast<int>(pa[kDigit]), n.style), pa[kHue]);
}

ExogenousRecord ColourDigitMechanism::sample_noise(CounterRng& rng) const {
  ColourDigitNoise n;
  n.style = GlyphStyle::sample(rng);
  return n.encode();
}

ExogenousRecord ColourDigitMechanism::blend_noise(const ExogenousRecord& a, const ExogenousRecord& b,
                                                  double alpha) const {
  const auto na = ColourDigitNoise::decode(a);
  const auto nb = ColourDigitNoise::decode(b);
  ColourDigitNoise out = na;
  out.style = GlyphStyle::blend(na.style, nb.style, alpha);
  return out.encode();
}

ShapesMechanism::ShapesMechanism()
    : space_({ParentDescriptor::discrete("background", 8), ParentDescriptor::discrete("object_colour", 8),
              ParentDescriptor::discrete("shape", 3), ParentDescriptor::discrete("scale", 4)}) {}

Observation ShapesMechanism::render(const ExogenousRecord&, const ParentAssignment& pa) const {
  pa.validate(space_);
  const auto bg = hsv_to_rgb(pa[0] / 8.0, 0.5, 0.6);
  const auto fg = hsv_to_rgb(pa[1] / 8.0 + 1.0 / 16.0, 1.0, 1.0);
  const int kind = static_cast<int>(pa[2]);
  const double half = 8.0 + 4.0 * pa[3];
  constexpr double c = 32.0;

  auto inside = [&](double x, double y) {
    const double dx = x - c, dy = y - c;
    switch (kind) {
      case 0: return std::abs(dx) <= half && std::abs(dy) <= half;
      case 1: return dx * dx + dy * dy <= half * half;
      default: {
        // Upward isosceles triangle inscribed in the square of side 2 * half.
        if (dy < -half || dy > half) return false;
        const double frac = (dy + half) / (2.0 * half);
        return std::abs(dx) <= half * frac;
      }
    }
  };

  const Shape s = shape();
  std::vector<float> px(s.size());
  for (std::uint32_t r = 0; r < s.height; ++r) {
    for (std::uint32_t col = 0; col < s.width; ++col) {
      const auto& rgb = inside(col + 0.5, r + 0.5) ? fg : bg;
      const std::size_t base = (static_cast<std::size_t>(r) * s.width + col) * 3;
      for (int ch = 0; ch < 3; ++ch) px[base + ch] = static_cast<float>(rgb[ch]);
    }
  }
  return Observation(s, std::move(px));
}

std::shared_ptr<const Mechanism> colour_digit_mechanism() {
  static const auto m = std::make_shared<const ColourDigitMechanism>();
  return m;
}

std::shared_ptr<const Mechanism> shapes_mechanism() {
  static const auto m = std::make_shared<const ShapesMechanism>();
  return m;
}

std::shared_ptr<const Mechanism> find_mechanism(const Shape& shape, const ParentSpace& space) {
  for (auto m : {colour_digit_mechanism(), shapes_mechanism()}) {
    if (m->shape() == shape && m->space() == space) return m;
  }
  return nullptr;
}

}  // namespace axbench
