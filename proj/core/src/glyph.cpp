#include "axbench/glyph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "axbench/errors.hpp"

namespace axbench {
namespace {

struct Point {
  double x, y;
};
using Polyline = std::vector<Point>;
using Strokes = std::vector<Polyline>;

// Glyph box in pixels before scaling; unit coordinates map onto it with y down.
constexpr double kBoxWidth = 12.0;
constexpr double kBoxHeight = 18.0;
constexpr double kCentre = 14.0;

// Elliptical arc from a0 to a1 (degrees, y down so 270 is the top).
Polyline arc(double cx, double cy, double rx, double ry, double a0, double a1, int steps = 24) {
  Polyline pts;
  pts.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double a = (a0 + (a1 - a0) * i / steps) * std::numbers::pi / 180.0;
    pts.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
  }
  return pts;
}

Polyline join(Polyline a, const Polyline& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::array<Strokes, 10> build_strokes() {
  std::array<Strokes, 10> s;
  s[0] = {arc(0.5, 0.5, 0.45, 0.5, 0, 360, 40)};
  s[1] = {{{0.2, 0.22}, {0.55, 0.0}, {0.55, 1.0}}, {{0.2, 1.0}, {0.9, 1.0}}};
  s[2] = {join(arc(0.5, 0.28, 0.42, 0.28, 190, 390), Polyline{{0.0, 1.0}, {1.0, 1.0}})};
  s[3] = {join(arc(0.5, 0.26, 0.4, 0.26, 210, 450), arc(0.5, 0.76, 0.46, 0.24, 270, 510))};
  s[4] = {{{0.72, 1.0}, {0.72, 0.0}, {0.0, 0.68}, {1.0, 0.68}}};
  s[5] = {join(Polyline{{0.92, 0.0}, {0.18, 0.0}, {0.1, 0.46}}, arc(0.5, 0.7, 0.45, 0.3, 220, 510))};
  s[6] = {join(Polyline{{0.82, 0.0}}, arc(0.5, 0.7, 0.42, 0.3, 200, 560, 36))};
  s[7] = {{{0.0, 0.0}, {1.0, 0.0}, {0.35, 1.0}}, {{0.3, 0.52}, {0.85, 0.52}}};
  s[8] = {arc(0.5, 0.25, 0.36, 0.25, 0, 360, 32), arc(0.5, 0.74, 0.46, 0.26, 0, 360, 32)};
  s[9] = {arc(0.5, 0.3, 0.42, 0.3, -20, 340, 36), {{0.92, 0.3}, {0.62, 1.0}}};
  return s;
}

const std::array<Strokes, 10>& strokes() {
  static const std::array<Strokes, 10> table = build_strokes();
  return table;
}

double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x, ey = a.y + t * dy - p.y;
  return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

bool GlyphStyle::valid() const noexcept {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  return in(thickness, 0.5, 2.0) && in(slant, -0.3, 0.3) && in(scale, 0.8, 1.1) && in(offset[0], -2.0, 2.0) &&
         in(offset[1], -2.0, 2.0);
}

GlyphStyle GlyphStyle::sample(CounterRng& rng) {
  GlyphStyle s;
  s.thickness = rng.uniform(0.5, 2.0);
  s.slant = rng.uniform(-0.3, 0.3);
  s.scale = rng.uniform(0.8, 1.1);
  s.offset[0] = rng.uniform(-2.0, 2.0);
  s.offset[1] = rng.uniform(-2.0, 2.0);
  return s;
}

GlyphStyle GlyphStyle::blend(const GlyphStyle& a, const GlyphStyle& b, double alpha) noexcept {
  auto mix = [alpha](double u, double v) { return alpha * u + (1.0 - alpha) * v; };
  GlyphStyle s;
  s.thickness = mix(a.thickness, b.thickness);
  s.slant = mix(a.slant, b.slant);
  s.scale = mix(a.scale, b.scale);
  s.offset = {mix(a.offset[0], b.offset[0]), mix(a.offset[1], b.offset[1])};
  return s;
}

Observation render_digit(int digit, const GlyphStyle& style) {
  if (digit < 0 || digit > 9) throw ContractError("digit " + std::to_string(digit) + " outside 0..9");
  if (!style.valid()) throw ContractError("glyph style out of range");

  const double radius = 0.75 + 0.75 * style.thickness;
  const double reach = radius + 0.5;

  auto to_pixel = [&](Point u) {
    const double gx = (u.x - 0.5) * kBoxWidth;
    const double gy = (u.y - 0.5) * kBoxHeight;
    const double sx = gx - style.slant * gy;  // positive slant leans the top to the right
    return Point{kCentre + style.scale * sx + style.offset[0], kCentre + style.scale * gy + style.offset[1]};
  };

  const auto w = static_cast<int>(kGlyphShape.width);
  const auto h = static_cast<int>(kGlyphShape.height);
  std::vector<double> dist(kGlyphShape.size(), reach);

  for (const auto& line : strokes()[static_cast<std::size_t>(digit)]) {
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      const Point a = to_pixel(line[i]);
      const Point b = to_pixel(line[i + 1]);
      const int c0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - reach)));
      const int c1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + reach)));
      const int r0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - reach)));
      const int r1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + reach)));
      for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
          const double d = segment_distance({c + 0.5, r + 0.5}, a, b);
          double& slot = dist[static_cast<std::size_t>(r * w + c)];
          slot = std::min(slot, d);
        }
      }
    }
  }

  std::vector<float> pixels(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    pixels[i] = static_cast<float>(std::clamp(reach - dist[i], 0.0, 1.0));
  }
  return Observation(kGlyphShape, std::move(pixels));
}

std::array<double, 3> hsv_to_rgb(double hue, double saturation, double value) noexcept {
  const double h6 = hue * 6.0;
  const double fl = std::floor(h6);
  const double f = h6 - fl;
  const int sector = ((static_cast<int>(fl) % 6) + 6) % 6;
  const double p = value * (1.0 - saturation);
  const double q = value * (1.0 - saturation * f);
  const double t = value * (1.0 - saturation * (1.0 - f));
  switch (sector) {
    case 0: return {value, t, p};
    case 1: return {q, value, p};
    case 2: return {p, value, t};
    case 3: return {p, q, value};
    case 4: return {t, p, value};
    default: return {value, p, q};
  }
}

Observation colourise(const Observation& gray, double hue) {
  if (gray.shape().channels != 1) throw ContractError("colourise expects a single-channel image");
  const auto src = gray.pixels();
  std::vector<float> rgb(src.size() * 3);
  // With S = 1 every channel is V times a hue-only factor.
  const auto factors = hsv_to_rgb(hue, 1.0, 1.0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = src[i];
    for (int c = 0; c < 3; ++c) {
      rgb[3 * i + c] = static_cast<float>(v * factors[c]);
    }
  }
  return Observation({gray.shape().height, gray.shape().width, 3}, std::move(rgb));
}

double ink_fraction(const Observation& x, double threshold) noexcept {
  const auto px = x.pixels();
  const auto n = std::count_if(px.begin(), px.end(), [threshold](float v) { return v > threshold; });
  return static_cast<double>(n) / static_cast<double>(px.size());
}

}  // namespace axbench
