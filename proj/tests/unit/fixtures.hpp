#pragma once

#include <cstdint>
#include <vector>

#include "axbench/dataset.hpp"
#include "axbench/rng.hpp"

namespace fixtures {

inline const axbench::LabeledDataset& small_unconfounded() {
  static const auto d = axbench::sample_dataset(axbench::ScmKind::unconfounded(), 300, 11);
  return d;
}

inline axbench::Observation random_observation(axbench::Shape shape, std::uint64_t seed, std::uint64_t stream = 0) {
  axbench::CounterRng rng(seed, stream);
  std::vector<float> px(shape.size());
  for (auto& v : px) v = static_cast<float>(rng.uniform());
  return axbench::Observation(shape, std::move(px));
}

}  // namespace fixtures

#include <filesystem>
#include <string>
#include <unistd.h>

namespace fixtures {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("axbench-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures

#include <cmath>
#include <numbers>

#include "axbench/glyph.hpp"

namespace fixtures {

/// Solid-colour images labelled with their hexagonal hue angle in turns.
inline axbench::LabeledDataset solid_hues(std::size_t n, std::uint64_t seed, axbench::Shape shape = {8, 8, 3}) {
  axbench::CounterRng rng(seed, 0);
  std::vector<axbench::LabeledDataset::ObservationPtr> obs;
  std::vector<axbench::ParentAssignment> pa;
  for (std::size_t i = 0; i < n; ++i) {
    const double h = rng.uniform(0.0, 0.99);
    const double v = rng.uniform(0.6, 1.0);
    const auto rgb = axbench::hsv_to_rgb(h, 1.0, v);
    std::vector<float> px(shape.size());
    for (std::size_t p = 0; p < px.size(); ++p) px[p] = static_cast<float>(rgb[p % 3]);
    // Label with the hexagonal hue angle of the stored pixels, in turns.
    const double r = px[0], g = px[1], b = px[2];
    double turn = std::atan2(std::sqrt(3.0) * (g - b), 2.0 * r - g - b) / (2.0 * std::numbers::pi);
    if (turn < 0.0) turn += 1.0;
    obs.push_back(std::make_shared<const axbench::Observation>(shape, std::move(px)));
    pa.push_back(axbench::ParentAssignment({turn}));
  }
  return {shape, axbench::ParentSpace({axbench::ParentDescriptor::continuous("hue", 0.0, 1.0)}), obs, pa,
          std::nullopt, {"solid", seed}};
}

/// Noisy red or green squares labelled 0 (red) or 1 (green).
inline axbench::LabeledDataset red_green(std::size_t n, std::uint64_t seed) {
  const axbench::Shape shape{4, 4, 3};
  axbench::CounterRng rng(seed, 0);
  std::vector<axbench::LabeledDataset::ObservationPtr> obs;
  std::vector<axbench::ParentAssignment> pa;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    std::vector<float> px(shape.size());
    for (std::size_t p = 0; p < px.size(); ++p) {
      const bool lit = static_cast<int>(p % 3) == label;
      px[p] = static_cast<float>(lit ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.3));
    }
    obs.push_back(std::make_shared<const axbench::Observation>(shape, std::move(px)));
    pa.push_back(axbench::ParentAssignment({static_cast<double>(label)}));
  }
  return {shape, axbench::ParentSpace({axbench::ParentDescriptor::discrete("colour", 2)}), obs, pa, std::nullopt,
          {"red-green", seed}};
}

}  // namespace fixtures
