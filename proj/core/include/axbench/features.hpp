#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "axbench/observation.hpp"

namespace axbench {

/// Fixed feature map used by the linear pseudo-oracles. For an H x W x C
/// observation the vector is, in order:
///
///   1. the raw pixels, row-major with interleaved channels  (H * W * C)
///   2. per-channel means                                    (C)
///   3. per-channel means of 4x4 pixel blocks, partial blocks
///      at the right/bottom edge averaged over their pixels  (C * ceil(H/4) * ceil(W/4))
///   4. circular hue embedding of the hexagonal hue angle
///      atan2(sqrt(3)(G - B), 2R - G - B) over pixels whose
///      brightest channel exceeds 0.5: mean cos, mean sin, and
///      the circular mean angle in turns, in [0, 1);
///      all zero when there are none or C == 1             (3)
///
/// so 28x28x3 gives 2352 + 3 + 147 + 3 = 2505 features.
inline constexpr std::size_t kBlockSize = 4;
inline constexpr const char* kFeatureMapName = "pixels+channel-means+block4-means+hue-turn-embedding";

std::size_t feature_length(const Shape& shape) noexcept;

void featurize_into(const Observation& x, std::span<double> out);
std::vector<double> featurize(const Observation& x);

}  // namespace axbench
