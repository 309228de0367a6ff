#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "axbench/dataset.hpp"

namespace axbench {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Loads an IDX image/label pair (big-endian headers, unsigned-byte pixels
/// scaled by 1/255) as a grayscale dataset with a single 10-way "digit" parent.
LabeledDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Writes an IDX pair. `pixels` holds count * rows * cols bytes.
void write_idx(const std::filesystem::path& images, const std::filesystem::path& labels, std::uint32_t rows,
               std::uint32_t cols, std::span<const std::uint8_t> pixels, std::span<const std::uint8_t> label_bytes);

}  // namespace axbench
