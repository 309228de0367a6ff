#pragma once

#include <filesystem>
#include <iosfwd>

#include "axbench/dataset.hpp"

namespace axbench {

/// CFDS1 dataset container, little-endian:
///
///   "CFDS1\n"  u32 version=1  u32 n, H, W, C  u16 parent count
///   per parent: u8 kind (0 discrete, 1 continuous), u16 name length, UTF-8 name,
///               u32 cardinality | f64 lower, f64 upper
///   n * P f64 parent values (record-major)
///   n * H * W * C f32 pixels
///   u8 has_exog; if 1, per record: u32 length + opaque bytes
///
/// Provenance is not stored; loaded datasets report source "file" and seed 0.
void write_container(const LabeledDataset& dataset, std::ostream& out);
void write_container(const LabeledDataset& dataset, const std::filesystem::path& path);

/// Throws FormatError on bad magic, unsupported version, truncation or
/// values outside their declared domain.
LabeledDataset read_container(std::istream& in);
LabeledDataset read_container(const std::filesystem::path& path);

}  // namespace axbench
