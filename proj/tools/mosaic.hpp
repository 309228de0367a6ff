#pragma once

#include <filesystem>
#include <vector>

#include "axbench/model.hpp"
#include "axbench/dataset.hpp"

namespace axbench::cli {

/// Tiles equally shaped observations into rows of `columns` tiles separated
/// by a 2-pixel gap and writes an 8-bit RGB PNG.
void write_mosaic(const std::filesystem::path& path, const std::vector<Observation>& tiles, std::size_t columns);

/// One strip per test sample: x, the null-intervened x after 1 and m
/// applications, then per target the partial counterfactual and the result
/// of one reversibility cycle.
std::vector<Observation> counterfactual_strips(const CounterfactualModel& model, const LabeledDataset& test,
                                               std::size_t rows, std::size_t m, std::uint64_t seed,
                                               std::size_t& columns);

}  // namespace axbench::cli
