#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "axbench/dataset.hpp"

namespace axbench {

/// Histogram of one parent. Continuous parents get equal-width bins over the
/// declared domain, right-open except the last; discrete parents map each
/// class to its own bin.
struct Binning {
  std::size_t parent = 0;
  bool discrete = false;
  std::vector<double> edges;  // n_bins + 1 ascending edges (continuous only)
  std::vector<std::size_t> counts;

  std::size_t bins() const noexcept { return counts.size(); }
  std::size_t bin_of(double value) const;
};

Binning bin_parent(const LabeledDataset& dataset, std::size_t k, std::size_t n_bins);

/// One binning per parent: continuous parents get `n_bins`, discrete parents identity.
std::vector<Binning> bin_all(const LabeledDataset& dataset, std::size_t n_bins);

struct SupportCell {
  std::vector<std::size_t> bins;  // one bin index per parent, in parent order
  std::size_t count = 0;
};

/// Occupancy of (target bin) x (joint bin of the remaining parents) over the
/// target's observed bins and the observed joint bins of the others.
struct SupportReport {
  std::size_t target = 0;
  std::vector<SupportCell> cells;
  std::vector<std::vector<std::size_t>> empty;
  bool full_support = true;
};

SupportReport support_report(const LabeledDataset& dataset, std::size_t target, std::span<const Binning> binnings);

/// {"target": k, "cells": [[[bins], count], ...], "empty": [[bins], ...], "full_support": bool}
std::string support_report_json(const SupportReport& report);

/// Simulated intervention by resampling: each target's bin is drawn from its
/// own marginal, the remaining parents' joint bin from theirs, and an
/// original sample is drawn uniformly with replacement from the matching
/// cell. Throws SupportError naming the empty cells when the product of
/// marginals is not covered. n_out == 0 means "same size as the source".
LabeledDataset resample_intervention(const LabeledDataset& dataset, std::span<const std::size_t> targets,
                                     std::span<const Binning> binnings, std::size_t n_out, std::uint64_t seed);

}  // namespace axbench
