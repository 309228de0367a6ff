#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace axbench {

/// Pairwise (cascade) summation; result is independent of thread scheduling
/// because the tree shape depends only on the length.
double pairwise_sum(std::span<const double> values) noexcept;
double mean(std::span<const double> values) noexcept;
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> values) noexcept;

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  double cramers_v = 0.0;
};

/// Pearson chi-square test of independence on a rows x cols contingency
/// table. Rows or columns with zero total are dropped before testing.
ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table);

/// Contingency table from two label vectors with the given cardinalities.
std::vector<std::vector<double>> contingency(std::span<const std::size_t> a, std::size_t a_levels,
                                             std::span<const std::size_t> b, std::size_t b_levels);

}  // namespace axbench
