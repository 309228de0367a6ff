#include "axbench/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "axbench/errors.hpp"

namespace axbench {

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) noexcept {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [m](double v) { return (v - m) * (v - m); });
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(values.size() - 1));
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table) {
  std::vector<double> rows, cols;
  if (table.empty()) throw ContractError("empty contingency table");
  const std::size_t ncol = table.front().size();
  std::vector<double> col_tot(ncol, 0.0);
  std::vector<std::size_t> keep_rows;
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (table[r].size() != ncol) throw ContractError("ragged contingency table");
    double t = 0.0;
    for (std::size_t c = 0; c < ncol; ++c) {
      t += table[r][c];
      col_tot[c] += table[r][c];
    }
    if (t > 0.0) {
      keep_rows.push_back(r);
      rows.push_back(t);
    }
  }
  std::vector<std::size_t> keep_cols;
  for (std::size_t c = 0; c < ncol; ++c) {
    if (col_tot[c] > 0.0) {
      keep_cols.push_back(c);
      cols.push_back(col_tot[c]);
    }
  }
  ChiSquareResult res;
  if (rows.size() < 2 || cols.size() < 2) return res;
  double total = 0.0;
  for (double t : rows) total += t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double expected = rows[i] * cols[j] / total;
      const double d = table[keep_rows[i]][keep_cols[j]] - expected;
      res.statistic += d * d / expected;
    }
  }
  res.dof = (rows.size() - 1) * (cols.size() - 1);
  boost::math::chi_squared dist(static_cast<double>(res.dof));
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  const double k = static_cast<double>(std::min(rows.size(), cols.size()) - 1);
  res.cramers_v = std::sqrt(res.statistic / (total * k));
  return res;
}

std::vector<std::vector<double>> contingency(std::span<const std::size_t> a, std::size_t a_levels,
                                             std::span<const std::size_t> b, std::size_t b_levels) {
  if (a.size() != b.size()) throw ContractError("contingency inputs differ in length");
  std::vector<std::vector<double>> t(a_levels, std::vector<double>(b_levels, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= a_levels || b[i] >= b_levels) throw ContractError("label outside declared levels");
    t[a[i]][b[i]] += 1.0;
  }
  return t;
}

}  // namespace axbench
