#include "axbench/soundness.hpp"

#include <cmath>

#include "axbench/errors.hpp"

namespace axbench {

double l1(const Observation& a, const Observation& b) {
  if (a.shape() != b.shape()) {
    throw ContractError("l1: shape mismatch " + a.shape().to_string() + " vs " + b.shape().to_string());
  }
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    sum += std::abs(static_cast<double>(pa[i]) - static_cast<double>(pb[i]));
  }
  return 100.0 * sum / static_cast<double>(pa.size());
}

DistanceFn l1_distance() { return {"l1", &l1}; }

DistanceFn distance_by_id(std::string_view id) {
  if (id == "l1") return l1_distance();
  throw ContractError("unknown distance '" + std::string(id) + "'");
}

std::vector<double> composition(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                                std::size_t m, const DistanceFn& d, std::uint64_t function_seed) {
  if (m < 1) throw ContractError("functional power m must be at least 1");
  std::vector<double> out;
  out.reserve(m);
  Observation current = x;
  for (std::size_t i = 0; i < m; ++i) {
    current = apply(model, current, pa, pa, function_seed);
    out.push_back(d(x, current));
  }
  return out;
}

std::vector<double> reversibility(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                                  const ParentAssignment& pa_star, std::size_t m, const DistanceFn& d,
                                  std::uint64_t function_seed) {
  if (m < 1) throw ContractError("functional power m must be at least 1");
  std::vector<double> out;
  out.reserve(m);
  Observation current = x;
  for (std::size_t i = 0; i < m; ++i) {
    const Observation forward = apply(model, current, pa, pa_star, function_seed);
    current = apply(model, forward, pa_star, pa, function_seed);
    out.push_back(d(x, current));
  }
  return out;
}

double parent_distance(const Oracle& oracle, const Observation& x, double target) {
  const double pred = oracle.predict(x);
  if (oracle.descriptor().is_discrete()) return pred == target ? 1.0 : 0.0;
  return 100.0 * std::abs(pred - target);
}

double effectiveness(const CounterfactualModel& model, const Oracle& oracle, const Observation& x,
                     const ParentAssignment& pa, std::size_t k, double pa_k_star, std::uint64_t function_seed) {
  const std::size_t j = oracle.parent();
  if (j >= model.space().size() || model.space()[j].name != oracle.descriptor().name) {
    throw ContractError("oracle parent '" + oracle.descriptor().name + "' is not a parent of model '" + model.id() +
                        "'");
  }
  const Observation x_star = apply_partial(model, x, pa, k, pa_k_star, function_seed);
  return parent_distance(oracle, x_star, j == k ? pa_k_star : pa[j]);
}

double commutativity_deviation(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                               std::size_t i, double value_i, std::size_t j, double value_j, const DistanceFn& d,
                               std::uint64_t function_seed) {
  if (i == j) throw ContractError("commutativity needs two distinct parents");
  const auto pa_i = pa.with(i, value_i);
  const auto pa_j = pa.with(j, value_j);
  // i then j
  const Observation xi = apply_partial(model, x, pa, i, value_i, function_seed);
  const Observation xij = apply_partial(model, xi, pa_i, j, value_j, function_seed);
  // j then i
  const Observation xj = apply_partial(model, x, pa, j, value_j, function_seed);
  const Observation xji = apply_partial(model, xj, pa_j, i, value_i, function_seed);
  return d(xij, xji);
}

}  // namespace axbench
