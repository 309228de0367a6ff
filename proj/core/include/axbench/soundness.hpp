#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "axbench/model.hpp"
#include "axbench/oracle.hpp"

namespace axbench {

/// Distance between two same-shape observations, in percentage points of
/// the unit intensity range.
struct DistanceFn {
  std::string id;
  std::function<double(const Observation&, const Observation&)> fn;

  double operator()(const Observation& a, const Observation& b) const { return fn(a, b); }
};

/// 100 * mean |a - b| over all H * W * C entries. Throws ContractError on shape mismatch.
double l1(const Observation& a, const Observation& b);
DistanceFn l1_distance();
/// Looks a distance up by identifier ("l1").
DistanceFn distance_by_id(std::string_view id);

/// Entry i (0-based) is d(x, f^(i+1)(x, pa, pa)): the distance after i + 1
/// null interventions with the same function seed.
std::vector<double> composition(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                                std::size_t m, const DistanceFn& d, std::uint64_t function_seed);

/// Entry i is d(x, p^(i+1)(x)) with p(x) = f(f(x, pa, pa*), pa*, pa), one
/// function seed for every forward and backward call.
std::vector<double> reversibility(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                                  const ParentAssignment& pa_star, std::size_t m, const DistanceFn& d,
                                  std::uint64_t function_seed);

/// d_k between an oracle's readout and the requested value: 1/0 correctness
/// for discrete parents, 100 * |error| for continuous ones.
double parent_distance(const Oracle& oracle, const Observation& x, double target);

/// Intervenes on parent k via the partial function and scores the oracle's
/// readout of its own parent against the post-intervention value: pa_k_star
/// when the oracle reads parent k, pa_j otherwise.
double effectiveness(const CounterfactualModel& model, const Oracle& oracle, const Observation& x,
                     const ParentAssignment& pa, std::size_t k, double pa_k_star, std::uint64_t function_seed);

/// d(f_i(f_j(x)), f_j(f_i(x))) for partial interventions setting parent i to
/// value_i and parent j to value_j.
double commutativity_deviation(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                               std::size_t i, double value_i, std::size_t j, double value_j, const DistanceFn& d,
                               std::uint64_t function_seed);

}  // namespace axbench
