#include "axbench/model.hpp"

#include <vector>

#include "axbench/errors.hpp"

namespace axbench {
namespace {

void check_input(const CounterfactualModel& model, const Observation& x) {
  if (x.shape() != model.shape()) {
    throw ContractError("model '" + model.id() + "' expects shape " + model.shape().to_string() + ", got " +
                        x.shape().to_string());
  }
}

void check_output(const CounterfactualModel& model, const Observation& x, const Observation& out) {
  if (out.shape() != x.shape()) {
    throw ModelError("model '" + model.id() + "' returned shape " + out.shape().to_string() +
                     " for input of shape " + x.shape().to_string());
  }
}

void check_index(const CounterfactualModel& model, std::size_t k) {
  if (k >= model.space().size()) {
    throw ContractError("parent index " + std::to_string(k) + " out of range for model '" + model.id() +
                        "' with " + std::to_string(model.space().size()) + " parents");
  }
}

}  // namespace

Observation CounterfactualModel::partial_counterfactual(const Observation&, std::size_t, double, double,
                                                        std::uint64_t) const {
  throw ContractError("model '" + id() + "' has no native partial counterfactual function");
}

Observation apply(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                  const ParentAssignment& pa_star, std::uint64_t function_seed) {
  check_input(model, x);
  pa.validate(model.space());
  pa_star.validate(model.space());
  Observation out = model.counterfactual(x, pa, pa_star, function_seed);
  check_output(model, x, out);
  return out;
}

Observation apply_partial(const CounterfactualModel& model, const Observation& x, std::size_t k, double pa_k,
                          double pa_k_star, std::uint64_t function_seed) {
  check_input(model, x);
  check_index(model, k);
  if (!model.capabilities().supports_partial) {
    throw ContractError("model '" + model.id() +
                        "' lacks native partial support and no full parent assignment was supplied");
  }
  const auto& desc = model.space()[k];
  if (!desc.contains(pa_k) || !desc.contains(pa_k_star)) {
    throw ContractError("partial values outside the domain of parent '" + desc.name + "'");
  }
  Observation out = model.partial_counterfactual(x, k, pa_k, pa_k_star, function_seed);
  check_output(model, x, out);
  return out;
}

Observation apply_partial(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                          std::size_t k, double pa_k_star, std::uint64_t function_seed) {
  check_index(model, k);
  if (model.capabilities().supports_partial) {
    pa.validate(model.space());
    return apply_partial(model, x, k, pa[k], pa_k_star, function_seed);
  }
  return apply(model, x, pa, pa.with(k, pa_k_star), function_seed);
}

Observation decompose_full(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                           const ParentAssignment& pa_star, std::span<const std::size_t> order,
                           std::uint64_t function_seed) {
  pa.validate(model.space());
  pa_star.validate(model.space());
  std::vector<int> seen(pa.size(), 0);
  for (std::size_t k : order) {
    check_index(model, k);
    if (seen[k]++) throw ContractError("parent index " + std::to_string(k) + " repeated in order");
    if (pa[k] == pa_star[k]) {
      throw ContractError("parent '" + model.space()[k].name + "' is unchanged but listed in order");
    }
  }
  for (std::size_t k = 0; k < pa.size(); ++k) {
    if (pa[k] != pa_star[k] && !seen[k]) {
      throw ContractError("changed parent '" + model.space()[k].name + "' missing from order");
    }
  }
  Observation current = x;
  ParentAssignment current_pa = pa;
  for (std::size_t k : order) {
    current = apply_partial(model, current, current_pa, k, pa_star[k], function_seed);
    current_pa = current_pa.with(k, pa_star[k]);
  }
  return current;
}

}  // namespace axbench
