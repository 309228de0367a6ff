#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "axbench/observation.hpp"
#include "axbench/parents.hpp"

namespace axbench {

struct ModelCapabilities {
  /// Implements partial_counterfactual natively (infers the fixed parents itself).
  bool supports_partial = false;
  /// Output does not depend on the function seed.
  bool deterministic = true;
  /// May be called from several workers at once; otherwise calls are serialized.
  bool thread_safe = true;
};

/// Black-box counterfactual function x* = f(x, pa, pa*). The function seed
/// selects one f from the model's distribution over functions; identical
/// arguments must produce bit-identical outputs.
///
/// Implementations are called through apply()/apply_partial(), which check
/// the contract before dispatch.
class CounterfactualModel {
 public:
  virtual ~CounterfactualModel() = default;

  virtual std::string id() const = 0;
  virtual Shape shape() const = 0;
  virtual const ParentSpace& space() const = 0;
  virtual ModelCapabilities capabilities() const = 0;

  virtual Observation counterfactual(const Observation& x, const ParentAssignment& pa,
                                     const ParentAssignment& pa_star, std::uint64_t function_seed) const = 0;

  /// Changes parent k from pa_k to pa_k_star, holding the others at the
  /// values the model infers from x. Only called when supports_partial.
  virtual Observation partial_counterfactual(const Observation& x, std::size_t k, double pa_k,
                                             double pa_k_star, std::uint64_t function_seed) const;
};

Observation apply(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                  const ParentAssignment& pa_star, std::uint64_t function_seed);

/// Native partial call. Throws ContractError if k is out of range or the
/// model has no native partial support (use the overload taking the full
/// assignment in that case).
Observation apply_partial(const CounterfactualModel& model, const Observation& x, std::size_t k, double pa_k,
                          double pa_k_star, std::uint64_t function_seed);

/// Partial call with the full assignment known. Uses the native partial
/// function when available, otherwise lowers to
/// apply(x, pa, pa with coordinate k replaced).
Observation apply_partial(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                          std::size_t k, double pa_k_star, std::uint64_t function_seed);

/// Full intervention as a sequence of partial calls, one per changed parent,
/// in `order`. `order` must list every coordinate where pa and pa_star
/// differ, each exactly once.
Observation decompose_full(const CounterfactualModel& model, const Observation& x, const ParentAssignment& pa,
                           const ParentAssignment& pa_star, std::span<const std::size_t> order,
                           std::uint64_t function_seed);

}  // namespace axbench
