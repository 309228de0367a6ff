#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "axbench/dataset.hpp"
#include "axbench/mechanism.hpp"
#include "axbench/model.hpp"

namespace axbench {

/// Returns x unchanged for every call.
std::shared_ptr<const CounterfactualModel> identity_model(Shape shape, ParentSpace space);

/// Reference models built on a synthetic dataset's exogenous records.
/// Inputs are recognised by content hash: dataset members, plus every output
/// the model has produced itself. Unknown inputs raise LookupError.
class AbductiveModel : public CounterfactualModel {
 public:
  Shape shape() const override { return mechanism_->shape(); }
  const ParentSpace& space() const override { return mechanism_->space(); }

  /// The parents the model would abduct from x, if it knows x.
  std::optional<ParentAssignment> known_parents(const Observation& x) const;

 protected:
  struct Entry {
    ExogenousRecord noise;
    ParentAssignment parents;  // parents actually rendered into the observation
  };

  explicit AbductiveModel(const LabeledDataset& dataset);

  const Mechanism& mechanism() const { return *mechanism_; }
  Entry lookup(const Observation& x) const;
  /// Renders and remembers the output so later calls can abduct it.
  Observation render_and_record(const ExogenousRecord& noise, const ParentAssignment& rendered) const;

 private:
  class Registry;
  std::shared_ptr<const Mechanism> mechanism_;
  std::shared_ptr<Registry> registry_;
};

/// Abducts the stored noise and re-renders it at pa*: the true mechanism.
std::shared_ptr<const AbductiveModel> ground_truth_model(const LabeledDataset& dataset);

/// Ignores x and renders fresh noise drawn from (seed, function_seed) at pa*.
std::shared_ptr<const CounterfactualModel> no_abduction_model(std::shared_ptr<const Mechanism> mechanism,
                                                              std::uint64_t seed = 0);

/// Ground truth on the colour-digit mechanism, except the rendered hue is
/// h* + lambda * (digit* / 10 + 0.05 - h*). Partial calls hold the other
/// parent at the value actually rendered into x.
std::shared_ptr<const AbductiveModel> entangled_model(const LabeledDataset& dataset, double lambda);

/// Renders pa* with noise alpha * abducted + (1 - alpha) * fresh, where the
/// fresh noise is drawn exactly as no_abduction_model(seed) draws it.
std::shared_ptr<const AbductiveModel> abduction_blend_model(const LabeledDataset& dataset, double alpha,
                                                            std::uint64_t seed = 0);

/// clamp(x + delta) with one offset delta ~ U(-max_offset, max_offset) per function seed.
std::shared_ptr<const CounterfactualModel> offset_model(Shape shape, ParentSpace space, double max_offset);

/// clamp(x + n) with per-pixel n ~ N(0, scale^2), drawn afresh for every
/// distinct (x, pa, pa*, function_seed).
std::shared_ptr<const CounterfactualModel> noise_model(Shape shape, ParentSpace space, double scale);

/// The additive noise used by noise_model for one call.
std::vector<float> noise_model_noise(const Observation& x, const ParentAssignment& pa,
                                     const ParentAssignment& pa_star, std::uint64_t function_seed, double scale);

/// "identity", "ground-truth", "no-abduction", "entangled:<lambda>",
/// "blend:<alpha>", "offset:<max>", "noise:<scale>".
std::shared_ptr<const CounterfactualModel> make_zoo_model(std::string_view id, const LabeledDataset& dataset,
                                                          std::uint64_t seed = 0);

}  // namespace axbench
