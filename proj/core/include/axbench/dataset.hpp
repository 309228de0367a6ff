#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axbench/mechanism.hpp"
#include "axbench/observation.hpp"
#include "axbench/parents.hpp"

namespace axbench {

/// Which of the colour-digit SCMs generated the hue.
struct ScmKind {
  enum class Type { unconfounded, confounded_no_support, confounded_full_support };

  Type type = Type::unconfounded;
  double sigma = 0.05;  // confounded kinds
  double p = 0.01;      // outlier probability, full-support kind only

  static ScmKind unconfounded() { return {Type::unconfounded}; }
  static ScmKind confounded_no_support(double sigma = 0.05) { return {Type::confounded_no_support, sigma}; }
  static ScmKind confounded_full_support(double sigma = 0.05, double p = 0.01) {
    return {Type::confounded_full_support, sigma, p};
  }

  /// Throws ContractError unless sigma > 0 and p in (0, 1) where they apply.
  void validate() const;
  /// "unconfounded", "confounded", "confounded-full".
  std::string name() const;
  static ScmKind parse(std::string_view name);
};

struct Provenance {
  std::string source;  // SCM name, "shapes", "intervened", "idx", "external"
  std::uint64_t seed = 0;
};

/// Observations with their parent assignments and, for synthetic data, the
/// exogenous records that generated them. Observations are shared between
/// datasets derived by subsetting or resampling.
class LabeledDataset {
 public:
  using ObservationPtr = std::shared_ptr<const Observation>;

  LabeledDataset(Shape shape, ParentSpace space, std::vector<ObservationPtr> observations,
                 std::vector<ParentAssignment> parents, std::optional<std::vector<ExogenousRecord>> exogenous,
                 Provenance provenance);

  std::size_t size() const noexcept { return parents_.size(); }
  const Shape& shape() const noexcept { return shape_; }
  const ParentSpace& space() const noexcept { return space_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  const Observation& observation(std::size_t i) const { return *observations_.at(i); }
  const ObservationPtr& observation_ptr(std::size_t i) const { return observations_.at(i); }
  const ParentAssignment& parents(std::size_t i) const { return parents_.at(i); }
  std::span<const ParentAssignment> all_parents() const noexcept { return parents_; }

  bool has_exogenous() const noexcept { return exogenous_.has_value(); }
  const ExogenousRecord& exogenous(std::size_t i) const;

  /// Values of parent k across the dataset.
  std::vector<double> column(std::size_t k) const;

  LabeledDataset subset(std::span<const std::size_t> indices, std::optional<Provenance> provenance = {}) const;

  /// Checks that re-rendering every exogenous record reproduces its
  /// observation bit-exactly. Returns the first mismatching index.
  std::optional<std::size_t> first_unreproducible(const Mechanism& mechanism) const;

 private:
  Shape shape_;
  ParentSpace space_;
  std::vector<ObservationPtr> observations_;
  std::vector<ParentAssignment> parents_;
  std::optional<std::vector<ExogenousRecord>> exogenous_;
  Provenance provenance_;
};

/// Parents and noise drawn by the colour-digit SCM, without rendering.
struct ParentDraws {
  std::vector<ParentAssignment> parents;
  std::vector<ExogenousRecord> exogenous;
};

/// Draws sample i from its own counter-based stream, so any prefix or
/// subset of indices gives the same draws.
ParentDraws sample_parents(const ScmKind& kind, std::size_t n, std::uint64_t seed);

/// Renders the draws of sample_parents into a colour-digit dataset.
LabeledDataset sample_dataset(const ScmKind& kind, std::size_t n, std::uint64_t seed);

std::vector<ParentAssignment> sample_shapes_parents(std::size_t n, std::uint64_t seed);
LabeledDataset sample_shapes_dataset(std::size_t n, std::uint64_t seed);

/// Folds x into [0, 1] by reflection at both boundaries.
double reflect_unit(double x) noexcept;

/// Header of parent names, one row per sample; discrete values as integers,
/// continuous values with 9 significant digits.
void write_parents_csv(const LabeledDataset& dataset, std::ostream& out);

/// Deterministic 90/10 split by hashing the sample index with `seed`.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
Split train_test_split(std::size_t n, std::uint64_t seed = 0);

}  // namespace axbench
