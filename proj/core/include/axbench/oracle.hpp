#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "axbench/dataset.hpp"
#include "axbench/observation.hpp"
#include "axbench/parents.hpp"

namespace axbench {

/// Reads the value of one parent off an observation.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::size_t parent() const = 0;
  virtual const ParentDescriptor& descriptor() const = 0;
  /// Class index (discrete) or a value inside the parent's domain (continuous).
  virtual double predict(const Observation& x) const = 0;
};

/// Oracle backed by an arbitrary program, e.g. a lookup table.
class FunctionOracle final : public Oracle {
 public:
  FunctionOracle(std::size_t parent, ParentDescriptor descriptor, std::function<double(const Observation&)> fn)
      : parent_(parent), descriptor_(std::move(descriptor)), fn_(std::move(fn)) {}

  std::size_t parent() const override { return parent_; }
  const ParentDescriptor& descriptor() const override { return descriptor_; }
  double predict(const Observation& x) const override { return fn_(x); }

 private:
  std::size_t parent_;
  ParentDescriptor descriptor_;
  std::function<double(const Observation&)> fn_;
};

/// Oracle that returns the recorded parent of observations in `dataset`
/// (matched by content hash) and throws LookupError otherwise.
FunctionOracle lookup_oracle(const LabeledDataset& dataset, std::size_t k);

struct TrainingProvenance {
  std::string dataset_source;
  std::uint64_t dataset_seed = 0;
  std::size_t samples = 0;
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  double l2 = 0.0;
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  std::vector<double> epoch_loss;  // mean training loss per epoch (classifier)
};

/// Linear pseudo-oracle over the fixed feature map: multinomial logistic
/// regression for discrete parents, ridge regression for continuous ones.
class PseudoOracle final : public Oracle {
 public:
  enum class Kind { classifier, regressor };

  /// weights: classes x features row-major (classifier) or features (regressor);
  /// biases: one per class (classifier) or a single bias (regressor).
  PseudoOracle(std::size_t parent, ParentDescriptor descriptor, Kind kind, Shape input_shape,
               std::vector<double> weights, std::vector<double> biases, TrainingProvenance provenance = {});

  std::size_t parent() const override { return parent_; }
  const ParentDescriptor& descriptor() const override { return descriptor_; }
  double predict(const Observation& x) const override;

  Kind kind() const noexcept { return kind_; }
  const Shape& input_shape() const noexcept { return shape_; }
  std::size_t features() const noexcept { return features_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> biases() const noexcept { return biases_; }
  const TrainingProvenance& provenance() const noexcept { return provenance_; }

  /// Raw scores: per-class logits, or the unclamped regression output.
  std::vector<double> scores(const Observation& x) const;

  /// JSON with base64 little-endian f64 payloads for weights and biases.
  std::string to_json() const;
  static PseudoOracle from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static PseudoOracle load(const std::filesystem::path& path);

 private:
  std::size_t parent_;
  ParentDescriptor descriptor_;
  Kind kind_;
  Shape shape_;
  std::size_t features_;
  std::vector<double> weights_;
  std::vector<double> biases_;
  TrainingProvenance provenance_;
};

struct ClassifierOptions {
  std::size_t epochs = 8;
  double learning_rate = 0.05;
  double l2 = 1e-4;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
};

/// Mean softmax cross-entropy over the rows of `features` (n x f, row-major)
/// plus 0.5 * l2 * ||W||^2. Gradients are written when the pointers are set.
double softmax_cross_entropy(std::span<const double> weights, std::span<const double> biases,
                             std::span<const double> features, std::span<const std::size_t> labels, double l2,
                             std::vector<double>* grad_weights = nullptr, std::vector<double>* grad_biases = nullptr);

/// Mini-batch gradient descent on softmax cross-entropy; batch order is a
/// seeded shuffle per epoch. Throws TrainingError on a single-class dataset
/// or a non-finite loss.
PseudoOracle train_classifier(const LabeledDataset& dataset, std::size_t k, const ClassifierOptions& options = {});

/// Ridge regression with an unpenalized intercept, solved from the centred
/// normal equations (X'X + l2 I) w = X'y. Throws TrainingError if the
/// regularized system is singular.
PseudoOracle train_regressor(const LabeledDataset& dataset, std::size_t k, double l2 = 1e-3);

/// Trains the default oracle for each parent (classifier or regressor).
std::vector<PseudoOracle> train_default_oracles(const LabeledDataset& dataset, std::uint64_t seed = 0);

struct OracleQuality {
  std::size_t parent = 0;
  bool discrete = true;
  double value = 0.0;  // accuracy in percent, or MAE in percentage points
  std::size_t samples = 0;
};

OracleQuality oracle_quality(const Oracle& oracle, const LabeledDataset& dataset);

}  // namespace axbench
