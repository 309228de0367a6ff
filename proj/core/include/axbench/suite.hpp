#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axbench/dataset.hpp"
#include "axbench/model.hpp"
#include "axbench/oracle.hpp"
#include "axbench/soundness.hpp"

namespace axbench {

enum class MetricFamily { composition, reversibility, effectiveness, commutativity };

std::string family_name(MetricFamily family);

/// One per-sample quantity tracked by the suite.
struct MetricColumn {
  std::string name;  // e.g. "composition/m1", "effectiveness/digit/hue"
  MetricFamily family = MetricFamily::composition;
  std::string target;   // intervened parent (reversibility, effectiveness) or "a|b" (commutativity)
  std::string readout;  // parent read by the oracle (effectiveness)
  std::size_t power = 0;  // functional power (composition, reversibility)
  bool discrete = false;  // effectiveness of a discrete parent: per-sample 0/1, aggregated as percent
  double scale = 1.0;     // aggregate = scale * mean of per-sample values
};

struct MetricSummary {
  double mean = 0.0;  // across seeds
  double std = 0.0;   // across seeds (sample standard deviation)
  std::size_t count = 0;          // successful samples over all seeds
  std::vector<double> per_seed;   // seed-level means (already scaled)
};

struct SampleRecord {
  std::uint64_t seed = 0;
  std::size_t index = 0;  // index into the test dataset
  bool failed = false;
  std::string error;
  std::vector<double> values;  // one per column; empty when failed
};

struct OracleQualityEntry {
  std::string parent;
  bool discrete = true;
  double value = 0.0;
  std::size_t samples = 0;
};

struct SoundnessReport {
  std::string model;
  std::string dataset;
  std::string distance;
  std::vector<std::uint64_t> seeds;
  std::size_t max_power = 0;
  std::size_t samples_per_seed = 0;
  std::vector<MetricColumn> columns;
  std::vector<MetricSummary> summaries;  // parallel to columns
  std::vector<SampleRecord> samples;
  std::vector<OracleQualityEntry> oracle_quality;
  std::size_t failed = 0;

  /// Throws ContractError for an unknown column name.
  const MetricSummary& summary(std::string_view column) const;
  std::optional<std::size_t> column_index(std::string_view column) const;
};

struct SuiteConfig {
  std::size_t max_power = 10;
  std::vector<std::size_t> targets;  // intervention targets; empty = every parent
  std::size_t n_samples = 0;         // per seed; 0 = the whole test set
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  DistanceFn distance = l1_distance();
  bool composition = true;
  bool reversibility = true;
  bool effectiveness = true;
  bool commutativity = true;
  unsigned threads = 1;
};

/// Runs every enabled metric on `n_samples` test observations per seed.
/// For each observation one function seed is drawn and reused for all of
/// its powers and cycles; counterfactual values pa_k* are drawn from the
/// test set's empirical marginal. Samples whose model call fails are
/// recorded and excluded from the aggregates.
SoundnessReport evaluate_suite(const CounterfactualModel& model, const LabeledDataset& test,
                               std::span<const Oracle* const> oracles, const SuiteConfig& config);

/// Column name helpers.
std::string composition_column(std::size_t m);
std::string reversibility_column(std::string_view target, std::size_t m);
std::string effectiveness_column(std::string_view target, std::string_view readout);
std::string commutativity_column(std::string_view a, std::string_view b);

}  // namespace axbench
