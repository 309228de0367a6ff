#include "axbench/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "axbench/errors.hpp"
#include "axbench/rng.hpp"
#include "axbench/stats.hpp"

namespace axbench {
namespace {

struct Plan {
  std::vector<std::size_t> targets;
  std::vector<const Oracle*> readouts;  // oracles in parent order
  std::vector<MetricColumn> columns;
};

Plan make_plan(const CounterfactualModel& model, std::span<const Oracle* const> oracles, const SuiteConfig& config) {
  const auto& space = model.space();
  Plan plan;
  plan.targets = config.targets;
  if (plan.targets.empty()) {
    plan.targets.resize(space.size());
    std::iota(plan.targets.begin(), plan.targets.end(), 0);
  }
  for (std::size_t t : plan.targets) {
    if (t >= space.size()) throw ContractError("intervention target index out of range");
  }
  for (const Oracle* o : oracles) {
    if (!o) throw ContractError("null oracle");
    if (o->parent() >= space.size() || space[o->parent()].name != o->descriptor().name) {
      throw ContractError("oracle for '" + o->descriptor().name + "' does not match the model's parent space");
    }
    plan.readouts.push_back(o);
  }
  std::sort(plan.readouts.begin(), plan.readouts.end(),
            [](const Oracle* a, const Oracle* b) { return a->parent() < b->parent(); });
  if (config.effectiveness) {
    for (std::size_t t : plan.targets) {
      const bool covered = std::any_of(plan.readouts.begin(), plan.readouts.end(),
                                       [t](const Oracle* o) { return o->parent() == t; });
      if (!covered) throw ContractError("no oracle covers intervention target '" + space[t].name + "'");
    }
  }

  if (config.composition) {
    for (std::size_t m = 1; m <= config.max_power; ++m) {
      plan.columns.push_back({composition_column(m), MetricFamily::composition, "", "", m, false, 1.0});
    }
  }
  for (std::size_t t : plan.targets) {
    const auto& tn = space[t].name;
    if (config.effectiveness) {
      for (const Oracle* o : plan.readouts) {
        const bool discrete = o->descriptor().is_discrete();
        plan.columns.push_back({effectiveness_column(tn, o->descriptor().name), MetricFamily::effectiveness, tn,
                                o->descriptor().name, 0, discrete, discrete ? 100.0 : 1.0});
      }
    }
    if (config.reversibility) {
      for (std::size_t m = 1; m <= config.max_power; ++m) {
        plan.columns.push_back({reversibility_column(tn, m), MetricFamily::reversibility, tn, "", m, false, 1.0});
      }
    }
  }
  if (config.commutativity) {
    for (std::size_t a = 0; a < plan.targets.size(); ++a) {
      for (std::size_t b = a + 1; b < plan.targets.size(); ++b) {
        const auto& an = space[plan.targets[a]].name;
        const auto& bn = space[plan.targets[b]].name;
        plan.columns.push_back({commutativity_column(an, bn), MetricFamily::commutativity, an + "|" + bn, "", 0,
                                false, 1.0});
      }
    }
  }
  return plan;
}

std::vector<double> evaluate_sample(const CounterfactualModel& model, const LabeledDataset& test, const Plan& plan,
                                    const SuiteConfig& config, std::uint64_t seed, std::size_t index) {
  CounterRng rng(derive_seed(seed, "suite-sample"), index);
  const std::uint64_t function_seed = rng.next_u64();
  std::vector<double> target_values(plan.targets.size());
  for (std::size_t t = 0; t < plan.targets.size(); ++t) {
    target_values[t] = test.parents(rng.below(test.size()))[plan.targets[t]];
  }

  const Observation& x = test.observation(index);
  const ParentAssignment& pa = test.parents(index);
  std::vector<double> values;
  values.reserve(plan.columns.size());

  if (config.composition) {
    const auto c = composition(model, x, pa, config.max_power, config.distance, function_seed);
    values.insert(values.end(), c.begin(), c.end());
  }
  for (std::size_t t = 0; t < plan.targets.size(); ++t) {
    const std::size_t k = plan.targets[t];
    const double v = target_values[t];
    if (config.effectiveness) {
      const Observation x_star = apply_partial(model, x, pa, k, v, function_seed);
      for (const Oracle* o : plan.readouts) {
        const std::size_t j = o->parent();
        values.push_back(parent_distance(*o, x_star, j == k ? v : pa[j]));
      }
    }
    if (config.reversibility) {
      const auto r = reversibility(model, x, pa, pa.with(k, v), config.max_power, config.distance, function_seed);
      values.insert(values.end(), r.begin(), r.end());
    }
  }
  if (config.commutativity) {
    for (std::size_t a = 0; a < plan.targets.size(); ++a) {
      for (std::size_t b = a + 1; b < plan.targets.size(); ++b) {
        values.push_back(commutativity_deviation(model, x, pa, plan.targets[a], target_values[a], plan.targets[b],
                                                 target_values[b], config.distance, function_seed));
      }
    }
  }
  return values;
}

std::vector<std::size_t> choose_samples(std::size_t n_total, std::size_t n_samples, std::uint64_t seed) {
  std::vector<std::size_t> idx(n_total);
  std::iota(idx.begin(), idx.end(), 0);
  if (n_samples == 0 || n_samples >= n_total) return idx;
  CounterRng rng(derive_seed(seed, "suite-subset"), 0);
  for (std::size_t i = 0; i < n_samples; ++i) std::swap(idx[i], idx[i + rng.below(n_total - i)]);
  idx.resize(n_samples);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::string family_name(MetricFamily family) {
  switch (family) {
    case MetricFamily::composition: return "composition";
    case MetricFamily::reversibility: return "reversibility";
    case MetricFamily::effectiveness: return "effectiveness";
    case MetricFamily::commutativity: return "commutativity";
  }
  return "unknown";
}

std::string composition_column(std::size_t m) { return "composition/m" + std::to_string(m); }
std::string reversibility_column(std::string_view target, std::size_t m) {
  return "reversibility/" + std::string(target) + "/m" + std::to_string(m);
}
std::string effectiveness_column(std::string_view target, std::string_view readout) {
  return "effectiveness/" + std::string(target) + "/" + std::string(readout);
}
std::string commutativity_column(std::string_view a, std::string_view b) {
  return "commutativity/" + std::string(a) + "|" + std::string(b);
}

std::optional<std::size_t> SoundnessReport::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return i;
  }
  return std::nullopt;
}

const MetricSummary& SoundnessReport::summary(std::string_view column) const {
  if (auto i = column_index(column)) return summaries.at(*i);
  throw ContractError("report has no column '" + std::string(column) + "'");
}

SoundnessReport evaluate_suite(const CounterfactualModel& model, const LabeledDataset& test,
                               std::span<const Oracle* const> oracles, const SuiteConfig& config) {
  if (config.max_power < 1) throw ContractError("functional power m must be at least 1");
  if (config.seeds.empty()) throw ContractError("at least one seed is required");
  if (test.size() == 0) throw ContractError("empty test dataset");
  if (config.n_samples > test.size()) throw ContractError("n_samples exceeds the test set size");
  if (test.shape() != model.shape() || test.space() != model.space()) {
    throw ContractError("test dataset (" + test.shape().to_string() + ", " + test.space().to_string() +
                        ") does not match model '" + model.id() + "'");
  }
  const Plan plan = make_plan(model, oracles, config);

  SoundnessReport report;
  report.model = model.id();
  report.dataset = test.provenance().source + ":" + std::to_string(test.provenance().seed) + ":n" +
                   std::to_string(test.size());
  report.distance = config.distance.id;
  report.seeds = config.seeds;
  report.max_power = config.max_power;
  report.columns = plan.columns;

  for (const Oracle* o : plan.readouts) {
    const auto q = oracle_quality(*o, test);
    report.oracle_quality.push_back({o->descriptor().name, q.discrete, q.value, q.samples});
  }

  // Jobs in (seed, sample) order; workers fill slots so the result does not
  // depend on scheduling.
  struct Job {
    std::uint64_t seed;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (std::uint64_t seed : config.seeds) {
    const auto chosen = choose_samples(test.size(), config.n_samples, seed);
    report.samples_per_seed = chosen.size();
    for (std::size_t i : chosen) jobs.push_back({seed, i});
  }
  report.samples.resize(jobs.size());

  auto run = [&](std::size_t j) {
    SampleRecord& rec = report.samples[j];
    rec.seed = jobs[j].seed;
    rec.index = jobs[j].index;
    try {
      rec.values = evaluate_sample(model, test, plan, config, jobs[j].seed, jobs[j].index);
    } catch (const Error& e) {
      rec.failed = true;
      rec.error = e.what();
      rec.values.clear();
    }
  };

  const unsigned workers = model.capabilities().thread_safe ? std::max(1u, config.threads) : 1u;
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) run(j);
      });
    }
  }

  report.failed = static_cast<std::size_t>(
      std::count_if(report.samples.begin(), report.samples.end(), [](const SampleRecord& r) { return r.failed; }));

  report.summaries.resize(plan.columns.size());
  for (std::size_t c = 0; c < plan.columns.size(); ++c) {
    MetricSummary& s = report.summaries[c];
    for (std::uint64_t seed : config.seeds) {
      std::vector<double> vals;
      for (const auto& rec : report.samples) {
        if (rec.seed == seed && !rec.failed) vals.push_back(rec.values[c]);
      }
      s.count += vals.size();
      s.per_seed.push_back(vals.empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : plan.columns[c].scale * mean(vals));
    }
    std::vector<double> finite;
    std::copy_if(s.per_seed.begin(), s.per_seed.end(), std::back_inserter(finite),
                 [](double v) { return std::isfinite(v); });
    s.mean = finite.empty() ? std::numeric_limits<double>::quiet_NaN() : mean(finite);
    s.std = sample_std(finite);
  }
  return report;
}

}  // namespace axbench
