#include "axbench/intervene.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "axbench/errors.hpp"
#include "axbench/rng.hpp"

namespace axbench {
namespace {

using BinVector = std::vector<std::size_t>;

void check_binnings(const LabeledDataset& dataset, std::span<const Binning> binnings) {
  if (binnings.size() != dataset.space().size()) {
    throw ContractError("need one binning per parent: got " + std::to_string(binnings.size()) + " for " +
                        std::to_string(dataset.space().size()) + " parents");
  }
  for (std::size_t k = 0; k < binnings.size(); ++k) {
    if (binnings[k].parent != k) throw ContractError("binnings must be ordered by parent index");
  }
}

std::vector<BinVector> bin_rows(const LabeledDataset& dataset, std::span<const Binning> binnings) {
  std::vector<BinVector> rows(dataset.size(), BinVector(binnings.size()));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& pa = dataset.parents(i);
    for (std::size_t k = 0; k < binnings.size(); ++k) rows[i][k] = binnings[k].bin_of(pa[k]);
  }
  return rows;
}

// Cells spanned by the product of each target's observed bins and the
// observed joint bins of the remaining parents.
struct CellSpace {
  std::map<BinVector, std::vector<std::size_t>> members;
  std::vector<BinVector> cells;
};

CellSpace enumerate_cells(const std::vector<BinVector>& rows, std::size_t parents,
                          std::span<const std::size_t> targets) {
  std::vector<bool> is_target(parents, false);
  for (std::size_t t : targets) is_target.at(t) = true;

  CellSpace space;
  std::vector<std::set<std::size_t>> target_bins(parents);
  std::set<BinVector> rest_joint;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    space.members[rows[i]].push_back(i);
    BinVector rest = rows[i];
    for (std::size_t k = 0; k < parents; ++k) {
      if (is_target[k]) {
        target_bins[k].insert(rows[i][k]);
        rest[k] = 0;
      }
    }
    rest_joint.insert(std::move(rest));
  }

  std::vector<BinVector> partial(rest_joint.begin(), rest_joint.end());
  for (std::size_t t : targets) {
    std::vector<BinVector> next;
    for (const auto& cell : partial) {
      for (std::size_t b : target_bins[t]) {
        BinVector c = cell;
        c[t] = b;
        next.push_back(std::move(c));
      }
    }
    partial = std::move(next);
  }
  std::sort(partial.begin(), partial.end());
  space.cells = std::move(partial);
  return space;
}

std::string describe_cell(const ParentSpace& space, const BinVector& cell) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < cell.size(); ++k) os << (k ? ", " : "") << space[k].name << " bin " << cell[k];
  os << ')';
  return os.str();
}

}  // namespace

std::size_t Binning::bin_of(double value) const {
  if (discrete) {
    const auto b = static_cast<std::size_t>(value);
    if (value < 0.0 || b >= counts.size()) throw ContractError("discrete value outside binning");
    return b;
  }
  if (value < edges.front() || value > edges.back()) throw ContractError("value outside binning range");
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  const auto idx = static_cast<std::size_t>(it - edges.begin());
  return std::min(idx == 0 ? 0 : idx - 1, counts.size() - 1);
}

Binning bin_parent(const LabeledDataset& dataset, std::size_t k, std::size_t n_bins) {
  const auto& desc = dataset.space()[k];
  Binning b;
  b.parent = k;
  if (desc.is_discrete()) {
    b.discrete = true;
    b.counts.assign(desc.cardinality, 0);
  } else {
    if (n_bins < 2) throw ContractError("need at least 2 bins");
    b.edges.resize(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i) {
      b.edges[i] = desc.lower + (desc.upper - desc.lower) * static_cast<double>(i) / static_cast<double>(n_bins);
    }
    b.edges.back() = desc.upper;
    b.counts.assign(n_bins, 0);
  }
  for (const auto& pa : dataset.all_parents()) ++b.counts[b.bin_of(pa[k])];
  return b;
}

std::vector<Binning> bin_all(const LabeledDataset& dataset, std::size_t n_bins) {
  std::vector<Binning> out;
  for (std::size_t k = 0; k < dataset.space().size(); ++k) out.push_back(bin_parent(dataset, k, n_bins));
  return out;
}

SupportReport support_report(const LabeledDataset& dataset, std::size_t target, std::span<const Binning> binnings) {
  check_binnings(dataset, binnings);
  if (target >= dataset.space().size()) throw ContractError("target parent index out of range");
  const auto rows = bin_rows(dataset, binnings);
  const std::size_t targets[] = {target};
  const auto cells = enumerate_cells(rows, binnings.size(), targets);

  SupportReport report;
  report.target = target;
  for (const auto& cell : cells.cells) {
    const auto it = cells.members.find(cell);
    const std::size_t count = it == cells.members.end() ? 0 : it->second.size();
    report.cells.push_back({cell, count});
    if (count == 0) report.empty.push_back(cell);
  }
  report.full_support = report.empty.empty();
  return report;
}

std::string support_report_json(const SupportReport& report) {
  nlohmann::json j;
  j["target"] = report.target;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : report.cells) j["cells"].push_back({c.bins, c.count});
  j["empty"] = report.empty;
  j["full_support"] = report.full_support;
  return j.dump();
}

LabeledDataset resample_intervention(const LabeledDataset& dataset, std::span<const std::size_t> targets,
                                     std::span<const Binning> binnings, std::size_t n_out, std::uint64_t seed) {
  check_binnings(dataset, binnings);
  if (targets.empty()) throw ContractError("no intervention targets given");
  if (dataset.size() == 0) throw ContractError("cannot resample an empty dataset");
  const std::size_t parents = binnings.size();
  std::vector<bool> is_target(parents, false);
  for (std::size_t t : targets) {
    if (t >= parents) throw ContractError("target parent index out of range");
    if (is_target[t]) throw ContractError("target listed twice");
    is_target[t] = true;
  }

  const auto rows = bin_rows(dataset, binnings);
  const auto cells = enumerate_cells(rows, parents, targets);
  std::vector<BinVector> empty;
  for (const auto& cell : cells.cells) {
    if (!cells.members.contains(cell)) empty.push_back(cell);
  }
  if (!empty.empty()) {
    std::ostringstream os;
    os << "simulated intervention impossible: " << empty.size() << " empty joint cell(s), e.g.";
    for (std::size_t i = 0; i < std::min<std::size_t>(empty.size(), 5); ++i) {
      os << ' ' << describe_cell(dataset.space(), empty[i]);
    }
    throw SupportError(os.str());
  }

  if (n_out == 0) n_out = dataset.size();
  const std::uint64_t stream_seed = derive_seed(seed, "resample");
  std::vector<std::size_t> picks(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    CounterRng rng(stream_seed, j);
    BinVector cell = rows[rng.below(rows.size())];  // joint bin of the non-targets
    for (std::size_t t : targets) cell[t] = rows[rng.below(rows.size())][t];
    const auto& members = cells.members.at(cell);
    picks[j] = members[rng.below(members.size())];
  }
  return dataset.subset(picks, Provenance{"intervened", seed});
}

}  // namespace axbench
