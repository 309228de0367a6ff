#include "axbench/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "axbench/errors.hpp"
#include "axbench/rng.hpp"

namespace axbench {

void ScmKind::validate() const {
  if (type != Type::unconfounded && !(sigma > 0.0)) throw ContractError("sigma must be positive");
  if (type == Type::confounded_full_support && !(p > 0.0 && p < 1.0)) {
    throw ContractError("outlier probability p must lie in (0, 1)");
  }
}

std::string ScmKind::name() const {
  switch (type) {
    case Type::unconfounded: return "unconfounded";
    case Type::confounded_no_support: return "confounded";
    case Type::confounded_full_support: return "confounded-full";
  }
  return "unknown";
}

ScmKind ScmKind::parse(std::string_view name) {
  if (name == "unconfounded") return unconfounded();
  if (name == "confounded") return confounded_no_support();
  if (name == "confounded-full") return confounded_full_support();
  throw ContractError("unknown SCM '" + std::string(name) + "' (expected unconfounded, confounded, confounded-full)");
}

LabeledDataset::LabeledDataset(Shape shape, ParentSpace space, std::vector<ObservationPtr> observations,
                               std::vector<ParentAssignment> parents,
                               std::optional<std::vector<ExogenousRecord>> exogenous, Provenance provenance)
    : shape_(shape),
      space_(std::move(space)),
      observations_(std::move(observations)),
      parents_(std::move(parents)),
      exogenous_(std::move(exogenous)),
      provenance_(std::move(provenance)) {
  validate_shape(shape_);
  if (observations_.size() != parents_.size()) {
    throw ContractError("dataset has " + std::to_string(observations_.size()) + " observations but " +
                        std::to_string(parents_.size()) + " parent assignments");
  }
  if (exogenous_ && exogenous_->size() != parents_.size()) {
    throw ContractError("dataset exogenous record count differs from sample count");
  }
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    if (!observations_[i]) throw ContractError("null observation at index " + std::to_string(i));
    if (observations_[i]->shape() != shape_) {
      throw ContractError("observation " + std::to_string(i) + " has shape " +
                          observations_[i]->shape().to_string() + ", dataset shape is " + shape_.to_string());
    }
    parents_[i].validate(space_);
  }
}

const ExogenousRecord& LabeledDataset::exogenous(std::size_t i) const {
  if (!exogenous_) throw ContractError("dataset carries no exogenous records");
  return exogenous_->at(i);
}

std::vector<double> LabeledDataset::column(std::size_t k) const {
  if (k >= space_.size()) throw ContractError("parent index out of range");
  std::vector<double> out(parents_.size());
  for (std::size_t i = 0; i < parents_.size(); ++i) out[i] = parents_[i][k];
  return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices,
                                      std::optional<Provenance> provenance) const {
  std::vector<ObservationPtr> obs;
  std::vector<ParentAssignment> pa;
  std::optional<std::vector<ExogenousRecord>> ex;
  obs.reserve(indices.size());
  pa.reserve(indices.size());
  if (exogenous_) ex.emplace().reserve(indices.size());
  for (std::size_t i : indices) {
    obs.push_back(observations_.at(i));
    pa.push_back(parents_.at(i));
    if (ex) ex->push_back((*exogenous_)[i]);
  }
  return LabeledDataset(shape_, space_, std::move(obs), std::move(pa), std::move(ex),
                        provenance.value_or(provenance_));
}

std::optional<std::size_t> LabeledDataset::first_unreproducible(const Mechanism& mechanism) const {
  if (!exogenous_) return std::nullopt;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(mechanism.render((*exogenous_)[i], parents_[i]) == *observations_[i])) return i;
  }
  return std::nullopt;
}

double reflect_unit(double x) noexcept {
  if (!std::isfinite(x)) return 0.0;
  // Period-2 triangle wave: identity on [0, 1], mirrored on [1, 2].
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  return r <= 1.0 ? r : 2.0 - r;
}

ParentDraws sample_parents(const ScmKind& kind, std::size_t n, std::uint64_t seed) {
  kind.validate();
  if (n == 0) throw ContractError("sample count must be at least 1");
  const std::uint64_t stream_seed = derive_seed(seed, "colour-digit");
  ParentDraws draws;
  draws.parents.reserve(n);
  draws.exogenous.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(stream_seed, i);
    const auto digit = static_cast<double>(rng.below(10));
    ColourDigitNoise noise;
    noise.style = GlyphStyle::sample(rng);
    double hue = 0.0;
    switch (kind.type) {
      case ScmKind::Type::unconfounded:
        hue = rng.uniform();
        break;
      case ScmKind::Type::confounded_no_support:
        noise.hue_draw = rng.normal();
        hue = reflect_unit(digit / 10.0 + 0.05 + kind.sigma * noise.hue_draw);
        break;
      case ScmKind::Type::confounded_full_support:
        noise.hue_outlier = rng.bernoulli(kind.p);
        if (noise.hue_outlier) {
          hue = rng.uniform();
        } else {
          noise.hue_draw = rng.normal();
          hue = reflect_unit(digit / 10.0 + 0.05 + kind.sigma * noise.hue_draw);
        }
        break;
    }
    draws.parents.emplace_back(std::vector<double>{digit, hue});
    draws.exogenous.push_back(noise.encode());
  }
  return draws;
}

LabeledDataset sample_dataset(const ScmKind& kind, std::size_t n, std::uint64_t seed) {
  auto draws = sample_parents(kind, n, seed);
  const auto mech = colour_digit_mechanism();
  std::vector<LabeledDataset::ObservationPtr> obs;
  obs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    obs.push_back(std::make_shared<const Observation>(mech->render(draws.exogenous[i], draws.parents[i])));
  }
  return LabeledDataset(mech->shape(), mech->space(), std::move(obs), std::move(draws.parents),
                        std::move(draws.exogenous), Provenance{kind.name(), seed});
}

std::vector<ParentAssignment> sample_shapes_parents(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ContractError("sample count must be at least 1");
  const auto mech = shapes_mechanism();
  const std::uint64_t stream_seed = derive_seed(seed, "shapes");
  std::vector<ParentAssignment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(stream_seed, i);
    std::vector<double> v(mech->space().size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(rng.below(mech->space()[k].cardinality));
    out.emplace_back(std::move(v));
  }
  return out;
}

LabeledDataset sample_shapes_dataset(std::size_t n, std::uint64_t seed) {
  auto parents = sample_shapes_parents(n, seed);
  const auto mech = shapes_mechanism();
  std::vector<LabeledDataset::ObservationPtr> obs;
  obs.reserve(n);
  for (const auto& pa : parents) obs.push_back(std::make_shared<const Observation>(mech->render({}, pa)));
  std::vector<ExogenousRecord> exog(n);
  return LabeledDataset(mech->shape(), mech->space(), std::move(obs), std::move(parents), std::move(exog),
                        Provenance{"shapes", seed});
}

void write_parents_csv(const LabeledDataset& dataset, std::ostream& out) {
  const auto& space = dataset.space();
  for (std::size_t k = 0; k < space.size(); ++k) out << (k ? "," : "") << space[k].name;
  out << '\n';
  char buf[64];
  for (const auto& pa : dataset.all_parents()) {
    for (std::size_t k = 0; k < space.size(); ++k) {
      if (k) out << ',';
      if (space[k].is_discrete()) {
        out << static_cast<long long>(pa[k]);
      } else {
        std::snprintf(buf, sizeof buf, "%.9g", pa[k]);
        out << buf;
      }
    }
    out << '\n';
  }
}

Split train_test_split(std::size_t n, std::uint64_t seed) {
  Split s;
  const std::uint64_t key = derive_seed(seed, "split");
  for (std::size_t i = 0; i < n; ++i) {
    (splitmix64(key ^ i) % 10 == 0 ? s.test : s.train).push_back(i);
  }
  return s;
}

}  // namespace axbench
