#include "axbench/zoo.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "axbench/errors.hpp"
#include "axbench/rng.hpp"

namespace axbench {
namespace {

std::uint64_t assignment_hash(const ParentAssignment& pa) {
  const auto v = pa.values();
  return tag_hash(std::string_view(reinterpret_cast<const char*>(v.data()), v.size_bytes()));
}

class IdentityModel final : public CounterfactualModel {
 public:
  IdentityModel(Shape shape, ParentSpace space) : shape_(shape), space_(std::move(space)) { validate_shape(shape_); }

  std::string id() const override { return "identity"; }
  Shape shape() const override { return shape_; }
  const ParentSpace& space() const override { return space_; }
  ModelCapabilities capabilities() const override { return {true, true, true}; }

  Observation counterfactual(const Observation& x, const ParentAssignment&, const ParentAssignment&,
                             std::uint64_t) const override {
    return x;
  }
  Observation partial_counterfactual(const Observation& x, std::size_t, double, double,
                                     std::uint64_t) const override {
    return x;
  }

 private:
  Shape shape_;
  ParentSpace space_;
};

ExogenousRecord fresh_noise(const Mechanism& mechanism, std::uint64_t seed, std::uint64_t function_seed) {
  CounterRng rng(derive_seed(seed, "no-abduction"), function_seed);
  return mechanism.sample_noise(rng);
}

class NoAbductionModel final : public CounterfactualModel {
 public:
  NoAbductionModel(std::shared_ptr<const Mechanism> mechanism, std::uint64_t seed)
      : mechanism_(std::move(mechanism)), seed_(seed) {
    if (!mechanism_) throw ContractError("no-abduction model needs a mechanism");
  }

  std::string id() const override { return "no-abduction"; }
  Shape shape() const override { return mechanism_->shape(); }
  const ParentSpace& space() const override { return mechanism_->space(); }
  ModelCapabilities capabilities() const override { return {false, false, true}; }

  Observation counterfactual(const Observation&, const ParentAssignment&, const ParentAssignment& pa_star,
                             std::uint64_t function_seed) const override {
    return mechanism_->render(fresh_noise(*mechanism_, seed_, function_seed), pa_star);
  }

 private:
  std::shared_ptr<const Mechanism> mechanism_;
  std::uint64_t seed_;
};

class GroundTruthModel final : public AbductiveModel {
 public:
  explicit GroundTruthModel(const LabeledDataset& dataset) : AbductiveModel(dataset) {}

  std::string id() const override { return "ground-truth"; }
  ModelCapabilities capabilities() const override { return {true, true, true}; }

  Observation counterfactual(const Observation& x, const ParentAssignment&, const ParentAssignment& pa_star,
                             std::uint64_t) const override {
    return render_and_record(lookup(x).noise, pa_star);
  }
  Observation partial_counterfactual(const Observation& x, std::size_t k, double, double pa_k_star,
                                     std::uint64_t) const override {
    const Entry e = lookup(x);
    return render_and_record(e.noise, e.parents.with(k, pa_k_star));
  }
};

class EntangledModel final : public AbductiveModel {
 public:
  EntangledModel(const LabeledDataset& dataset, double lambda) : AbductiveModel(dataset), lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ContractError("entanglement lambda must lie in [0, 1]");
    if (mechanism().name() != "colour-digit") {
      throw ContractError("entangled model needs a colour-digit dataset, got " + mechanism().name());
    }
  }

  std::string id() const override { return "entangled:" + format_param(lambda_); }
  ModelCapabilities capabilities() const override { return {true, true, true}; }

  Observation counterfactual(const Observation& x, const ParentAssignment&, const ParentAssignment& pa_star,
                             std::uint64_t) const override {
    return render_and_record(lookup(x).noise, entangle(pa_star));
  }
  Observation partial_counterfactual(const Observation& x, std::size_t k, double, double pa_k_star,
                                     std::uint64_t) const override {
    const Entry e = lookup(x);
    return render_and_record(e.noise, entangle(e.parents.with(k, pa_k_star)));
  }

  static std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

 private:
  ParentAssignment entangle(const ParentAssignment& pa) const {
    const double digit = pa[ColourDigitMechanism::kDigit];
    const double hue = pa[ColourDigitMechanism::kHue];
    const double shifted = hue + lambda_ * (digit / 10.0 + 0.05 - hue);
    return pa.with(ColourDigitMechanism::kHue, std::clamp(shifted, 0.0, 1.0));
  }

  double lambda_;
};

class BlendModel final : public AbductiveModel {
 public:
  BlendModel(const LabeledDataset& dataset, double alpha, std::uint64_t seed)
      : AbductiveModel(dataset), alpha_(alpha), seed_(seed) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractError("abduction blend alpha must lie in [0, 1]");
  }

  std::string id() const override { return "blend:" + EntangledModel::format_param(alpha_); }
  ModelCapabilities capabilities() const override { return {false, alpha_ == 1.0, true}; }

  Observation counterfactual(const Observation& x, const ParentAssignment&, const ParentAssignment& pa_star,
                             std::uint64_t function_seed) const override {
    const auto fresh = fresh_noise(mechanism(), seed_, function_seed);
    return render_and_record(mechanism().blend_noise(lookup(x).noise, fresh, alpha_), pa_star);
  }

 private:
  double alpha_;
  std::uint64_t seed_;
};

class OffsetModel final : public CounterfactualModel {
 public:
  OffsetModel(Shape shape, ParentSpace space, double max_offset)
      : shape_(shape), space_(std::move(space)), max_offset_(max_offset) {
    validate_shape(shape_);
    if (!(max_offset >= 0.0)) throw ContractError("offset model needs a non-negative maximum offset");
  }

  std::string id() const override { return "offset:" + EntangledModel::format_param(max_offset_); }
  Shape shape() const override { return shape_; }
  const ParentSpace& space() const override { return space_; }
  ModelCapabilities capabilities() const override { return {false, max_offset_ == 0.0, true}; }

  Observation counterfactual(const Observation& x, const ParentAssignment&, const ParentAssignment&,
                             std::uint64_t function_seed) const override {
    CounterRng rng(derive_seed(function_seed, "offset-model"), 0);
    const float delta = static_cast<float>(rng.uniform(-max_offset_, max_offset_));
    std::vector<float> px(x.pixels().begin(), x.pixels().end());
    for (float& v : px) v += delta;
    return Observation::clamped(shape_, std::move(px));
  }

 private:
  Shape shape_;
  ParentSpace space_;
  double max_offset_;
};

class NoiseModel final : public CounterfactualModel {
 public:
  NoiseModel(Shape shape, ParentSpace space, double scale) : shape_(shape), space_(std::move(space)), scale_(scale) {
    validate_shape(shape_);
    if (!(scale >= 0.0)) throw ContractError("noise model needs a non-negative scale");
  }

  std::string id() const override { return "noise:" + EntangledModel::format_param(scale_); }
  Shape shape() const override { return shape_; }
  const ParentSpace& space() const override { return space_; }
  ModelCapabilities capabilities() const override { return {false, scale_ == 0.0, true}; }

  Observation counterfactual(const Observation& x, const ParentAssignment& pa, const ParentAssignment& pa_star,
                             std::uint64_t function_seed) const override {
    auto px = noise_model_noise(x, pa, pa_star, function_seed, scale_);
    const auto in = x.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] += in[i];
    return Observation::clamped(shape_, std::move(px));
  }

 private:
  Shape shape_;
  ParentSpace space_;
  double scale_;
};

double parse_unit_param(std::string_view id, std::string_view text) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    throw ContractError("bad numeric parameter in model id '" + std::string(id) + "'");
  }
  return v;
}

}  // namespace

class AbductiveModel::Registry {
 public:
  void insert(std::uint64_t hash, Entry entry) {
    std::unique_lock lock(mutex_);
    entries_.insert_or_assign(hash, std::move(entry));
  }
  std::optional<Entry> find(std::uint64_t hash) const {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(hash);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, Entry> entries_;
};

AbductiveModel::AbductiveModel(const LabeledDataset& dataset)
    : mechanism_(find_mechanism(dataset.shape(), dataset.space())), registry_(std::make_shared<Registry>()) {
  if (!mechanism_) {
    throw ContractError("dataset (" + dataset.shape().to_string() + ", " + dataset.space().to_string() +
                        ") does not come from a built-in mechanism");
  }
  if (!dataset.has_exogenous()) throw ContractError("abductive zoo models need a dataset with exogenous records");
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    registry_->insert(dataset.observation(i).content_hash(), {dataset.exogenous(i), dataset.parents(i)});
  }
}

std::optional<ParentAssignment> AbductiveModel::known_parents(const Observation& x) const {
  if (auto e = registry_->find(x.content_hash())) return e->parents;
  return std::nullopt;
}

AbductiveModel::Entry AbductiveModel::lookup(const Observation& x) const {
  if (auto e = registry_->find(x.content_hash())) return *e;
  throw LookupError("model '" + id() + "': observation is neither in its dataset nor one of its outputs");
}

Observation AbductiveModel::render_and_record(const ExogenousRecord& noise, const ParentAssignment& rendered) const {
  Observation out = mechanism_->render(noise, rendered);
  registry_->insert(out.content_hash(), {noise, rendered});
  return out;
}

std::shared_ptr<const CounterfactualModel> identity_model(Shape shape, ParentSpace space) {
  return std::make_shared<IdentityModel>(shape, std::move(space));
}

std::shared_ptr<const AbductiveModel> ground_truth_model(const LabeledDataset& dataset) {
  return std::make_shared<GroundTruthModel>(dataset);
}

std::shared_ptr<const CounterfactualModel> no_abduction_model(std::shared_ptr<const Mechanism> mechanism,
                                                              std::uint64_t seed) {
  return std::make_shared<NoAbductionModel>(std::move(mechanism), seed);
}

std::shared_ptr<const AbductiveModel> entangled_model(const LabeledDataset& dataset, double lambda) {
  return std::make_shared<EntangledModel>(dataset, lambda);
}

std::shared_ptr<const AbductiveModel> abduction_blend_model(const LabeledDataset& dataset, double alpha,
                                                            std::uint64_t seed) {
  return std::make_shared<BlendModel>(dataset, alpha, seed);
}

std::shared_ptr<const CounterfactualModel> offset_model(Shape shape, ParentSpace space, double max_offset) {
  return std::make_shared<OffsetModel>(shape, std::move(space), max_offset);
}

std::shared_ptr<const CounterfactualModel> noise_model(Shape shape, ParentSpace space, double scale) {
  return std::make_shared<NoiseModel>(shape, std::move(space), scale);
}

std::vector<float> noise_model_noise(const Observation& x, const ParentAssignment& pa,
                                     const ParentAssignment& pa_star, std::uint64_t function_seed, double scale) {
  const std::uint64_t key = x.content_hash() ^ splitmix64(assignment_hash(pa)) ^
                            splitmix64(splitmix64(assignment_hash(pa_star)));
  CounterRng rng(derive_seed(function_seed, "noise-model"), key);
  std::vector<float> n(x.pixels().size());
  for (float& v : n) v = static_cast<float>(scale * rng.normal());
  return n;
}

std::shared_ptr<const CounterfactualModel> make_zoo_model(std::string_view id, const LabeledDataset& dataset,
                                                          std::uint64_t seed) {
  const auto colon = id.find(':');
  const auto head = id.substr(0, colon);
  const auto param = colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);
  auto need_param = [&](bool wanted) {
    if (wanted != (colon != std::string_view::npos)) {
      throw ContractError("model id '" + std::string(id) + "': " +
                          (wanted ? "missing parameter" : "unexpected parameter"));
    }
  };

  if (head == "identity") {
    need_param(false);
    return identity_model(dataset.shape(), dataset.space());
  }
  if (head == "ground-truth") {
    need_param(false);
    return ground_truth_model(dataset);
  }
  if (head == "no-abduction") {
    need_param(false);
    auto mechanism = find_mechanism(dataset.shape(), dataset.space());
    if (!mechanism) throw ContractError("no-abduction model needs a dataset from a built-in mechanism");
    return no_abduction_model(std::move(mechanism), seed);
  }
  if (head == "entangled") {
    need_param(true);
    return entangled_model(dataset, parse_unit_param(id, param));
  }
  if (head == "blend") {
    need_param(true);
    return abduction_blend_model(dataset, parse_unit_param(id, param), seed);
  }
  if (head == "offset") {
    need_param(true);
    return offset_model(dataset.shape(), dataset.space(), parse_unit_param(id, param));
  }
  if (head == "noise") {
    need_param(true);
    return noise_model(dataset.shape(), dataset.space(), parse_unit_param(id, param));
  }
  throw ContractError("unknown zoo model '" + std::string(id) + "'");
}

}  // namespace axbench
