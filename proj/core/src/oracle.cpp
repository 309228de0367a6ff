#include "axbench/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <Eigen/Dense>
#include <json.hpp>

#include "axbench/base64.hpp"
#include "axbench/errors.hpp"
#include "axbench/features.hpp"
#include "axbench/rng.hpp"

namespace axbench {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using json = nlohmann::json;

// Feature rows for a batch of dataset indices.
void featurize_batch(const LabeledDataset& dataset, std::span<const std::size_t> indices, RowMatrix& out) {
  const std::size_t f = feature_length(dataset.shape());
  out.resize(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(f));
  for (std::size_t r = 0; r < indices.size(); ++r) {
    featurize_into(dataset.observation(indices[r]), {out.row(static_cast<Eigen::Index>(r)).data(), f});
  }
}

const char* kind_name(PseudoOracle::Kind kind) {
  return kind == PseudoOracle::Kind::classifier ? "classifier" : "regressor";
}

json descriptor_json(const ParentDescriptor& d) {
  json j{{"name", d.name}, {"kind", d.is_discrete() ? "discrete" : "continuous"}};
  if (d.is_discrete()) {
    j["cardinality"] = d.cardinality;
  } else {
    j["lower"] = d.lower;
    j["upper"] = d.upper;
  }
  return j;
}

ParentDescriptor descriptor_from_json(const json& j) {
  const auto name = j.at("name").get<std::string>();
  if (j.at("kind") == "discrete") return ParentDescriptor::discrete(name, j.at("cardinality").get<std::uint32_t>());
  return ParentDescriptor::continuous(name, j.at("lower").get<double>(), j.at("upper").get<double>());
}

}  // namespace

FunctionOracle lookup_oracle(const LabeledDataset& dataset, std::size_t k) {
  const auto& desc = dataset.space()[k];
  auto table = std::make_shared<std::unordered_map<std::uint64_t, double>>();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    table->emplace(dataset.observation(i).content_hash(), dataset.parents(i)[k]);
  }
  return FunctionOracle(k, desc, [table](const Observation& x) {
    const auto it = table->find(x.content_hash());
    if (it == table->end()) throw LookupError("lookup oracle: observation not in its table");
    return it->second;
  });
}

PseudoOracle::PseudoOracle(std::size_t parent, ParentDescriptor descriptor, Kind kind, Shape input_shape,
                           std::vector<double> weights, std::vector<double> biases, TrainingProvenance provenance)
    : parent_(parent),
      descriptor_(std::move(descriptor)),
      kind_(kind),
      shape_(input_shape),
      features_(feature_length(input_shape)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      provenance_(std::move(provenance)) {
  validate_shape(shape_);
  const bool discrete = descriptor_.is_discrete();
  if ((kind_ == Kind::classifier) != discrete) {
    throw ContractError("classifier oracles need discrete parents and regressors continuous ones");
  }
  const std::size_t outputs = kind_ == Kind::classifier ? descriptor_.cardinality : 1;
  if (biases_.size() != outputs || weights_.size() != outputs * features_) {
    throw ContractError("oracle weight dimensions do not match the feature map and output count");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(weights_.begin(), weights_.end(), finite) || !std::all_of(biases_.begin(), biases_.end(), finite)) {
    throw ContractError("oracle weights must be finite");
  }
}

std::vector<double> PseudoOracle::scores(const Observation& x) const {
  if (x.shape() != shape_) {
    throw ContractError("oracle expects shape " + shape_.to_string() + ", got " + x.shape().to_string());
  }
  const auto f = featurize(x);
  Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  Eigen::Map<const RowMatrix> w(weights_.data(), static_cast<Eigen::Index>(biases_.size()),
                                static_cast<Eigen::Index>(features_));
  Eigen::Map<const Eigen::VectorXd> b(biases_.data(), static_cast<Eigen::Index>(biases_.size()));
  Eigen::VectorXd s = w * fv + b;
  return {s.data(), s.data() + s.size()};
}

double PseudoOracle::predict(const Observation& x) const {
  const auto s = scores(x);
  if (kind_ == Kind::classifier) {
    return static_cast<double>(std::max_element(s.begin(), s.end()) - s.begin());
  }
  return std::clamp(s.front(), descriptor_.lower, descriptor_.upper);
}

std::string PseudoOracle::to_json() const {
  json j;
  j["format"] = "axbench-oracle";
  j["version"] = 1;
  j["parent"] = parent_;
  j["descriptor"] = descriptor_json(descriptor_);
  j["kind"] = kind_name(kind_);
  j["input_shape"] = {shape_.height, shape_.width, shape_.channels};
  j["feature_map"] = {{"name", kFeatureMapName}, {"length", features_}};
  j["weights"] = encode_f64(weights_);
  j["biases"] = encode_f64(biases_);
  j["provenance"] = {{"dataset_source", provenance_.dataset_source},
                     {"dataset_seed", provenance_.dataset_seed},
                     {"samples", provenance_.samples},
                     {"epochs", provenance_.epochs},
                     {"learning_rate", provenance_.learning_rate},
                     {"l2", provenance_.l2},
                     {"batch_size", provenance_.batch_size},
                     {"seed", provenance_.seed},
                     {"epoch_loss", provenance_.epoch_loss}};
  return j.dump(2);
}

PseudoOracle PseudoOracle::from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    if (j.at("format") != "axbench-oracle") throw FormatError("not an oracle file");
    const auto shape_arr = j.at("input_shape");
    const Shape shape{shape_arr.at(0).get<std::uint32_t>(), shape_arr.at(1).get<std::uint32_t>(),
                      shape_arr.at(2).get<std::uint32_t>()};
    if (j.at("feature_map").at("name") != kFeatureMapName ||
        j.at("feature_map").at("length").get<std::size_t>() != feature_length(shape)) {
      throw FormatError("oracle feature map does not match this build");
    }
    const auto& p = j.at("provenance");
    TrainingProvenance prov;
    prov.dataset_source = p.value("dataset_source", "");
    prov.dataset_seed = p.value("dataset_seed", std::uint64_t{0});
    prov.samples = p.value("samples", std::size_t{0});
    prov.epochs = p.value("epochs", std::size_t{0});
    prov.learning_rate = p.value("learning_rate", 0.0);
    prov.l2 = p.value("l2", 0.0);
    prov.batch_size = p.value("batch_size", std::size_t{0});
    prov.seed = p.value("seed", std::uint64_t{0});
    prov.epoch_loss = p.value("epoch_loss", std::vector<double>{});
    const auto kind = j.at("kind") == "classifier" ? Kind::classifier : Kind::regressor;
    return PseudoOracle(j.at("parent").get<std::size_t>(), descriptor_from_json(j.at("descriptor")), kind, shape,
                        decode_f64(j.at("weights").get<std::string>()), decode_f64(j.at("biases").get<std::string>()),
                        std::move(prov));
  } catch (const json::exception& e) {
    throw FormatError(std::string("oracle JSON: ") + e.what());
  } catch (const ContractError& e) {
    throw FormatError(std::string("oracle JSON: ") + e.what());
  }
}

void PseudoOracle::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << to_json() << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

PseudoOracle PseudoOracle::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

double softmax_cross_entropy(std::span<const double> weights, std::span<const double> biases,
                             std::span<const double> features, std::span<const std::size_t> labels, double l2,
                             std::vector<double>* grad_weights, std::vector<double>* grad_biases) {
  const auto classes = static_cast<Eigen::Index>(biases.size());
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (classes < 2 || n == 0 || weights.size() % biases.size() != 0) {
    throw ContractError("softmax_cross_entropy: inconsistent dimensions");
  }
  const auto f = static_cast<Eigen::Index>(weights.size() / biases.size());
  if (features.size() != static_cast<std::size_t>(n * f)) throw ContractError("feature matrix size mismatch");

  Eigen::Map<const RowMatrix> w(weights.data(), classes, f);
  Eigen::Map<const Eigen::RowVectorXd> b(biases.data(), classes);
  Eigen::Map<const RowMatrix> x(features.data(), n, f);

  RowMatrix logits = x * w.transpose();
  logits.rowwise() += b;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto row = logits.row(i);
    const double mx = row.maxCoeff();
    row = (row.array() - mx).exp().matrix();
    const double z = row.sum();
    row /= z;
    const auto y = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]);
    if (y >= classes) throw ContractError("label outside class range");
    loss -= std::log(std::max(row(y), 1e-300));
    row(y) -= 1.0;  // probabilities minus one-hot
  }
  loss = loss / static_cast<double>(n) + 0.5 * l2 * w.squaredNorm();

  if (grad_weights) {
    grad_weights->resize(weights.size());
    Eigen::Map<RowMatrix> gw(grad_weights->data(), classes, f);
    gw.noalias() = logits.transpose() * x / static_cast<double>(n);
    gw += l2 * w;
  }
  if (grad_biases) {
    grad_biases->resize(biases.size());
    Eigen::Map<Eigen::RowVectorXd> gb(grad_biases->data(), classes);
    gb = logits.colwise().sum() / static_cast<double>(n);
  }
  return loss;
}

PseudoOracle train_classifier(const LabeledDataset& dataset, std::size_t k, const ClassifierOptions& options) {
  const auto& desc = dataset.space()[k];
  if (!desc.is_discrete()) throw ContractError("train_classifier needs a discrete parent");
  if (dataset.size() == 0) throw TrainingError("cannot train on an empty dataset");
  if (options.epochs == 0 || options.batch_size == 0) throw ContractError("epochs and batch size must be positive");

  std::vector<std::size_t> labels(dataset.size());
  std::vector<bool> present(desc.cardinality, false);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    labels[i] = static_cast<std::size_t>(dataset.parents(i)[k]);
    present[labels[i]] = true;
  }
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw TrainingError("classifier for '" + desc.name + "' needs at least two classes present");
  }

  const std::size_t classes = desc.cardinality;
  const std::size_t f = feature_length(dataset.shape());
  std::vector<double> w(classes * f, 0.0), b(classes, 0.0), gw, gb;
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  TrainingProvenance prov{dataset.provenance().source, dataset.provenance().seed, dataset.size(), options.epochs,
                          options.learning_rate, options.l2, options.batch_size, options.seed, {}};
  RowMatrix batch;
  std::vector<std::size_t> batch_labels;
  const std::uint64_t shuffle_seed = derive_seed(options.seed, "classifier-shuffle");
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    CounterRng rng(shuffle_seed, epoch);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      featurize_batch(dataset, idx, batch);
      batch_labels.resize(idx.size());
      for (std::size_t r = 0; r < idx.size(); ++r) batch_labels[r] = labels[idx[r]];
      const double loss = softmax_cross_entropy(w, b, {batch.data(), static_cast<std::size_t>(batch.size())},
                                                batch_labels, options.l2, &gw, &gb);
      if (!std::isfinite(loss)) {
        throw TrainingError("non-finite training loss in epoch " + std::to_string(epoch) +
                            "; the learning rate is probably too large");
      }
      loss_sum += loss * static_cast<double>(idx.size());
      seen += idx.size();
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= options.learning_rate * gw[j];
      for (std::size_t j = 0; j < b.size(); ++j) b[j] -= options.learning_rate * gb[j];
    }
    prov.epoch_loss.push_back(loss_sum / static_cast<double>(seen));
  }
  if (!std::all_of(w.begin(), w.end(), [](double v) { return std::isfinite(v); })) {
    throw TrainingError("classifier weights diverged");
  }
  return PseudoOracle(k, desc, PseudoOracle::Kind::classifier, dataset.shape(), std::move(w), std::move(b),
                      std::move(prov));
}

PseudoOracle train_regressor(const LabeledDataset& dataset, std::size_t k, double l2) {
  const auto& desc = dataset.space()[k];
  if (desc.is_discrete()) throw ContractError("train_regressor needs a continuous parent");
  if (dataset.size() == 0) throw TrainingError("cannot train on an empty dataset");
  if (!(l2 >= 0.0)) throw ContractError("l2 must be non-negative");

  const auto f = static_cast<Eigen::Index>(feature_length(dataset.shape()));
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(f, f);
  Eigen::VectorXd sum_x = Eigen::VectorXd::Zero(f);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(f);
  double sum_y = 0.0;

  constexpr std::size_t kChunk = 256;
  std::vector<std::size_t> idx;
  RowMatrix batch;
  for (std::size_t start = 0; start < dataset.size(); start += kChunk) {
    idx.clear();
    for (std::size_t i = start; i < std::min(dataset.size(), start + kChunk); ++i) idx.push_back(i);
    featurize_batch(dataset, idx, batch);
    Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) y(static_cast<Eigen::Index>(r)) = dataset.parents(idx[r])[k];
    gram.selfadjointView<Eigen::Lower>().rankUpdate(batch.transpose());
    sum_x += batch.colwise().sum().transpose();
    xty.noalias() += batch.transpose() * y;
    sum_y += y.sum();
  }

  const double n = static_cast<double>(dataset.size());
  const Eigen::VectorXd mu = sum_x / n;
  const double y_mean = sum_y / n;
  Eigen::MatrixXd system = gram.selfadjointView<Eigen::Lower>();
  system.noalias() -= n * mu * mu.transpose();
  system.diagonal().array() += l2;
  const Eigen::VectorXd rhs = xty - n * y_mean * mu;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  const auto d = ldlt.vectorD();
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || d.minCoeff() <= 1e-12 * scale) {
    throw TrainingError("ridge system for '" + desc.name + "' is singular; increase l2");
  }
  const Eigen::VectorXd w = ldlt.solve(rhs);
  const double bias = y_mean - mu.dot(w);
  if (!w.allFinite() || !std::isfinite(bias)) throw TrainingError("ridge solution is not finite");

  TrainingProvenance prov{dataset.provenance().source, dataset.provenance().seed, dataset.size(), 0, 0.0, l2, 0, 0,
                          {}};
  return PseudoOracle(k, desc, PseudoOracle::Kind::regressor, dataset.shape(),
                      std::vector<double>(w.data(), w.data() + w.size()), {bias}, std::move(prov));
}

std::vector<PseudoOracle> train_default_oracles(const LabeledDataset& dataset, std::uint64_t seed) {
  std::vector<PseudoOracle> out;
  for (std::size_t k = 0; k < dataset.space().size(); ++k) {
    if (dataset.space()[k].is_discrete()) {
      ClassifierOptions opts;
      opts.seed = seed;
      out.push_back(train_classifier(dataset, k, opts));
    } else {
      out.push_back(train_regressor(dataset, k));
    }
  }
  return out;
}

OracleQuality oracle_quality(const Oracle& oracle, const LabeledDataset& dataset) {
  const std::size_t k = oracle.parent();
  if (k >= dataset.space().size() || dataset.space()[k].name != oracle.descriptor().name) {
    throw ContractError("dataset does not carry the oracle's parent '" + oracle.descriptor().name + "'");
  }
  OracleQuality q;
  q.parent = k;
  q.discrete = oracle.descriptor().is_discrete();
  q.samples = dataset.size();
  std::vector<double> per(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double pred = oracle.predict(dataset.observation(i));
    const double truth = dataset.parents(i)[k];
    per[i] = q.discrete ? (pred == truth ? 100.0 : 0.0) : 100.0 * std::abs(pred - truth);
  }
  double sum = 0.0;
  for (double v : per) sum += v;
  q.value = dataset.size() ? sum / static_cast<double>(dataset.size()) : 0.0;
  return q;
}

}  // namespace axbench
