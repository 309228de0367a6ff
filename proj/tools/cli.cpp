#include "cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "axbench/container.hpp"
#include "axbench/dataset.hpp"
#include "axbench/errors.hpp"
#include "axbench/external.hpp"
#include "axbench/idx.hpp"
#include "axbench/intervene.hpp"
#include "axbench/log.hpp"
#include "axbench/oracle.hpp"
#include "axbench/report.hpp"
#include "axbench/serve.hpp"
#include "axbench/suite.hpp"
#include "axbench/zoo.hpp"
#include "mosaic.hpp"

namespace axbench::cli {
namespace {

std::uint64_t env_seed() {
  const char* v = std::getenv("AXBENCH_SEED");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const unsigned long long s = std::strtoull(v, &end, 10);
  if (*end != '\0') throw ContractError("AXBENCH_SEED must be an unsigned integer, got '" + std::string(v) + "'");
  return s;
}

/// A CFDS1 path, or "idx:<images>,<labels>".
LabeledDataset load_dataset(const std::string& spec) {
  if (spec.rfind("idx:", 0) == 0) {
    const auto rest = spec.substr(4);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw ContractError("idx dataset must be idx:<images>,<labels>");
    return load_idx(rest.substr(0, comma), rest.substr(comma + 1));
  }
  return read_container(std::filesystem::path(spec));
}

std::vector<std::size_t> target_indices(const ParentSpace& space, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(space.index_of(n));
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw Error("failed writing '" + path.string() + "'");
}

struct GenerateArgs {
  std::string scm = "unconfounded";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double sigma = 0.05;
  double p = 0.01;
  std::string out;
  std::string csv;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  const bool shapes = a.scm == "shapes";
  LabeledDataset d = shapes ? sample_shapes_dataset(a.n, a.seed) : [&] {
    ScmKind kind = ScmKind::parse(a.scm);
    if (kind.type != ScmKind::Type::unconfounded) kind.sigma = a.sigma;
    if (kind.type == ScmKind::Type::confounded_full_support) kind.p = a.p;
    return sample_dataset(kind, a.n, a.seed);
  }();
  write_container(d, std::filesystem::path(a.out));
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw Error("cannot open '" + a.csv + "' for writing");
    write_parents_csv(d, f);
  }
  out << "wrote " << d.size() << " " << d.provenance().source << " samples (seed " << a.seed << ") to " << a.out
      << "\n";
  return 0;
}

struct IntervenArgs {
  std::string dataset;
  std::vector<std::string> targets;
  std::size_t bins = 5;
  std::size_t n_out = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string support_json;
};

int do_intervene(const IntervenArgs& a, std::ostream& out) {
  const LabeledDataset d = load_dataset(a.dataset);
  std::vector<std::size_t> targets = target_indices(d.space(), a.targets);
  if (targets.empty()) {
    for (std::size_t k = 0; k < d.space().size(); ++k) targets.push_back(k);
  }
  const auto binnings = bin_all(d, a.bins);
  std::string json = "[";
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto rep = support_report(d, targets[t], binnings);
    out << d.space()[targets[t]].name << ": " << (rep.full_support ? "full support" : "missing support") << ", "
        << rep.empty.size() << " empty of " << rep.cells.size() << " cells\n";
    json += (t ? ",\n" : "\n") + support_report_json(rep);
  }
  json += "\n]\n";
  if (!a.support_json.empty()) write_text(a.support_json, json);
  const LabeledDataset r = resample_intervention(d, targets, binnings, a.n_out, a.seed);
  write_container(r, std::filesystem::path(a.out));
  out << "wrote " << r.size() << " resampled samples to " << a.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string dataset;
  std::string parent;
  std::size_t epochs = ClassifierOptions{}.epochs;
  double lr = ClassifierOptions{}.learning_rate;
  double l2 = -1.0;
  std::size_t batch = ClassifierOptions{}.batch_size;
  std::uint64_t seed = 0;
  bool all = false;
  std::string out;
};

int do_train(const TrainArgs& a, std::ostream& out) {
  const LabeledDataset d = load_dataset(a.dataset);
  const std::size_t k = d.space().index_of(a.parent);
  const Split split = train_test_split(d.size(), a.seed);
  const LabeledDataset train = a.all ? d : d.subset(split.train);
  PseudoOracle oracle = [&] {
    if (d.space()[k].is_discrete()) {
      ClassifierOptions o;
      o.epochs = a.epochs;
      o.learning_rate = a.lr;
      if (a.l2 >= 0.0) o.l2 = a.l2;
      o.batch_size = a.batch;
      o.seed = a.seed;
      return train_classifier(train, k, o);
    }
    return a.l2 >= 0.0 ? train_regressor(train, k, a.l2) : train_regressor(train, k);
  }();
  oracle.save(a.out);
  const LabeledDataset held = a.all || split.test.empty() ? d : d.subset(split.test);
  const auto q = oracle_quality(oracle, held);
  char value[32];
  std::snprintf(value, sizeof value, "%.2f", q.value);
  out << a.parent << ": " << (q.discrete ? "accuracy " : "mean absolute error ") << value
      << (q.discrete ? "%" : " points") << " on " << q.samples << (a.all ? " training" : " held-out") << " samples\n";
  return 0;
}

struct EvaluateArgs {
  std::string model;
  std::string dataset;
  std::vector<std::string> oracles;
  std::string train_dataset;
  std::size_t m = 10;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::size_t n_samples = 0;
  std::vector<std::string> targets;
  std::vector<std::string> metrics{"composition", "reversibility", "effectiveness", "commutativity"};
  std::string json;
  std::string csv;
  std::string markdown;
  std::string mosaic;
  std::size_t mosaic_rows = 8;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  double timeout = 60.0;
};

int do_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const LabeledDataset test = load_dataset(a.dataset);
  std::shared_ptr<const CounterfactualModel> model;
  if (a.model.rfind("external:", 0) == 0) {
    ExternalOptions opts;
    opts.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout * 1000.0));
    model = proxy_external(a.model.substr(9), test.shape(), test.space(), opts);
  } else {
    model = make_zoo_model(a.model, test, a.seed);
  }

  SuiteConfig config;
  config.max_power = a.m;
  config.seeds = a.seeds;
  config.n_samples = a.n_samples;
  config.threads = a.threads;
  config.targets = target_indices(test.space(), a.targets);
  auto wants = [&](const char* name) { return std::find(a.metrics.begin(), a.metrics.end(), name) != a.metrics.end(); };
  config.composition = wants("composition");
  config.reversibility = wants("reversibility");
  config.effectiveness = wants("effectiveness");
  config.commutativity = wants("commutativity");

  std::vector<PseudoOracle> oracles;
  for (const auto& path : a.oracles) oracles.push_back(PseudoOracle::load(path));
  if (!a.train_dataset.empty()) {
    auto trained = train_default_oracles(load_dataset(a.train_dataset), a.seed);
    for (auto& o : trained) oracles.push_back(std::move(o));
  }
  std::vector<const Oracle*> handles;
  for (const auto& o : oracles) handles.push_back(&o);

  const SoundnessReport report = evaluate_suite(*model, test, handles, config);
  emit_report(report, {a.json, a.csv, a.markdown});
  out << reports_to_markdown(std::span<const SoundnessReport>(&report, 1));
  if (report.failed > 0) err << "axbench: " << report.failed << " samples failed and were excluded\n";

  if (!a.mosaic.empty()) {
    std::size_t columns = 0;
    const auto tiles = counterfactual_strips(*model, test, a.mosaic_rows, a.m, a.seed, columns);
    write_mosaic(a.mosaic, tiles, columns);
  }
  return 0;
}

int do_report(const std::vector<std::string>& inputs, const std::string& out_path, std::ostream& out) {
  std::vector<SoundnessReport> reports;
  for (const auto& path : inputs) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    reports.push_back(report_from_json(ss.str()));
  }
  const std::string md = reports_to_markdown(reports);
  if (out_path.empty()) {
    out << md;
  } else {
    write_text(out_path, md);
  }
  return 0;
}

struct ServeArgs {
  std::string model;
  std::string dataset;
  std::uint64_t seed = 0;
  int tcp = -1;
  bool once = false;
  std::size_t max_requests = 0;
  std::uint32_t pipelining = 1;
};

int do_serve(const ServeArgs& a, std::ostream& out) {
  const LabeledDataset d = load_dataset(a.dataset);
  const auto model = make_zoo_model(a.model, d, a.seed);
  ServeOptions opts;
  opts.max_requests = a.max_requests;
  opts.pipelining = a.pipelining;
  if (a.tcp < 0) {
    FdChannel channel(STDIN_FILENO, STDOUT_FILENO, false, "standard streams");
    serve_model(*model, channel, opts);
    return 0;
  }
  TcpListener listener(static_cast<std::uint16_t>(a.tcp));
  out << "listening on 127.0.0.1:" << listener.port() << std::endl;
  do {
    auto channel = listener.accept();
    try {
      if (serve_model(*model, *channel, opts) == ServeEnd::request_limit) return 0;
    } catch (const ModelError& e) {
      log_warning(std::string("connection ended: ") + e.what());
    }
  } while (!a.once);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Axiomatic soundness benchmarks for black-box counterfactual image models", "axbench"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::uint64_t default_seed = 0;
  try {
    default_seed = env_seed();
  } catch (const Error& e) {
    err << "axbench: " << e.what() << "\n";
    return 1;
  }

  GenerateArgs g;
  g.seed = default_seed;
  auto* gen = app.add_subcommand("generate", "Sample a synthetic dataset into a CFDS1 container");
  gen->add_option("--scm", g.scm, "unconfounded | confounded | confounded-full | shapes")
      ->check(CLI::IsMember({"unconfounded", "confounded", "confounded-full", "shapes"}));
  gen->add_option("--n", g.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed, "Dataset seed (default: AXBENCH_SEED or 0)");
  gen->add_option("--sigma", g.sigma, "Hue noise of the confounded SCMs")->check(CLI::PositiveNumber);
  gen->add_option("--p", g.p, "Outlier probability of the full-support SCM")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", g.out, "Output container path")->required();
  gen->add_option("--csv", g.csv, "Also write the parent table as CSV");

  IntervenArgs iv;
  iv.seed = default_seed;
  auto* inter = app.add_subcommand("intervene", "Simulate an intervention by histogram resampling");
  inter->add_option("--dataset", iv.dataset, "Source dataset")->required();
  inter->add_option("--targets", iv.targets, "Parents to make independent (default: all)")->delimiter(',');
  inter->add_option("--bins", iv.bins, "Equal-width bins per continuous parent")->check(CLI::Range(2, 1000));
  inter->add_option("--n-out", iv.n_out, "Output size (default: source size)");
  inter->add_option("--seed", iv.seed, "Resampling seed");
  inter->add_option("--out", iv.out, "Output container path")->required();
  inter->add_option("--support-json", iv.support_json, "Write the support reports as JSON");

  TrainArgs tr;
  tr.seed = default_seed;
  auto* train = app.add_subcommand("train-oracle", "Train a linear pseudo-oracle for one parent");
  train->add_option("--dataset", tr.dataset, "Training dataset")->required();
  train->add_option("--parent", tr.parent, "Parent name")->required();
  train->add_option("--epochs", tr.epochs, "Classifier epochs")->check(CLI::PositiveNumber);
  train->add_option("--lr", tr.lr, "Classifier learning rate")->check(CLI::PositiveNumber);
  train->add_option("--l2", tr.l2, "L2 penalty (default: 1e-4 classifier, 1e-3 regressor)")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--batch", tr.batch, "Classifier mini-batch size")->check(CLI::PositiveNumber);
  train->add_option("--seed", tr.seed, "Shuffle and split seed");
  train->add_flag("--all", tr.all, "Train on every sample instead of the 90% split");
  train->add_option("--out", tr.out, "Oracle JSON path")->required();

  EvaluateArgs ev;
  ev.seed = default_seed;
  auto* eval = app.add_subcommand("evaluate", "Run the soundness suite on a model");
  eval->add_option("--model", ev.model,
                   "identity | ground-truth | no-abduction | entangled:<l> | blend:<a> | offset:<d> | noise:<s> | "
                   "external:stdio:<cmd> | external:tcp:<host>:<port>")
      ->required();
  eval->add_option("--dataset", ev.dataset, "Test dataset")->required();
  eval->add_option("--oracle", ev.oracles, "Oracle JSON file (repeatable)");
  eval->add_option("--train-dataset", ev.train_dataset, "Train default oracles on this dataset");
  eval->add_option("--m", ev.m, "Maximum functional power")->check(CLI::Range(1, 1000));
  eval->add_option("--seeds", ev.seeds, "Evaluation seeds")->delimiter(',')->expected(1, -1);
  eval->add_option("--n-samples", ev.n_samples, "Samples per seed (default: whole test set)");
  eval->add_option("--targets", ev.targets, "Intervention targets (default: all parents)")->delimiter(',');
  eval->add_option("--metrics", ev.metrics, "Subset of composition,reversibility,effectiveness,commutativity")
      ->delimiter(',')
      ->check(CLI::IsMember({"composition", "reversibility", "effectiveness", "commutativity"}));
  eval->add_option("--json", ev.json, "Report JSON path");
  eval->add_option("--csv", ev.csv, "Per-sample CSV path");
  eval->add_option("--markdown", ev.markdown, "Markdown table path");
  eval->add_option("--mosaic", ev.mosaic, "PNG of counterfactual strips for the first test samples");
  eval->add_option("--mosaic-rows", ev.mosaic_rows, "Strips in the mosaic")->check(CLI::PositiveNumber);
  eval->add_option("--threads", ev.threads, "Worker threads")->check(CLI::Range(1, 256));
  eval->add_option("--seed", ev.seed, "Seed for stochastic zoo models and oracle training");
  eval->add_option("--timeout", ev.timeout, "External request timeout in seconds")->check(CLI::PositiveNumber);

  std::vector<std::string> report_inputs;
  std::string report_out;
  auto* rep = app.add_subcommand("report", "Render report JSON files as one markdown table");
  rep->add_option("inputs", report_inputs, "Report JSON files")->required();
  rep->add_option("--out", report_out, "Markdown path (default: standard output)");

  ServeArgs sv;
  sv.seed = default_seed;
  auto* serve = app.add_subcommand("serve-zoo", "Serve a zoo model over the line protocol");
  serve->add_option("--model", sv.model, "Zoo model identifier")->required();
  serve->add_option("--dataset", sv.dataset, "Dataset the model is built on")->required();
  serve->add_option("--seed", sv.seed, "Seed for stochastic zoo models");
  serve->add_option("--tcp", sv.tcp, "Listen on this TCP port (0 picks one) instead of standard streams")
      ->check(CLI::Range(0, 65535));
  serve->add_flag("--once", sv.once, "Exit after the first TCP connection");
  serve->add_option("--max-requests", sv.max_requests, "Stop after answering this many requests");
  serve->add_option("--pipelining", sv.pipelining, "Advertised requests in flight")->check(CLI::Range(1, 65536));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (ev.seeds.empty()) throw CLI::ValidationError("--seeds", "at least one seed is required");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return do_generate(g, out);
    if (inter->parsed()) return do_intervene(iv, out);
    if (train->parsed()) return do_train(tr, out);
    if (eval->parsed()) {
      if (std::find(ev.metrics.begin(), ev.metrics.end(), "effectiveness") != ev.metrics.end() &&
          ev.oracles.empty() && ev.train_dataset.empty()) {
        err << "axbench: effectiveness needs --oracle or --train-dataset (or leave it out of --metrics)\n";
        return 1;
      }
      return do_evaluate(ev, out, err);
    }
    if (rep->parsed()) return do_report(report_inputs, report_out, out);
    if (serve->parsed()) return do_serve(sv, out);
  } catch (const std::exception& e) {
    err << "axbench: error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace axbench::cli
