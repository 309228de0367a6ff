#include "axbench/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "axbench/errors.hpp"

namespace axbench {
namespace {

using json = nlohmann::json;

json summary_json(const MetricSummary& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"count", s.count}, {"per_seed", s.per_seed}};
}

double number_or_nan(const json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

MetricSummary summary_from(const json& j) {
  MetricSummary s;
  s.mean = number_or_nan(j.at("mean"));
  s.std = number_or_nan(j.at("std"));
  s.count = j.at("count").get<std::size_t>();
  for (const auto& v : j.at("per_seed")) s.per_seed.push_back(number_or_nan(v));
  return s;
}

std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string column_header(const MetricColumn& c) {
  switch (c.family) {
    case MetricFamily::composition: return "composition l1^(" + std::to_string(c.power) + ")";
    case MetricFamily::reversibility: return c.target + " intervention: reversibility l1^(" + std::to_string(c.power) + ")";
    case MetricFamily::effectiveness:
      return c.target + " intervention: " + (c.discrete ? "acc " + c.readout + " (%)" : "ae " + c.readout);
    case MetricFamily::commutativity: {
      std::string pair = c.target;
      if (const auto bar = pair.find('|'); bar != std::string::npos) pair.replace(bar, 1, " x ");
      return "commutativity " + pair;
    }
  }
  return c.name;
}

bool in_markdown(const MetricColumn& c, std::size_t max_power) {
  switch (c.family) {
    case MetricFamily::composition: return c.power == 1 || c.power == max_power;
    case MetricFamily::reversibility: return c.power == 1;
    default: return true;
  }
}

}  // namespace

std::string format_cell(double mean, double std) {
  if (!std::isfinite(mean)) return "n/a";
  return fmt_number(mean) + " (" + fmt_number(std::isfinite(std) ? std : 0.0) + ")";
}

std::string report_to_json(const SoundnessReport& report) {
  json j;
  j["model"] = report.model;
  j["dataset"] = report.dataset;
  j["distance"] = report.distance;
  j["seeds"] = report.seeds;
  j["max_power"] = report.max_power;
  j["samples_per_seed"] = report.samples_per_seed;
  j["failed"] = report.failed;

  json metrics = json::object();
  std::vector<double> comp_mean, comp_std;
  std::vector<std::size_t> comp_m;
  json comp_per_seed = json::array();
  std::size_t comp_count = 0;
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    const auto& col = report.columns[c];
    const auto& s = report.summaries[c];
    switch (col.family) {
      case MetricFamily::composition:
        comp_m.push_back(col.power);
        comp_mean.push_back(s.mean);
        comp_std.push_back(s.std);
        comp_per_seed.push_back(s.per_seed);
        comp_count = s.count;
        break;
      case MetricFamily::reversibility: {
        auto& r = metrics["reversibility"][col.target];
        r["m"].push_back(col.power);
        r["mean"].push_back(s.mean);
        r["std"].push_back(s.std);
        r["per_seed"].push_back(s.per_seed);
        r["count"] = s.count;
        break;
      }
      case MetricFamily::effectiveness: {
        auto e = summary_json(s);
        e["kind"] = col.discrete ? "accuracy" : "absolute_error";
        metrics["effectiveness"][col.target][col.readout] = e;
        break;
      }
      case MetricFamily::commutativity:
        metrics["commutativity"][col.target] = summary_json(s);
        break;
    }
  }
  if (!comp_m.empty()) {
    metrics["composition"] = {
        {"m", comp_m}, {"mean", comp_mean}, {"std", comp_std}, {"per_seed", comp_per_seed}, {"count", comp_count}};
  }
  j["metrics"] = metrics;

  json oq = json::object();
  for (const auto& q : report.oracle_quality) {
    oq[q.parent] = {{"kind", q.discrete ? "accuracy" : "absolute_error"}, {"value", q.value}, {"samples", q.samples}};
  }
  j["oracle_quality"] = oq;
  j["columns"] = json::array();
  for (const auto& c : report.columns) j["columns"].push_back(c.name);
  return j.dump(2) + "\n";
}

SoundnessReport report_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    SoundnessReport r;
    r.model = j.at("model").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.distance = j.value("distance", "l1");
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.max_power = j.at("max_power").get<std::size_t>();
    r.samples_per_seed = j.value("samples_per_seed", std::size_t{0});
    r.failed = j.value("failed", std::size_t{0});

    const auto& metrics = j.at("metrics");
    // Restore the original column order from the "columns" list.
    for (const auto& name_json : j.at("columns")) {
      const auto name = name_json.get<std::string>();
      MetricColumn col;
      col.name = name;
      MetricSummary s;
      std::vector<std::string> parts;
      std::stringstream ss(name);
      for (std::string part; std::getline(ss, part, '/');) parts.push_back(part);
      auto power_of = [](const std::string& p) { return static_cast<std::size_t>(std::stoul(p.substr(1))); };
      if (parts.size() == 2 && parts[0] == "composition") {
        col.family = MetricFamily::composition;
        col.power = power_of(parts[1]);
        const auto& c = metrics.at("composition");
        const auto m = c.at("m").get<std::vector<std::size_t>>();
        const auto pos = static_cast<std::size_t>(std::find(m.begin(), m.end(), col.power) - m.begin());
        s.mean = number_or_nan(c.at("mean").at(pos));
        s.std = number_or_nan(c.at("std").at(pos));
        s.count = c.at("count").get<std::size_t>();
        for (const auto& v : c.at("per_seed").at(pos)) s.per_seed.push_back(number_or_nan(v));
      } else if (parts.size() == 3 && parts[0] == "reversibility") {
        col.family = MetricFamily::reversibility;
        col.target = parts[1];
        col.power = power_of(parts[2]);
        const auto& c = metrics.at("reversibility").at(col.target);
        const auto m = c.at("m").get<std::vector<std::size_t>>();
        const auto pos = static_cast<std::size_t>(std::find(m.begin(), m.end(), col.power) - m.begin());
        s.mean = number_or_nan(c.at("mean").at(pos));
        s.std = number_or_nan(c.at("std").at(pos));
        s.count = c.at("count").get<std::size_t>();
        for (const auto& v : c.at("per_seed").at(pos)) s.per_seed.push_back(number_or_nan(v));
      } else if (parts.size() == 3 && parts[0] == "effectiveness") {
        col.family = MetricFamily::effectiveness;
        col.target = parts[1];
        col.readout = parts[2];
        const auto& e = metrics.at("effectiveness").at(col.target).at(col.readout);
        col.discrete = e.at("kind") == "accuracy";
        col.scale = col.discrete ? 100.0 : 1.0;
        s = summary_from(e);
      } else if (parts.size() == 2 && parts[0] == "commutativity") {
        col.family = MetricFamily::commutativity;
        col.target = parts[1];
        s = summary_from(metrics.at("commutativity").at(col.target));
      } else {
        throw FormatError("report JSON: unrecognised column '" + name + "'");
      }
      r.columns.push_back(std::move(col));
      r.summaries.push_back(std::move(s));
    }
    for (const auto& [parent, q] : j.at("oracle_quality").items()) {
      r.oracle_quality.push_back({parent, q.at("kind") == "accuracy", q.at("value").get<double>(),
                                  q.at("samples").get<std::size_t>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("report JSON: ") + e.what());
  }
}

void write_samples_csv(const SoundnessReport& report, std::ostream& out) {
  out << "seed,index,failed";
  for (const auto& c : report.columns) out << ',' << c.name;
  out << '\n';
  char buf[40];
  for (const auto& rec : report.samples) {
    out << rec.seed << ',' << rec.index << ',' << (rec.failed ? 1 : 0);
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
      out << ',';
      if (!rec.failed) {
        std::snprintf(buf, sizeof buf, "%.17g", rec.values[c]);
        out << buf;
      }
    }
    out << '\n';
  }
}

std::string reports_to_markdown(std::span<const SoundnessReport> reports) {
  std::ostringstream os;
  if (reports.empty()) return {};
  const auto& ref = reports.front();
  std::vector<std::size_t> shown;
  for (std::size_t c = 0; c < ref.columns.size(); ++c) {
    if (in_markdown(ref.columns[c], ref.max_power)) shown.push_back(c);
  }
  os << "| model |";
  for (std::size_t c : shown) os << ' ' << column_header(ref.columns[c]) << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < shown.size(); ++i) os << "---|";
  os << '\n';
  for (const auto& r : reports) {
    os << "| " << r.model << " |";
    for (std::size_t c : shown) {
      const auto idx = r.column_index(ref.columns[c].name);
      os << ' ' << (idx ? format_cell(r.summaries[*idx].mean, r.summaries[*idx].std) : std::string("-")) << " |";
    }
    os << '\n';
  }
  return os.str();
}

void emit_report(const SoundnessReport& report, const ReportPaths& paths) {
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw Error("cannot open '" + p.string() + "' for writing");
    return out;
  };
  if (!paths.json.empty()) {
    auto out = open(paths.json);
    out << report_to_json(report);
    if (!out) throw Error("failed writing '" + paths.json.string() + "'");
  }
  if (!paths.csv.empty()) {
    auto out = open(paths.csv);
    write_samples_csv(report, out);
    if (!out) throw Error("failed writing '" + paths.csv.string() + "'");
  }
  if (!paths.markdown.empty()) {
    auto out = open(paths.markdown);
    out << reports_to_markdown(std::span<const SoundnessReport>(&report, 1));
    if (!out) throw Error("failed writing '" + paths.markdown.string() + "'");
  }
}

}  // namespace axbench
