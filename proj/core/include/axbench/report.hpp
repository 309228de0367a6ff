#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "axbench/suite.hpp"

namespace axbench {

/// {model, dataset, seeds, metrics: {composition: {m, mean, std, ...},
/// reversibility: {target: {...}}, effectiveness: {target: {readout: {kind,
/// mean, std, ...}}}, commutativity: {"a|b": {...}}}, oracle_quality: {...}}
std::string report_to_json(const SoundnessReport& report);

/// Rebuilds the report's columns and summaries from its JSON form (per-sample
/// records are not part of the JSON and come back empty).
SoundnessReport report_from_json(std::string_view text);

/// One row per (seed, sample): seed, index, failed, then one column per metric.
void write_samples_csv(const SoundnessReport& report, std::ostream& out);

/// Table-style grid, one row per report, cells formatted "mean (std)".
std::string reports_to_markdown(std::span<const SoundnessReport> reports);

/// "6.26 (0.29)"
std::string format_cell(double mean, double std);

struct ReportPaths {
  std::filesystem::path json;
  std::filesystem::path csv;
  std::filesystem::path markdown;
};

/// Writes each format whose path is non-empty. Throws Error on unwritable paths.
void emit_report(const SoundnessReport& report, const ReportPaths& paths);

}  // namespace axbench
