#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synteval/metric.hpp"

namespace synteval {

// Replication statistics of one metric.
struct MetricAggregate {
  std::string name;
  MetricGroup group;
  double mean = 0;
  double stderr_ = 0;
  std::vector<double> per_replication;
  std::vector<std::pair<std::string, double>> detail;  // from the first replication
  std::vector<std::string> diagnostics;
};

// Mean and standard error of one substructure group; member metric
// variances combine assuming independence.
struct GroupScore {
  MetricGroup group;
  double mean = 0;
  double stderr_ = 0;
  std::vector<MetricAggregate> metrics;
};

struct SynthesizerReport {
  std::string name;
  // fixed structural order: missingness, marginal, pairwise, loo, full_joint
  std::vector<GroupScore> structural;
  std::optional<GroupScore> privacy;
  std::optional<double> quality;  // vs the HALF baseline trace
};

struct EvaluationReport {
  int schema_version = 1;
  std::string tool_version;
  std::string created_at;
  double runtime_seconds = 0;
  std::uint64_t seed = 0;
  std::size_t replications = 1;
  std::string quality_formula = "1 - mean |group score - HALF group score|";
  std::vector<SynthesizerReport> synthesizers;
  std::vector<SynthesizerReport> baselines;  // SELF, PERM, HALF
};

// q = 1 - mean over aligned structural groups of |t - t_half|, clamped.
double quality_score(const std::vector<GroupScore>& trace,
                     const std::vector<GroupScore>& half_trace);

enum class ReportFormat { Json, Csv, Markdown };

std::string emit_report(const EvaluationReport& r, ReportFormat format);
void emit_report_file(const EvaluationReport& r, ReportFormat format,
                      const std::string& path);
EvaluationReport parse_report_json(const std::string& text);

}  // namespace synteval
