#pragma once

#include <string>
#include <utility>
#include <vector>

namespace synteval {

enum class MetricGroup { Missingness, Marginal, Pairwise, Loo, FullJoint, Privacy };

const char* metric_group_name(MetricGroup g);

// A score t in [0,1] tagged by metric name and substructure group; value is
// the mean of the per-column / per-pair detail entries when any exist.
struct MetricScore {
  std::string name;
  MetricGroup group;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> detail;
  std::vector<std::string> diagnostics;
};

MetricScore make_score(std::string name, MetricGroup group,
                       std::vector<std::pair<std::string, double>> detail,
                       std::vector<std::string> diagnostics = {});

MetricScore make_scalar_score(std::string name, MetricGroup group, double value,
                              std::vector<std::string> diagnostics = {});

double clamp01(double v);

}  // namespace synteval
