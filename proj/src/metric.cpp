#include "synteval/metric.hpp"

#include <algorithm>

#include "synteval/error.hpp"

namespace synteval {

const char* metric_group_name(MetricGroup g) {
  switch (g) {
    case MetricGroup::Missingness: return "missingness";
    case MetricGroup::Marginal: return "marginal";
    case MetricGroup::Pairwise: return "pairwise";
    case MetricGroup::Loo: return "loo";
    case MetricGroup::FullJoint: return "full_joint";
    case MetricGroup::Privacy: return "privacy";
  }
  return "?";
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

MetricScore make_score(std::string name, MetricGroup group,
                       std::vector<std::pair<std::string, double>> detail,
                       std::vector<std::string> diagnostics) {
  if (detail.empty()) throw DataError("metric '" + name + "': no sub-scores");
  double sum = 0;
  for (const auto& [_, v] : detail) sum += v;
  MetricScore s;
  s.name = std::move(name);
  s.group = group;
  s.value = sum / static_cast<double>(detail.size());
  s.detail = std::move(detail);
  s.diagnostics = std::move(diagnostics);
  return s;
}

MetricScore make_scalar_score(std::string name, MetricGroup group, double value,
                              std::vector<std::string> diagnostics) {
  MetricScore s;
  s.name = std::move(name);
  s.group = group;
  s.value = value;
  s.diagnostics = std::move(diagnostics);
  return s;
}

}  // namespace synteval
