#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synteval/metrics_predictive.hpp"

namespace synteval {

struct EvalConfig {
  std::string real_path;
  std::string codebook_path;
  std::vector<std::pair<std::string, std::string>> synth_paths;  // (name, path)
  std::optional<std::string> pcc_state_path;
  bool surrogate = false;  // implied by pcc_state_path
  std::size_t replications = 5;
  std::uint64_t seed = 0;

  bool missingness = true;
  bool marginal = true;
  bool pairwise = true;
  bool loo = true;
  bool full_joint = true;
  bool privacy = true;
  bool baselines = true;

  SubsampleCaps caps;
  std::optional<PrivacyTask> privacy_task;  // default derives from the codebook
  std::vector<ClassifierSpec> loo_learners = {DecisionTreeSpec{},
                                              LogisticRegressionSpec{}};

  static EvalConfig from_json_file(const std::string& path);
  static EvalConfig from_json_text(const std::string& text);
  std::string to_json_text() const;

  void validate() const;
};

}  // namespace synteval
