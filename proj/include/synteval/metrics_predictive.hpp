#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synteval/learners.hpp"
#include "synteval/metric.hpp"
#include "synteval/table.hpp"

namespace synteval {

// Predict one column from all the others.
struct LooTask {
  std::string target;
  ClassifierSpec learner = DecisionTreeSpec{};
};

struct PrivacyTask {
  std::vector<std::string> sensitive;
  std::vector<std::string> keys;
};

struct SubsampleCaps {
  std::size_t mi_rows = 10000;
  std::size_t efficacy_rows = 15000;
  std::size_t detection_rows = 4500;
  std::size_t privacy_rows = 4500;
};

// Train on synthetic, score on real: harmonize -> cap (stratified on the
// target) -> impute -> encode with fit_on = synth -> fit -> accuracy.
// A single-class synthetic target falls back to majority-class prediction.
MetricScore ml_efficacy(const Table& real, const Table& synth, const LooTask& task,
                        std::uint64_t seed, std::size_t max_rows = 15000);

// ml_efficacy looped over every categorical target and learner spec;
// nullopt when the schema has no categorical columns.
std::optional<MetricScore> loo_group(const Table& real, const Table& synth,
                                     const std::vector<ClassifierSpec>& learners,
                                     std::uint64_t seed, std::size_t max_rows = 15000);

// Real-vs-synthetic classifier two-sample test; t = clamp(2(1 - AUC), 0, 1)
// with the AUC pooled over 5-fold held-out logistic predictions.
MetricScore detection_score(const Table& real, const Table& synth, std::uint64_t seed,
                            std::size_t max_rows = 4500);

double detection_t_from_auc(double auc);

// Correct-attribution attack: exact match on key columns, majority vote on
// the sensitive value; unmatched rows count as incorrect.
std::optional<MetricScore> privacy_cap(const Table& real, const Table& synth,
                                       const PrivacyTask& task, std::uint64_t seed,
                                       std::size_t max_rows = 4500);

// Numeric inference attack via kNN regression on the key columns; accuracy
// is 1 - range-normalized RMSE.
std::optional<MetricScore> privacy_numeric(const Table& real, const Table& synth,
                                           const PrivacyTask& task, std::uint64_t seed,
                                           std::size_t max_rows = 4500);

// Default task: missing-allowed columns are sensitive, the rest are keys.
std::optional<PrivacyTask> default_privacy_task(const Codebook& schema);

// All columns except those named; preserves order.
Table select_columns(const Table& t, const std::vector<std::size_t>& cols);
Table concat_rows(const Table& a, const Table& b);

}  // namespace synteval
