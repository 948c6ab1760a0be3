#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "synteval/table.hpp"

namespace synteval {

// Dense row-major real matrix fed to the learners. Categorical columns
// expand to one-hot blocks sized by the codebook; continuous columns are
// min-max scaled with constants taken from the fitting table only.
struct FeatureMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * n_cols, n_cols};
  }
  double& at(std::size_t i, std::size_t j) { return data[i * n_cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * n_cols + j]; }
};

FeatureMatrix encode(const Table& t, const Table& fit_on);

// Encoded width of each source column (category count or 1).
std::vector<std::size_t> encode_block_widths(const Codebook& schema);

// Appends, to each row, the products of features drawn from distinct source
// columns. Gives linear models capacity for pairwise dependence; the
// expansion is skipped when it would exceed max_cols.
FeatureMatrix with_pair_interactions(const FeatureMatrix& m,
                                     std::span<const std::size_t> block_widths,
                                     std::size_t max_cols = 20000);

struct DecisionTreeSpec {
  std::size_t max_depth = 12;
  std::size_t min_leaf = 5;
};

struct LogisticRegressionSpec {
  double learning_rate = 0.1;
  std::size_t epochs = 300;
  double l2 = 1e-4;
};

using ClassifierSpec = std::variant<DecisionTreeSpec, LogisticRegressionSpec>;

const char* classifier_spec_name(const ClassifierSpec& spec);

class Classifier {
public:
  virtual ~Classifier() = default;
  // One probability row per input row; rows sum to 1.
  virtual std::vector<std::vector<double>> predict_proba(
      const FeatureMatrix& features) const = 0;
  std::vector<std::size_t> predict(const FeatureMatrix& features) const;
  virtual std::size_t n_classes() const = 0;
};

std::unique_ptr<Classifier> fit_classifier(const FeatureMatrix& features,
                                           std::span<const std::size_t> labels,
                                           const ClassifierSpec& spec,
                                           std::uint64_t seed);

// Mean target of the k nearest training rows (Euclidean; ties broken by
// training-row index).
std::vector<double> knn_regress(const FeatureMatrix& train_features,
                                std::span<const double> train_targets,
                                const FeatureMatrix& query, std::size_t k);

// Exact Mann-Whitney AUC: P(score+ > score-) + 1/2 P(tie).
double roc_auc(std::span<const double> scores, std::span<const int> labels);

double accuracy(std::span<const std::size_t> predicted,
                std::span<const std::size_t> actual);

// Cross-entropy loss and its gradient for a single binary logistic model;
// exposed so the gradient can be checked against finite differences.
double logistic_loss(std::span<const double> weights, double bias,
                     const FeatureMatrix& x, std::span<const int> y, double l2);
void logistic_grad(std::span<const double> weights, double bias,
                   const FeatureMatrix& x, std::span<const int> y, double l2,
                   std::span<double> grad_w, double& grad_b);

}  // namespace synteval
