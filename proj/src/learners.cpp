#include "synteval/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "synteval/rng.hpp"

namespace synteval {

//----------------------------------------------------------------------------
// Encoding

FeatureMatrix encode(const Table& t, const Table& fit_on) {
  if (!(t.schema() == fit_on.schema()))
    throw DataError("encode: table and fit_on schemas do not match");

  const std::size_t m = t.n_cols();
  struct ColPlan {
    bool categorical;
    std::size_t width;
    double lo = 0, span = 0;  // continuous scaling from fit_on
  };
  std::vector<ColPlan> plan(m);
  std::size_t width = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const auto& spec = t.schema().column(j);
    if (spec.kind == ColumnKind::Categorical) {
      plan[j] = {true, spec.categories.size()};
    } else {
      auto vals = observed_values(fit_on, j);
      double lo = 0, hi = 0;
      if (!vals.empty()) {
        lo = *std::min_element(vals.begin(), vals.end());
        hi = *std::max_element(vals.begin(), vals.end());
      }
      plan[j] = {false, 1, lo, hi - lo};
    }
    width += plan[j].width;
  }

  FeatureMatrix out;
  out.n_rows = t.n_rows();
  out.n_cols = width;
  out.data.assign(out.n_rows * width, 0.0);
  for (std::size_t i = 0; i < t.n_rows(); ++i) {
    std::size_t base = i * width;
    std::size_t off = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const Cell& c = t.at(i, j);
      if (c.is_missing())
        throw DataError("encode: missing cell in column '" +
                        t.schema().column(j).name + "' (impute first)");
      if (plan[j].categorical) {
        out.data[base + off + c.category()] = 1.0;
      } else {
        // zero-range guard: constant fit column encodes to 0
        out.data[base + off] =
            plan[j].span > 0 ? (c.value() - plan[j].lo) / plan[j].span : 0.0;
      }
      off += plan[j].width;
    }
  }
  return out;
}

std::vector<std::size_t> encode_block_widths(const Codebook& schema) {
  std::vector<std::size_t> widths;
  widths.reserve(schema.n_cols());
  for (const auto& col : schema.columns())
    widths.push_back(col.kind == ColumnKind::Categorical ? col.categories.size() : 1);
  return widths;
}

FeatureMatrix with_pair_interactions(const FeatureMatrix& m,
                                     std::span<const std::size_t> block_widths,
                                     std::size_t max_cols) {
  std::size_t base = m.n_cols;
  std::size_t extra = 0;
  for (std::size_t a = 0; a < block_widths.size(); ++a)
    for (std::size_t b = a + 1; b < block_widths.size(); ++b)
      extra += block_widths[a] * block_widths[b];
  if (base + extra > max_cols) return m;

  std::vector<std::size_t> offsets(block_widths.size());
  std::size_t off = 0;
  for (std::size_t a = 0; a < block_widths.size(); ++a) {
    offsets[a] = off;
    off += block_widths[a];
  }
  if (off != base) throw DataError("interactions: block widths do not match matrix");

  FeatureMatrix out;
  out.n_rows = m.n_rows;
  out.n_cols = base + extra;
  out.data.assign(out.n_rows * out.n_cols, 0.0);
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    auto src = m.row(i);
    double* dst = out.data.data() + i * out.n_cols;
    std::copy(src.begin(), src.end(), dst);
    std::size_t p = base;
    for (std::size_t a = 0; a < block_widths.size(); ++a)
      for (std::size_t b = a + 1; b < block_widths.size(); ++b)
        for (std::size_t u = 0; u < block_widths[a]; ++u)
          for (std::size_t v = 0; v < block_widths[b]; ++v)
            dst[p++] = src[offsets[a] + u] * src[offsets[b] + v];
  }
  return out;
}

//----------------------------------------------------------------------------
// Decision tree (CART, Gini)

namespace {

struct TreeNode {
  int feature = -1;  // -1: leaf
  double threshold = 0;
  std::size_t left = 0, right = 0;
  std::vector<double> class_probs;
};

double gini(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (std::size_t c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

class DecisionTree final : public Classifier {
public:
  DecisionTree(const FeatureMatrix& x, std::span<const std::size_t> labels,
               const DecisionTreeSpec& spec, std::size_t n_classes)
      : n_classes_(n_classes), spec_(spec) {
    std::vector<std::size_t> rows(x.n_rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    build(x, labels, rows, 0);
  }

  std::vector<std::vector<double>> predict_proba(const FeatureMatrix& f) const override {
    std::vector<std::vector<double>> out;
    out.reserve(f.n_rows);
    for (std::size_t i = 0; i < f.n_rows; ++i) {
      std::size_t node = 0;
      while (nodes_[node].feature >= 0) {
        node = f.at(i, static_cast<std::size_t>(nodes_[node].feature)) <=
                       nodes_[node].threshold
                   ? nodes_[node].left
                   : nodes_[node].right;
      }
      out.push_back(nodes_[node].class_probs);
    }
    return out;
  }

  std::size_t n_classes() const override { return n_classes_; }

private:
  std::size_t build(const FeatureMatrix& x, std::span<const std::size_t> labels,
                    const std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();

    std::vector<std::size_t> counts(n_classes_, 0);
    for (std::size_t r : rows) ++counts[labels[r]];
    const double node_gini = gini(counts, rows.size());

    bool stop = depth >= spec_.max_depth || rows.size() < 2 * spec_.min_leaf ||
                node_gini == 0.0;
    int best_feature = -1;
    double best_threshold = 0;
    double best_impurity = std::numeric_limits<double>::infinity();

    if (!stop) {
      std::vector<std::pair<double, std::size_t>> ordered(rows.size());
      std::vector<std::size_t> left_counts(n_classes_);
      for (std::size_t f = 0; f < x.n_cols; ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i)
          ordered[i] = {x.at(rows[i], f), labels[rows[i]]};
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::fill(left_counts.begin(), left_counts.end(), 0);
        std::size_t n_left = 0;
        for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
          ++left_counts[ordered[i].second];
          ++n_left;
          if (ordered[i].first == ordered[i + 1].first) continue;
          std::size_t n_right = ordered.size() - n_left;
          if (n_left < spec_.min_leaf || n_right < spec_.min_leaf) continue;
          std::vector<std::size_t> right_counts(n_classes_);
          for (std::size_t c = 0; c < n_classes_; ++c)
            right_counts[c] = counts[c] - left_counts[c];
          double impurity =
              (static_cast<double>(n_left) * gini(left_counts, n_left) +
               static_cast<double>(n_right) * gini(right_counts, n_right)) /
              static_cast<double>(ordered.size());
          if (impurity < best_impurity) {
            best_impurity = impurity;
            best_feature = static_cast<int>(f);
            best_threshold = (ordered[i].first + ordered[i + 1].first) / 2.0;
          }
        }
      }
    }

    // Zero-gain splits are allowed while the node is impure: parity-style
    // patterns need them and each split strictly shrinks both sides.
    if (best_feature < 0 || best_impurity > node_gini) {
      auto& leaf = nodes_[id];
      leaf.class_probs.resize(n_classes_);
      for (std::size_t c = 0; c < n_classes_; ++c)
        leaf.class_probs[c] =
            static_cast<double>(counts[c]) / static_cast<double>(rows.size());
      return id;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      if (x.at(r, static_cast<std::size_t>(best_feature)) <= best_threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    std::size_t left = build(x, labels, left_rows, depth + 1);
    std::size_t right = build(x, labels, right_rows, depth + 1);
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::vector<TreeNode> nodes_;
  std::size_t n_classes_;
  DecisionTreeSpec spec_;
};

//----------------------------------------------------------------------------
// Logistic regression (full-batch GD, one-vs-rest)

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

class LogisticRegression final : public Classifier {
public:
  LogisticRegression(const FeatureMatrix& x, std::span<const std::size_t> labels,
                     const LogisticRegressionSpec& spec, std::size_t n_classes)
      : n_classes_(n_classes) {
    weights_.assign(n_classes, std::vector<double>(x.n_cols, 0.0));
    biases_.assign(n_classes, 0.0);
    std::vector<int> y(x.n_rows);
    for (std::size_t c = 0; c < n_classes; ++c) {
      for (std::size_t i = 0; i < x.n_rows; ++i) y[i] = labels[i] == c ? 1 : 0;
      train_binary(x, y, spec, weights_[c], biases_[c]);
    }
  }

  std::vector<std::vector<double>> predict_proba(const FeatureMatrix& f) const override {
    std::vector<std::vector<double>> out;
    out.reserve(f.n_rows);
    for (std::size_t i = 0; i < f.n_rows; ++i) {
      std::vector<double> p(n_classes_);
      double total = 0;
      for (std::size_t c = 0; c < n_classes_; ++c) {
        double z = biases_[c];
        auto r = f.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) z += weights_[c][j] * r[j];
        p[c] = sigmoid(z);
        total += p[c];
      }
      if (total <= 0) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n_classes_));
      } else {
        for (auto& v : p) v /= total;
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  std::size_t n_classes() const override { return n_classes_; }

private:
  static void train_binary(const FeatureMatrix& x, std::span<const int> y,
                           const LogisticRegressionSpec& spec,
                           std::vector<double>& w, double& b) {
    double lr = spec.learning_rate;
    double loss = logistic_loss(w, b, x, y, spec.l2);
    std::vector<double> gw(x.n_cols);
    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
      double gb = 0;
      logistic_grad(w, b, x, y, spec.l2, gw, gb);
      // halve the step until the full-batch loss does not increase
      while (true) {
        std::vector<double> w2(w);
        for (std::size_t j = 0; j < w2.size(); ++j) w2[j] -= lr * gw[j];
        double b2 = b - lr * gb;
        double loss2 = logistic_loss(w2, b2, x, y, spec.l2);
        if (loss2 <= loss || lr < 1e-12) {
          w = std::move(w2);
          b = b2;
          loss = loss2;
          break;
        }
        lr /= 2;
      }
    }
  }

  std::vector<std::vector<double>> weights_;
  std::vector<double> biases_;
  std::size_t n_classes_;
};

}  // namespace

double logistic_loss(std::span<const double> weights, double bias,
                     const FeatureMatrix& x, std::span<const int> y, double l2) {
  double loss = 0;
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    double z = bias;
    auto r = x.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) z += weights[j] * r[j];
    // log(1+exp(-z)) stably, flipped by label
    double margin = y[i] ? z : -z;
    loss += margin > 0 ? std::log1p(std::exp(-margin))
                       : -margin + std::log1p(std::exp(margin));
  }
  loss /= static_cast<double>(x.n_rows);
  double reg = 0;
  for (double w : weights) reg += w * w;
  return loss + 0.5 * l2 * reg;
}

void logistic_grad(std::span<const double> weights, double bias,
                   const FeatureMatrix& x, std::span<const int> y, double l2,
                   std::span<double> grad_w, double& grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0;
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    double z = bias;
    auto r = x.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) z += weights[j] * r[j];
    double err = sigmoid(z) - static_cast<double>(y[i]);
    for (std::size_t j = 0; j < r.size(); ++j) grad_w[j] += err * r[j];
    grad_b += err;
  }
  const double inv_n = 1.0 / static_cast<double>(x.n_rows);
  for (std::size_t j = 0; j < grad_w.size(); ++j)
    grad_w[j] = grad_w[j] * inv_n + l2 * weights[j];
  grad_b *= inv_n;
}

const char* classifier_spec_name(const ClassifierSpec& spec) {
  return std::holds_alternative<DecisionTreeSpec>(spec) ? "DecisionTree"
                                                        : "LogisticRegression";
}

std::vector<std::size_t> Classifier::predict(const FeatureMatrix& features) const {
  auto probs = predict_proba(features);
  std::vector<std::size_t> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    // argmax, ties to the lowest class index
    out[i] = static_cast<std::size_t>(
        std::max_element(probs[i].begin(), probs[i].end()) - probs[i].begin());
  }
  return out;
}

std::unique_ptr<Classifier> fit_classifier(const FeatureMatrix& features,
                                           std::span<const std::size_t> labels,
                                           const ClassifierSpec& spec,
                                           std::uint64_t seed) {
  (void)seed;  // both learners are deterministic
  if (features.n_rows != labels.size())
    throw DataError("fit: feature rows and label count differ");
  if (features.n_rows == 0) throw DataError("fit: empty training set");
  std::size_t n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::size_t distinct = 0;
  {
    std::vector<bool> seen(n_classes, false);
    for (std::size_t l : labels)
      if (!seen[l]) {
        seen[l] = true;
        ++distinct;
      }
  }
  if (distinct < 2) throw DataError("fit: single-class labels");

  if (const auto* tree = std::get_if<DecisionTreeSpec>(&spec))
    return std::make_unique<DecisionTree>(features, labels, *tree, n_classes);
  return std::make_unique<LogisticRegression>(
      features, labels, std::get<LogisticRegressionSpec>(spec), n_classes);
}

std::vector<double> knn_regress(const FeatureMatrix& train_features,
                                std::span<const double> train_targets,
                                const FeatureMatrix& query, std::size_t k) {
  if (train_features.n_rows == 0) throw DataError("knn: empty training set");
  if (k == 0 || k > train_features.n_rows)
    throw DataError("knn: k must be in [1, n_train]");
  if (train_features.n_cols != query.n_cols)
    throw DataError("knn: feature width mismatch");

  std::vector<double> out(query.n_rows);
  std::vector<std::pair<double, std::size_t>> dist(train_features.n_rows);
  for (std::size_t q = 0; q < query.n_rows; ++q) {
    auto qr = query.row(q);
    for (std::size_t i = 0; i < train_features.n_rows; ++i) {
      auto tr = train_features.row(i);
      double d2 = 0;
      for (std::size_t j = 0; j < qr.size(); ++j) {
        double d = qr[j] - tr[j];
        d2 += d * d;
      }
      dist[i] = {d2, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += train_targets[dist[i].second];
    out[q] = sum / static_cast<double>(k);
  }
  return out;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("auc: length mismatch");
  std::size_t n_pos = 0, n_neg = 0;
  for (int l : labels) (l ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) throw DataError("auc: single-class labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // rank-sum with average ranks over tie groups
  double rank_sum_pos = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]]) rank_sum_pos += avg_rank;
    i = j;
  }
  double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1) / 2.0) / (np * nn);
}

double accuracy(std::span<const std::size_t> predicted,
                std::span<const std::size_t> actual) {
  if (predicted.size() != actual.size()) throw DataError("accuracy: length mismatch");
  if (predicted.empty()) throw DataError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == actual[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace synteval
