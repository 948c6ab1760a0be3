#include "synteval/metrics_predictive.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <set>

#include "synteval/rng.hpp"
#include "synteval/transform.hpp"

namespace synteval {

namespace {

std::size_t require_column(const Table& t, const std::string& name) {
  auto j = t.schema().column_index(name);
  if (!j) throw DataError("unknown column '" + name + "'");
  return *j;
}

// strata pick for detection caps: the categorical column with the widest
// category set keeps rare values represented
std::optional<std::string> widest_categorical(const Codebook& schema) {
  std::optional<std::string> best;
  std::size_t best_size = 0;
  for (const auto& col : schema.columns()) {
    if (col.kind == ColumnKind::Categorical && col.categories.size() > best_size) {
      best = col.name;
      best_size = col.categories.size();
    }
  }
  return best;
}

std::size_t majority_class(std::span<const std::size_t> labels, std::size_t n_classes) {
  std::vector<std::size_t> counts(n_classes, 0);
  for (std::size_t l : labels) ++counts[l];
  return static_cast<std::size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace

Table select_columns(const Table& t, const std::vector<std::size_t>& cols) {
  std::vector<ColumnSpec> specs;
  specs.reserve(cols.size());
  for (std::size_t j : cols) specs.push_back(t.schema().column(j));
  Codebook schema(std::move(specs), t.schema().missing_sentinels());
  std::vector<Cell> cells;
  cells.reserve(t.n_rows() * cols.size());
  for (std::size_t i = 0; i < t.n_rows(); ++i)
    for (std::size_t j : cols) cells.push_back(t.at(i, j));
  return Table(std::move(schema), std::move(cells));
}

Table concat_rows(const Table& a, const Table& b) {
  if (!(a.schema() == b.schema())) throw DataError("concat: schemas do not match");
  std::vector<Cell> cells(a.cells());
  cells.insert(cells.end(), b.cells().begin(), b.cells().end());
  return Table(a.schema(), std::move(cells));
}

MetricScore ml_efficacy(const Table& real, const Table& synth, const LooTask& task,
                        std::uint64_t seed, std::size_t max_rows) {
  const std::size_t target = require_column(real, task.target);
  if (real.schema().column(target).kind != ColumnKind::Categorical)
    throw DataError("ml_efficacy: target '" + task.target + "' is not categorical");

  std::vector<std::size_t> feature_only;
  for (std::size_t j = 0; j < real.n_cols(); ++j)
    if (j != target) feature_only.push_back(j);
  // only feature columns are harmonized: intersecting the target would drop
  // exactly the real rows a degenerate synthesizer cannot express and
  // overstate its accuracy
  auto [train, test] = harmonize_categories_on(synth, real, feature_only);
  train = stratified_subsample(train, max_rows, task.target,
                               derive_seed(seed, "efficacy-cap", 0));
  test = stratified_subsample(test, max_rows, task.target,
                              derive_seed(seed, "efficacy-cap", 1));
  train = impute_random(train, derive_seed(seed, "efficacy-impute", 0));
  test = impute_random(test, derive_seed(seed, "efficacy-impute", 1));
  if (train.n_rows() == 0 || test.n_rows() == 0)
    throw DataError("ml_efficacy: no rows after preprocessing");

  const std::vector<std::size_t>& feature_cols = feature_only;

  auto labels_of = [&](const Table& t) {
    std::vector<std::size_t> labels(t.n_rows());
    for (std::size_t i = 0; i < t.n_rows(); ++i) labels[i] = t.at(i, target).category();
    return labels;
  };
  auto train_labels = labels_of(train);
  auto test_labels = labels_of(test);

  const std::string name =
      "MlEfficacy[" + std::string(classifier_spec_name(task.learner)) + "](" +
      task.target + ")";

  std::size_t distinct = std::set<std::size_t>(train_labels.begin(), train_labels.end())
                             .size();
  if (distinct < 2) {
    // majority-class fallback
    std::size_t cls = majority_class(
        train_labels, real.schema().column(target).categories.size());
    std::size_t hits = 0;
    for (std::size_t l : test_labels)
      if (l == cls) ++hits;
    double acc = static_cast<double>(hits) / static_cast<double>(test_labels.size());
    return make_scalar_score(name, MetricGroup::Loo, acc,
                             {"single-class synthetic target; majority fallback"});
  }

  Table train_features = select_columns(train, feature_cols);
  Table test_features = select_columns(test, feature_cols);
  FeatureMatrix ftrain = encode(train_features, train_features);
  FeatureMatrix ftest = encode(test_features, train_features);

  auto model = fit_classifier(ftrain, train_labels, task.learner,
                              derive_seed(seed, "efficacy-fit"));
  auto predictions = model->predict(ftest);
  return make_scalar_score(name, MetricGroup::Loo, accuracy(predictions, test_labels));
}

std::optional<MetricScore> loo_group(const Table& real, const Table& synth,
                                     const std::vector<ClassifierSpec>& learners,
                                     std::uint64_t seed, std::size_t max_rows) {
  std::vector<std::pair<std::string, double>> detail;
  std::vector<std::string> diagnostics;
  for (std::size_t j = 0; j < real.n_cols(); ++j) {
    if (real.schema().column(j).kind != ColumnKind::Categorical) continue;
    for (const auto& learner : learners) {
      LooTask task{real.schema().column(j).name, learner};
      MetricScore s =
          ml_efficacy(real, synth, task, derive_seed(seed, "loo-task", j), max_rows);
      detail.emplace_back(s.name, s.value);
      diagnostics.insert(diagnostics.end(), s.diagnostics.begin(), s.diagnostics.end());
    }
  }
  if (detail.empty()) return std::nullopt;
  return make_score("MlEfficacy", MetricGroup::Loo, std::move(detail),
                    std::move(diagnostics));
}

double detection_t_from_auc(double auc) { return clamp01(2.0 * (1.0 - auc)); }

MetricScore detection_score(const Table& real, const Table& synth, std::uint64_t seed,
                            std::size_t max_rows) {
  auto strata = widest_categorical(real.schema());
  Table r = stratified_subsample(real, max_rows, strata, derive_seed(seed, "det-cap"));
  Table s = stratified_subsample(synth, max_rows, strata, derive_seed(seed, "det-cap"));
  if (r.n_rows() + s.n_rows() < 10)
    throw DataError("detection: fewer than 10 rows total");
  r = impute_random(r, derive_seed(seed, "det-impute"));
  s = impute_random(s, derive_seed(seed, "det-impute"));

  Table pool = concat_rows(r, s);
  FeatureMatrix base = encode(pool, pool);
  // pairwise products give the linear model capacity for cross-column
  // dependence, which a permuted copy breaks
  FeatureMatrix features =
      with_pair_interactions(base, encode_block_widths(pool.schema()));

  const std::size_t n = pool.n_rows();
  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < r.n_rows(); ++i) labels[i] = 1;

  // stratified 5-fold assignment
  constexpr std::size_t kFolds = 5;
  std::vector<std::size_t> fold_of(n);
  {
    Rng rng = make_rng(derive_seed(seed, "det-folds"));
    for (int cls : {1, 0}) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == cls) idx.push_back(i);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t i = 0; i < idx.size(); ++i) fold_of[idx[i]] = i % kFolds;
    }
  }

  std::vector<double> pooled_scores(n, 0.0);
  for (std::size_t f = 0; f < kFolds; ++f) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < n; ++i)
      (fold_of[i] == f ? test_idx : train_idx).push_back(i);
    if (train_idx.empty() || test_idx.empty()) continue;

    auto slice = [&](const std::vector<std::size_t>& idx) {
      FeatureMatrix m;
      m.n_rows = idx.size();
      m.n_cols = features.n_cols;
      m.data.reserve(idx.size() * features.n_cols);
      for (std::size_t i : idx) {
        auto row = features.row(i);
        m.data.insert(m.data.end(), row.begin(), row.end());
      }
      return m;
    };
    FeatureMatrix ftrain = slice(train_idx);
    FeatureMatrix ftest = slice(test_idx);
    std::vector<std::size_t> ytrain(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i)
      ytrain[i] = static_cast<std::size_t>(labels[train_idx[i]]);

    auto model = fit_classifier(ftrain, ytrain, LogisticRegressionSpec{},
                                derive_seed(seed, "det-fit", f));
    auto probs = model->predict_proba(ftest);
    for (std::size_t i = 0; i < test_idx.size(); ++i)
      pooled_scores[test_idx[i]] = probs[i][1];
  }

  double auc = roc_auc(pooled_scores, labels);
  return make_scalar_score("LogisticDetection", MetricGroup::FullJoint,
                           detection_t_from_auc(auc));
}

std::optional<PrivacyTask> default_privacy_task(const Codebook& schema) {
  PrivacyTask task;
  for (const auto& col : schema.columns())
    (col.missing_allowed ? task.sensitive : task.keys).push_back(col.name);
  if (task.sensitive.empty() || task.keys.empty()) return std::nullopt;
  return task;
}

namespace {

// cell fingerprint for exact key matching; Missing is its own token
std::uint64_t cell_token(const Cell& c) {
  switch (c.kind()) {
    case Cell::Kind::Missing: return 0;
    case Cell::Kind::Categorical: return 1 + static_cast<std::uint64_t>(c.category());
    case Cell::Kind::Continuous: {
      std::uint64_t bits;
      double v = c.value();
      static_assert(sizeof bits == sizeof v);
      std::memcpy(&bits, &v, sizeof bits);
      return bits ^ 0x8000000000000000ULL;
    }
  }
  return 0;
}

}  // namespace

std::optional<MetricScore> privacy_cap(const Table& real, const Table& synth,
                                       const PrivacyTask& task, std::uint64_t seed,
                                       std::size_t max_rows) {
  if (task.keys.empty()) throw DataError("privacy_cap: empty key set");
  std::vector<std::size_t> key_cols, sens_cols;
  for (const auto& name : task.keys) key_cols.push_back(require_column(real, name));
  for (const auto& name : task.sensitive) {
    std::size_t j = require_column(real, name);
    if (real.schema().column(j).kind != ColumnKind::Categorical)
      throw DataError("privacy_cap: sensitive column '" + name + "' is not categorical");
    sens_cols.push_back(j);
  }

  const std::optional<std::string> strata = task.sensitive.front();
  Table r = stratified_subsample(real, max_rows, strata, derive_seed(seed, "cap-sub"));
  Table s = stratified_subsample(synth, max_rows, strata, derive_seed(seed, "cap-sub"));

  auto key_of = [&](const Table& t, std::size_t i) {
    std::vector<std::uint64_t> key;
    key.reserve(key_cols.size());
    for (std::size_t j : key_cols) key.push_back(cell_token(t.at(i, j)));
    return key;
  };

  std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < s.n_rows(); ++i) index[key_of(s, i)].push_back(i);

  std::size_t correct = 0, total = 0;
  for (std::size_t i = 0; i < r.n_rows(); ++i) {
    auto it = index.find(key_of(r, i));
    for (std::size_t j : sens_cols) {
      const Cell& truth = r.at(i, j);
      if (truth.is_missing()) continue;  // nothing to attribute
      ++total;
      if (it == index.end()) continue;  // no match counts as incorrect
      const std::size_t n_cats = r.schema().column(j).categories.size();
      std::vector<std::size_t> votes(n_cats, 0);
      for (std::size_t m : it->second) {
        const Cell& v = s.at(m, j);
        if (!v.is_missing()) ++votes[v.category()];
      }
      auto best = std::max_element(votes.begin(), votes.end());
      if (*best == 0) continue;  // matches carry no information
      std::size_t predicted = static_cast<std::size_t>(best - votes.begin());
      if (predicted == truth.category()) ++correct;
    }
  }
  if (total == 0) return std::nullopt;
  double attribution = static_cast<double>(correct) / static_cast<double>(total);
  return make_scalar_score("CategoricalCAP", MetricGroup::Privacy,
                           clamp01(1.0 - attribution));
}

std::optional<MetricScore> privacy_numeric(const Table& real, const Table& synth,
                                           const PrivacyTask& task, std::uint64_t seed,
                                           std::size_t max_rows) {
  if (task.keys.empty()) throw DataError("privacy_numeric: empty key set");
  std::vector<std::size_t> key_cols, sens_cols;
  for (const auto& name : task.keys) key_cols.push_back(require_column(real, name));
  for (const auto& name : task.sensitive) {
    std::size_t j = require_column(real, name);
    if (real.schema().column(j).kind != ColumnKind::Continuous)
      throw DataError("privacy_numeric: sensitive column '" + name +
                      "' is not continuous");
    sens_cols.push_back(j);
  }

  Table r = stratified_subsample(real, max_rows, std::nullopt,
                                 derive_seed(seed, "knn-sub"));
  Table s = stratified_subsample(synth, max_rows, std::nullopt,
                                 derive_seed(seed, "knn-sub"));
  r = impute_random(r, derive_seed(seed, "knn-impute", 0));
  s = impute_random(s, derive_seed(seed, "knn-impute", 1));
  if (s.n_rows() == 0 || r.n_rows() == 0)
    throw DataError("privacy_numeric: empty table");

  Table r_keys = select_columns(r, key_cols);
  Table s_keys = select_columns(s, key_cols);
  FeatureMatrix ftrain = encode(s_keys, s_keys);
  FeatureMatrix fquery = encode(r_keys, s_keys);
  const std::size_t k = std::min<std::size_t>(5, s.n_rows());

  std::vector<std::pair<std::string, double>> detail;
  std::vector<std::string> diagnostics;
  for (std::size_t j : sens_cols) {
    std::vector<double> targets(s.n_rows()), truth(r.n_rows());
    for (std::size_t i = 0; i < s.n_rows(); ++i) targets[i] = s.at(i, j).value();
    for (std::size_t i = 0; i < r.n_rows(); ++i) truth[i] = r.at(i, j).value();
    double lo = *std::min_element(truth.begin(), truth.end());
    double hi = *std::max_element(truth.begin(), truth.end());
    if (hi <= lo) {
      diagnostics.push_back("zero real range in column '" +
                            r.schema().column(j).name + "'");
      continue;
    }
    auto predictions = knn_regress(ftrain, targets, fquery, k);
    double se = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      double d = predictions[i] - truth[i];
      se += d * d;
    }
    double rmse = std::sqrt(se / static_cast<double>(truth.size()));
    double attack_accuracy = clamp01(1.0 - rmse / (hi - lo));
    detail.emplace_back("NumericalKnn(" + r.schema().column(j).name + ")",
                        clamp01(1.0 - attack_accuracy));
  }
  if (detail.empty()) return std::nullopt;
  return make_score("NumericalKnn", MetricGroup::Privacy, std::move(detail),
                    std::move(diagnostics));
}

}  // namespace synteval
