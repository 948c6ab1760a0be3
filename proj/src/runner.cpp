#include "synteval/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>

#include "synteval/baselines.hpp"
#include "synteval/csv.hpp"
#include "synteval/metrics_distributional.hpp"
#include "synteval/metrics_surrogate.hpp"
#include "synteval/rng.hpp"
#include "synteval/version.hpp"

namespace synteval {

namespace {

// columns of each kind, in schema order
std::vector<std::size_t> cols_of_kind(const Codebook& schema, ColumnKind kind) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < schema.n_cols(); ++j)
    if (schema.column(j).kind == kind) out.push_back(j);
  return out;
}

// fold per-column scores into one named metric with per-column detail
void push_columnwise(std::vector<MetricScore>& out, std::string name,
                     MetricGroup group,
                     std::vector<std::pair<std::string, double>> detail,
                     std::vector<std::string> diagnostics = {}) {
  if (detail.empty()) return;
  out.push_back(
      make_score(std::move(name), group, std::move(detail), std::move(diagnostics)));
}

void compute_missingness(std::vector<MetricScore>& out, const Table& real,
                         const Table& synth) {
  std::vector<std::pair<std::string, double>> cat_detail, num_detail;
  for (std::size_t j = 0; j < real.n_cols(); ++j) {
    const auto& spec = real.schema().column(j);
    if (!spec.missing_allowed) continue;
    MetricScore s = missing_value_similarity(real, synth, j);
    (spec.kind == ColumnKind::Categorical ? cat_detail : num_detail)
        .emplace_back(spec.name, s.value);
  }
  push_columnwise(out, "MissingValueSimilarityCat", MetricGroup::Missingness,
                  std::move(cat_detail));
  push_columnwise(out, "MissingValueSimilarityNum", MetricGroup::Missingness,
                  std::move(num_detail));
  if (auto s = mnar_similarity(real, synth)) out.push_back(std::move(*s));
  if (auto s = covariate_dependent_missing_similarity(real, synth))
    out.push_back(std::move(*s));
}

void compute_marginal(std::vector<MetricScore>& out, const Table& real,
                      const Table& synth) {
  auto cat_cols = cols_of_kind(real.schema(), ColumnKind::Categorical);
  auto num_cols = cols_of_kind(real.schema(), ColumnKind::Continuous);

  std::vector<std::pair<std::string, double>> tv, coverage;
  for (std::size_t j : cat_cols) {
    tv.emplace_back(real.schema().column(j).name, tv_complement(real, synth, j).value);
    coverage.emplace_back(
        real.schema().column(j).name,
        stat_similarity(StatKind::CategoryCoverage, real, synth, j).value);
  }
  push_columnwise(out, "TVComplement", MetricGroup::Marginal, std::move(tv));
  push_columnwise(out, "CategoryCoverage", MetricGroup::Marginal, std::move(coverage));

  std::vector<std::pair<std::string, double>> ks;
  for (std::size_t j : num_cols)
    ks.emplace_back(real.schema().column(j).name, ks_complement(real, synth, j).value);
  push_columnwise(out, "KSComplement", MetricGroup::Marginal, std::move(ks));

  for (StatKind kind : {StatKind::Mean, StatKind::Median, StatKind::Std,
                        StatKind::RangeCoverage, StatKind::BoundaryAdherence}) {
    std::vector<std::pair<std::string, double>> detail;
    for (std::size_t j : num_cols)
      detail.emplace_back(real.schema().column(j).name,
                          stat_similarity(kind, real, synth, j).value);
    push_columnwise(out, stat_kind_name(kind), MetricGroup::Marginal,
                    std::move(detail));
  }
}

void compute_pairwise(std::vector<MetricScore>& out, const Table& real,
                      const Table& synth, const EvalConfig& cfg, std::uint64_t seed) {
  auto cat_cols = cols_of_kind(real.schema(), ColumnKind::Categorical);
  auto num_cols = cols_of_kind(real.schema(), ColumnKind::Continuous);

  std::vector<std::pair<std::string, double>> contingency;
  for (std::size_t a = 0; a < cat_cols.size(); ++a)
    for (std::size_t b = a + 1; b < cat_cols.size(); ++b) {
      MetricScore s = contingency_similarity(real, synth, cat_cols[a], cat_cols[b]);
      contingency.emplace_back(real.schema().column(cat_cols[a]).name + ":" +
                                   real.schema().column(cat_cols[b]).name,
                               s.value);
    }
  push_columnwise(out, "ContingencySimilarity", MetricGroup::Pairwise,
                  std::move(contingency));

  std::vector<std::pair<std::string, double>> correlation;
  std::vector<std::string> corr_diag;
  for (std::size_t a = 0; a < num_cols.size(); ++a)
    for (std::size_t b = a + 1; b < num_cols.size(); ++b) {
      const std::string pair_name = real.schema().column(num_cols[a]).name + ":" +
                                    real.schema().column(num_cols[b]).name;
      auto s = correlation_similarity(real, synth, num_cols[a], num_cols[b]);
      if (s)
        correlation.emplace_back(pair_name, s->value);
      else
        corr_diag.push_back("pair '" + pair_name + "' skipped: constant column");
    }
  push_columnwise(out, "CorrelationSimilarity", MetricGroup::Pairwise,
                  std::move(correlation), std::move(corr_diag));

  if (real.n_cols() >= 2)
    out.push_back(mutual_information_similarity(real, synth, seed, cfg.caps.mi_rows));
}

void compute_privacy(std::vector<MetricScore>& out, const Table& real,
                     const Table& synth, const EvalConfig& cfg, std::uint64_t seed) {
  std::optional<PrivacyTask> task = cfg.privacy_task;
  if (!task) task = default_privacy_task(real.schema());
  if (!task) return;

  PrivacyTask cat_task{{}, task->keys}, num_task{{}, task->keys};
  for (const auto& name : task->sensitive) {
    auto j = real.schema().column_index(name);
    if (!j) throw DataError("privacy: unknown sensitive column '" + name + "'");
    (real.schema().column(*j).kind == ColumnKind::Categorical ? cat_task : num_task)
        .sensitive.push_back(name);
  }
  if (!cat_task.sensitive.empty())
    if (auto s = privacy_cap(real, synth, cat_task, derive_seed(seed, "privacy-cap"),
                             cfg.caps.privacy_rows))
      out.push_back(std::move(*s));
  if (!num_task.sensitive.empty())
    if (auto s = privacy_numeric(real, synth, num_task,
                                 derive_seed(seed, "privacy-knn"),
                                 cfg.caps.privacy_rows))
      out.push_back(std::move(*s));
}

}  // namespace

std::vector<MetricScore> compute_metrics(const Table& real, const Table& synth,
                                         const EvalConfig& cfg, std::uint64_t seed,
                                         const pcc::PccEnsemble* ensemble) {
  if (!(real.schema() == synth.schema()))
    throw DataError("evaluation: real and synthetic schemas do not match");
  std::vector<MetricScore> out;

  if (cfg.missingness) compute_missingness(out, real, synth);

  if (cfg.marginal) {
    compute_marginal(out, real, synth);
    if (ensemble) out.push_back(pcc_marginal(*ensemble, real, synth));
  }

  if (cfg.pairwise) {
    compute_pairwise(out, real, synth, cfg, derive_seed(seed, "pairwise"));
    if (ensemble && real.n_cols() >= 2)
      out.push_back(pcc_pairwise(*ensemble, real, synth, derive_seed(seed, "pcc-pair"),
                                 cfg.caps.mi_rows));
  }

  if (cfg.loo) {
    if (auto s = loo_group(real, synth, cfg.loo_learners, derive_seed(seed, "loo"),
                           cfg.caps.efficacy_rows))
      out.push_back(std::move(*s));
    if (ensemble && real.n_cols() >= 2)
      out.push_back(pcc_loo(*ensemble, real, synth, derive_seed(seed, "pcc-loo"),
                            cfg.caps.mi_rows));
  }

  if (cfg.full_joint) {
    out.push_back(detection_score(real, synth, derive_seed(seed, "detection"),
                                  cfg.caps.detection_rows));
    if (ensemble) out.push_back(pcc_fulljoint(*ensemble, real, synth));
  }

  if (cfg.privacy) compute_privacy(out, real, synth, cfg, seed);
  return out;
}

namespace {

struct MetricStream {
  MetricGroup group;
  std::vector<double> values;
  std::vector<std::pair<std::string, double>> detail;  // first replication
  std::vector<std::string> diagnostics;
};

using Streams = std::vector<std::pair<std::string, MetricStream>>;

void absorb(Streams& streams, const std::vector<MetricScore>& scores) {
  for (const auto& s : scores) {
    auto it = std::find_if(streams.begin(), streams.end(),
                           [&](const auto& p) { return p.first == s.name; });
    if (it == streams.end()) {
      streams.emplace_back(s.name, MetricStream{s.group, {}, s.detail, {}});
      it = streams.end() - 1;
    }
    it->second.values.push_back(s.value);
    for (const auto& d : s.diagnostics) {
      auto& diag = it->second.diagnostics;
      if (std::find(diag.begin(), diag.end(), d) == diag.end()) diag.push_back(d);
    }
  }
}

MetricAggregate aggregate_metric(const std::string& name, const MetricStream& stream) {
  MetricAggregate m;
  m.name = name;
  m.group = stream.group;
  m.per_replication = stream.values;
  m.detail = stream.detail;
  m.diagnostics = stream.diagnostics;
  const double n = static_cast<double>(stream.values.size());
  double sum = 0;
  for (double v : stream.values) sum += v;
  m.mean = sum / n;
  if (stream.values.size() > 1) {
    double ss = 0;
    for (double v : stream.values) ss += (v - m.mean) * (v - m.mean);
    m.stderr_ = std::sqrt(ss / (n - 1) / n);
  }
  return m;
}

SynthesizerReport aggregate_synth(const std::string& name, const Streams& streams) {
  SynthesizerReport report;
  report.name = name;
  for (MetricGroup g : {MetricGroup::Missingness, MetricGroup::Marginal,
                        MetricGroup::Pairwise, MetricGroup::Loo, MetricGroup::FullJoint,
                        MetricGroup::Privacy}) {
    GroupScore gs;
    gs.group = g;
    for (const auto& [metric_name, stream] : streams)
      if (stream.group == g) gs.metrics.push_back(aggregate_metric(metric_name, stream));
    if (gs.metrics.empty()) continue;
    double mean = 0, var = 0;
    for (const auto& m : gs.metrics) {
      mean += m.mean;
      var += m.stderr_ * m.stderr_;
    }
    const double k = static_cast<double>(gs.metrics.size());
    gs.mean = mean / k;
    // independence convention: variance of the mean = mean of variances / k
    gs.stderr_ = std::sqrt(var / k / k);
    if (g == MetricGroup::Privacy)
      report.privacy = std::move(gs);
    else
      report.structural.push_back(std::move(gs));
  }
  return report;
}

std::string iso_timestamp_utc() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

EvaluationReport run_evaluation(const EvalConfig& cfg, const Table& real,
                                const std::vector<std::pair<std::string, Table>>& synths,
                                const pcc::PccEnsemble* ensemble) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  EvaluationReport report;
  report.tool_version = kVersion;
  report.created_at = iso_timestamp_utc();
  report.seed = cfg.seed;
  report.replications = cfg.replications;

  auto rep_seed = [&](std::size_t r) { return derive_seed(cfg.seed, "replication", r); };

  for (const auto& [name, synth] : synths) {
    Streams streams;
    for (std::size_t r = 0; r < cfg.replications; ++r)
      absorb(streams, compute_metrics(real, synth, cfg, rep_seed(r), ensemble));
    report.synthesizers.push_back(aggregate_synth(name, streams));
  }

  if (cfg.baselines) {
    Streams self_streams, perm_streams, half_streams;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      const std::uint64_t seed_r = rep_seed(r);
      BaselinePair self = baseline_self(real);
      absorb(self_streams,
             compute_metrics(self.real, self.synth, cfg, seed_r, ensemble));
      BaselinePair perm = baseline_perm(real, derive_seed(seed_r, "baseline-perm"));
      absorb(perm_streams,
             compute_metrics(perm.real, perm.synth, cfg, seed_r, ensemble));
      BaselinePair half = baseline_half(real, derive_seed(seed_r, "baseline-half"));
      absorb(half_streams,
             compute_metrics(half.real, half.synth, cfg, seed_r, ensemble));
    }
    report.baselines.push_back(aggregate_synth("SELF", self_streams));
    report.baselines.push_back(aggregate_synth("PERM", perm_streams));
    report.baselines.push_back(aggregate_synth("HALF", half_streams));

    const auto& half_trace = report.baselines.back().structural;
    auto try_quality = [&](SynthesizerReport& s) {
      try {
        s.quality = quality_score(s.structural, half_trace);
      } catch (const DataError&) {
        // group sets can differ when a half loses a degenerate metric;
        // quality is then left unset rather than failing the run
      }
    };
    for (auto& s : report.synthesizers) try_quality(s);
    for (auto& s : report.baselines) try_quality(s);
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

EvaluationReport run_evaluation(const EvalConfig& cfg) {
  cfg.validate();
  if (cfg.real_path.empty() || cfg.codebook_path.empty())
    throw DataError("evaluation: real_path and codebook_path are required");
  Codebook codebook = Codebook::from_json_file(cfg.codebook_path);
  Table real = load_csv(cfg.real_path, codebook);
  std::vector<std::pair<std::string, Table>> synths;
  for (const auto& [name, path] : cfg.synth_paths)
    synths.emplace_back(name, load_csv(path, codebook));

  std::optional<pcc::PccEnsemble> ensemble;
  if (cfg.pcc_state_path) ensemble = pcc::PccEnsemble::load(*cfg.pcc_state_path);
  return run_evaluation(cfg, real, synths, ensemble ? &*ensemble : nullptr);
}

}  // namespace synteval
