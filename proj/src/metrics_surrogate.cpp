#include "synteval/metrics_surrogate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "synteval/transform.hpp"

namespace synteval {

using pcc::ColumnValue;
using pcc::PccEnsemble;

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw DataError("ecdf: empty sample list");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

namespace {

// exact integral of |segment - diagonal| over [x0, x1], segment linear
double segment_deviation(double x0, double y0, double x1, double y1) {
  if (x1 <= x0) return 0.0;
  const double g0 = y0 - x0;
  const double g1 = y1 - x1;
  const double w = x1 - x0;
  if (g0 == 0.0 && g1 == 0.0) return 0.0;
  if ((g0 >= 0 && g1 >= 0) || (g0 <= 0 && g1 <= 0))
    return std::abs(g0 + g1) / 2.0 * w;
  const double cross = x0 + g0 / (g0 - g1) * w;  // sign change
  return (std::abs(g0) * (cross - x0) + std::abs(g1) * (x1 - cross)) / 2.0;
}

}  // namespace

MetricScore pp_score(const EmpiricalCdf& f_q, const EmpiricalCdf& f_p) {
  std::vector<double> grid;
  grid.reserve(f_q.samples().size() + f_p.samples().size());
  std::merge(f_q.samples().begin(), f_q.samples().end(), f_p.samples().begin(),
             f_p.samples().end(), std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double area = 0;
  double x0 = 0, y0 = 0;
  for (double level : grid) {
    const double x1 = f_q(level);
    const double y1 = f_p(level);
    area += segment_deviation(x0, y0, x1, y1);
    x0 = x1;
    y0 = y1;
  }
  area += segment_deviation(x0, y0, 1.0, 1.0);
  return make_scalar_score("PpScore", MetricGroup::Marginal,
                           clamp01(1.0 - area / 2.0));
}

namespace {

std::vector<ColumnValue> row_values(const Table& t, std::size_t row,
                                    std::size_t skip_col, bool skip) {
  std::vector<ColumnValue> out;
  out.reserve(t.n_cols());
  for (std::size_t j = 0; j < t.n_cols(); ++j) {
    if (skip && j == skip_col) continue;
    const Cell& c = t.at(row, j);
    if (!c.is_missing()) out.push_back({j, c});
  }
  return out;
}

std::optional<double> column_pp(const PccEnsemble& e, const Table& real,
                                const Table& synth, std::size_t col) {
  auto lists = [&](const Table& t) {
    std::vector<double> out;
    out.reserve(t.n_rows());
    for (std::size_t i = 0; i < t.n_rows(); ++i) {
      const Cell& c = t.at(i, col);
      if (c.is_missing()) continue;
      ColumnValue target{col, c};
      out.push_back(e.logp({&target, 1}));
    }
    return out;
  };
  auto lq = lists(synth);
  auto lp = lists(real);
  if (lq.empty() || lp.empty()) return std::nullopt;
  return pp_score(EmpiricalCdf(std::move(lq)), EmpiricalCdf(std::move(lp))).value;
}

}  // namespace

MetricScore pcc_marginal(const PccEnsemble& e, const Table& real, const Table& synth) {
  std::vector<std::pair<std::string, double>> detail;
  std::vector<std::string> diagnostics;
  for (std::size_t j = 0; j < e.n_base_columns(); ++j) {
    auto t = column_pp(e, real, synth, j);
    if (t)
      detail.emplace_back(real.schema().column(j).name, *t);
    else
      diagnostics.push_back("column '" + real.schema().column(j).name +
                            "' skipped: no observed cells");
  }
  return make_score("PccMarginal", MetricGroup::Marginal, std::move(detail),
                    std::move(diagnostics));
}

MetricScore pcc_pairwise(const PccEnsemble& e, const Table& real, const Table& synth,
                         std::uint64_t seed, std::size_t max_rows) {
  if (e.n_base_columns() < 2) throw DataError("pcc_pairwise: needs at least 2 columns");
  const Table r = stratified_subsample(real, max_rows, std::nullopt,
                                       derive_seed(seed, "pcc-pair-sub"));
  const Table s = stratified_subsample(synth, max_rows, std::nullopt,
                                       derive_seed(seed, "pcc-pair-sub"));

  std::vector<std::pair<std::string, double>> detail;
  std::vector<std::string> diagnostics;
  for (std::size_t j = 0; j < e.n_base_columns(); ++j) {
    for (std::size_t k = j + 1; k < e.n_base_columns(); ++k) {
      auto lists = [&](const Table& t) {
        std::vector<double> out;
        for (std::size_t i = 0; i < t.n_rows(); ++i) {
          const Cell& a = t.at(i, j);
          const Cell& b = t.at(i, k);
          if (a.is_missing() || b.is_missing()) continue;
          std::array<ColumnValue, 2> targets{{{j, a}, {k, b}}};
          out.push_back(e.logp(targets));
        }
        return out;
      };
      auto lq = lists(s);
      auto lp = lists(r);
      const std::string pair_name =
          real.schema().column(j).name + ":" + real.schema().column(k).name;
      if (lq.empty() || lp.empty()) {
        diagnostics.push_back("pair '" + pair_name + "' skipped: no complete rows");
        continue;
      }
      detail.emplace_back(
          pair_name,
          pp_score(EmpiricalCdf(std::move(lq)), EmpiricalCdf(std::move(lp))).value);
    }
  }
  return make_score("PccPairwise", MetricGroup::Pairwise, std::move(detail),
                    std::move(diagnostics));
}

MetricScore pcc_loo(const PccEnsemble& e, const Table& real, const Table& synth,
                    std::uint64_t seed, std::size_t max_rows) {
  if (e.n_base_columns() < 2) throw DataError("pcc_loo: needs at least 2 columns");
  const Table r = stratified_subsample(real, max_rows, std::nullopt,
                                       derive_seed(seed, "pcc-loo-sub"));
  const Table s = stratified_subsample(synth, max_rows, std::nullopt,
                                       derive_seed(seed, "pcc-loo-sub"));

  std::vector<std::pair<std::string, double>> detail;
  std::vector<std::string> diagnostics;
  for (std::size_t j = 0; j < e.n_base_columns(); ++j) {
    auto lists = [&](const Table& t) {
      std::vector<double> out;
      for (std::size_t i = 0; i < t.n_rows(); ++i) {
        const Cell& c = t.at(i, j);
        if (c.is_missing()) continue;
        ColumnValue target{j, c};
        auto conditions = row_values(t, i, j, true);
        out.push_back(e.logp({&target, 1}, conditions));
      }
      return out;
    };
    auto lq = lists(s);
    auto lp = lists(r);
    if (lq.empty() || lp.empty()) {
      diagnostics.push_back("column '" + real.schema().column(j).name +
                            "' skipped: no observed cells");
      continue;
    }
    detail.emplace_back(
        real.schema().column(j).name,
        pp_score(EmpiricalCdf(std::move(lq)), EmpiricalCdf(std::move(lp))).value);
  }
  return make_score("PccLoo", MetricGroup::Loo, std::move(detail),
                    std::move(diagnostics));
}

MetricScore pcc_fulljoint(const PccEnsemble& e, const Table& real, const Table& synth) {
  auto lists = [&](const Table& t) {
    std::vector<double> out;
    out.reserve(t.n_rows());
    for (std::size_t i = 0; i < t.n_rows(); ++i) {
      auto targets = row_values(t, i, 0, false);
      if (targets.empty()) continue;
      out.push_back(e.logp(targets));
    }
    return out;
  };
  auto lq = lists(synth);
  auto lp = lists(real);
  if (lq.empty() || lp.empty())
    throw DataError("pcc_fulljoint: a table has no observed rows");
  MetricScore pp = pp_score(EmpiricalCdf(std::move(lq)), EmpiricalCdf(std::move(lp)));
  return make_scalar_score("PccFullJoint", MetricGroup::FullJoint, pp.value);
}

}  // namespace synteval
