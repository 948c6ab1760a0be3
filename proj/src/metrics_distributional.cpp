#include "synteval/metrics_distributional.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "synteval/rng.hpp"
#include "synteval/transform.hpp"

namespace synteval {

namespace {

constexpr double kEps = 1e-12;

const std::string& col_name(const Table& t, std::size_t j) {
  return t.schema().column(j).name;
}

void require_kind(const Table& t, std::size_t col, ColumnKind kind, const char* op) {
  if (t.schema().column(col).kind != kind)
    throw DataError(std::string(op) + ": column '" + col_name(t, col) +
                    "' has the wrong kind");
}

std::map<std::size_t, double> category_pmf(const Table& t, std::size_t col) {
  std::map<std::size_t, double> pmf;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.n_rows(); ++i) {
    const Cell& c = t.at(i, col);
    if (c.is_missing()) continue;
    ++pmf[c.category()];
    ++n;
  }
  if (n == 0)
    throw DataError("metric: column '" + col_name(t, col) +
                    "' is empty after excluding missing values");
  for (auto& [_, v] : pmf) v /= static_cast<double>(n);
  return pmf;
}

double total_variation(const std::map<std::size_t, double>& p,
                       const std::map<std::size_t, double>& q) {
  double tv = 0;
  for (const auto& [k, v] : p) {
    auto it = q.find(k);
    tv += std::abs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q)
    if (!p.count(k)) tv += v;
  return tv / 2.0;
}

double mean_of(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (!std::is_sorted(v.begin(), v.end())) std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double std_of(std::span<const double> v) {
  double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// equal-frequency discretization to at most 8 bins
std::vector<std::size_t> discretize(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> bins(values.size());
  if (sorted.size() <= 8) {
    for (std::size_t i = 0; i < values.size(); ++i)
      bins[i] = static_cast<std::size_t>(
          std::lower_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin());
    return bins;
  }
  const std::size_t k = 8;
  std::vector<double> all(values.begin(), values.end());
  std::sort(all.begin(), all.end());
  std::vector<double> edges;
  for (std::size_t b = 1; b < k; ++b) edges.push_back(all[all.size() * b / k]);
  for (std::size_t i = 0; i < values.size(); ++i)
    bins[i] = static_cast<std::size_t>(
        std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
  return bins;
}

// labels of the pairwise-complete rows of one column pair
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> paired_labels(
    const Table& t, std::size_t col_a, std::size_t col_b) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < t.n_rows(); ++i)
    if (!t.at(i, col_a).is_missing() && !t.at(i, col_b).is_missing()) rows.push_back(i);

  auto labels_of = [&](std::size_t col) {
    std::vector<std::size_t> out(rows.size());
    if (t.schema().column(col).kind == ColumnKind::Categorical) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        out[i] = t.at(rows[i], col).category();
    } else {
      std::vector<double> vals(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) vals[i] = t.at(rows[i], col).value();
      out = discretize(vals);
    }
    return out;
  };
  return {labels_of(col_a), labels_of(col_b)};
}

double plugin_mi(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  std::map<std::size_t, double> ma, mb;
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ma[a[i]];
    ++mb[b[i]];
  }
  double mi = 0;
  for (const auto& [key, count] : joint) {
    double pxy = count / n;
    double px = ma[key.first] / n;
    double py = mb[key.second] / n;
    mi += pxy * std::log(pxy / (px * py));
  }
  return std::max(mi, 0.0);
}

std::vector<double> missing_indicator(const Table& t, std::size_t col) {
  std::vector<double> out(t.n_rows());
  for (std::size_t i = 0; i < t.n_rows(); ++i)
    out[i] = t.at(i, col).is_missing() ? 1.0 : 0.0;
  return out;
}

bool is_constant(std::span<const double> v) {
  for (double x : v)
    if (x != v.front()) return false;
  return true;
}

std::vector<std::size_t> columns_with_missing(const Table& t) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < t.n_cols(); ++j)
    if (missing_count(t, j) > 0) out.push_back(j);
  return out;
}

}  // namespace

const char* stat_kind_name(StatKind k) {
  switch (k) {
    case StatKind::Mean: return "MeanSimilarity";
    case StatKind::Median: return "MedianSimilarity";
    case StatKind::Std: return "StdSimilarity";
    case StatKind::RangeCoverage: return "RangeCoverage";
    case StatKind::BoundaryAdherence: return "BoundaryAdherence";
    case StatKind::CategoryCoverage: return "CategoryCoverage";
  }
  return "?";
}

MetricScore tv_complement(const Table& real, const Table& synth, std::size_t col) {
  require_kind(real, col, ColumnKind::Categorical, "tv_complement");
  require_kind(synth, col, ColumnKind::Categorical, "tv_complement");
  double t = 1.0 - total_variation(category_pmf(real, col), category_pmf(synth, col));
  return make_scalar_score("TVComplement(" + col_name(real, col) + ")",
                           MetricGroup::Marginal, clamp01(t));
}

MetricScore ks_complement(const Table& real, const Table& synth, std::size_t col) {
  require_kind(real, col, ColumnKind::Continuous, "ks_complement");
  require_kind(synth, col, ColumnKind::Continuous, "ks_complement");
  auto a = observed_values(real, col);
  auto b = observed_values(synth, col);
  if (a.empty() || b.empty())
    throw DataError("ks_complement: empty column '" + col_name(real, col) + "'");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  double ks = 0;
  std::size_t i = 0, j = 0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) / na -
                               static_cast<double>(j) / nb));
  }
  // remaining tail of either sample only widens toward 1 monotonically
  ks = std::max(ks, std::abs(1.0 - static_cast<double>(j) / nb));
  ks = std::max(ks, std::abs(static_cast<double>(i) / na - 1.0));
  return make_scalar_score("KSComplement(" + col_name(real, col) + ")",
                           MetricGroup::Marginal, clamp01(1.0 - ks));
}

MetricScore stat_similarity(StatKind kind, const Table& real, const Table& synth,
                            std::size_t col) {
  const std::string name =
      std::string(stat_kind_name(kind)) + "(" + col_name(real, col) + ")";

  if (kind == StatKind::CategoryCoverage) {
    require_kind(real, col, ColumnKind::Categorical, "stat_similarity");
    require_kind(synth, col, ColumnKind::Categorical, "stat_similarity");
    auto ra = observed_categories(real, col);
    if (ra.empty())
      throw DataError("stat_similarity: empty column '" + col_name(real, col) + "'");
    auto sa = observed_categories(synth, col);
    std::set<std::size_t> rs(ra.begin(), ra.end()), ss(sa.begin(), sa.end());
    std::size_t hit = 0;
    for (std::size_t c : rs)
      if (ss.count(c)) ++hit;
    return make_scalar_score(
        name, MetricGroup::Marginal,
        static_cast<double>(hit) / static_cast<double>(rs.size()));
  }

  require_kind(real, col, ColumnKind::Continuous, "stat_similarity");
  require_kind(synth, col, ColumnKind::Continuous, "stat_similarity");
  auto r = observed_values(real, col);
  auto s = observed_values(synth, col);
  if (r.empty() || s.empty())
    throw DataError("stat_similarity: empty column '" + col_name(real, col) + "'");
  // sorting makes the statistics invariant to row order, so permuted
  // columns score exactly like identical ones
  std::sort(r.begin(), r.end());
  std::sort(s.begin(), s.end());
  const double r_lo = *std::min_element(r.begin(), r.end());
  const double r_hi = *std::max_element(r.begin(), r.end());
  const double r_range = r_hi - r_lo;

  double t = 0;
  switch (kind) {
    case StatKind::Mean:
      t = 1.0 - std::abs(mean_of(s) - mean_of(r)) / std::max(r_range, kEps);
      break;
    case StatKind::Median:
      t = 1.0 - std::abs(median_of(s) - median_of(r)) / std::max(r_range, kEps);
      break;
    case StatKind::Std:
      t = 1.0 - std::abs(std_of(s) - std_of(r)) / std::max(std_of(r), kEps);
      break;
    case StatKind::RangeCoverage: {
      const double s_lo = *std::min_element(s.begin(), s.end());
      const double s_hi = *std::max_element(s.begin(), s.end());
      if (r_range <= 0) {
        t = (s_lo <= r_lo && r_lo <= s_hi) ? 1.0 : 0.0;
      } else {
        double overlap = std::min(r_hi, s_hi) - std::max(r_lo, s_lo);
        t = std::max(overlap, 0.0) / r_range;
      }
      break;
    }
    case StatKind::BoundaryAdherence: {
      std::size_t inside = 0;
      for (double v : s)
        if (v >= r_lo && v <= r_hi) ++inside;
      t = static_cast<double>(inside) / static_cast<double>(s.size());
      break;
    }
    default:
      throw DataError("stat_similarity: unhandled kind");
  }
  return make_scalar_score(name, MetricGroup::Marginal, clamp01(t));
}

MetricScore contingency_similarity(const Table& real, const Table& synth,
                                   std::size_t col_a, std::size_t col_b) {
  for (const Table* t : {&real, &synth}) {
    require_kind(*t, col_a, ColumnKind::Categorical, "contingency_similarity");
    require_kind(*t, col_b, ColumnKind::Categorical, "contingency_similarity");
  }
  auto joint_pmf = [&](const Table& t) {
    std::map<std::size_t, double> pmf;  // key = a * width + b
    std::size_t width = t.schema().column(col_b).categories.size();
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.n_rows(); ++i) {
      const Cell& a = t.at(i, col_a);
      const Cell& b = t.at(i, col_b);
      if (a.is_missing() || b.is_missing()) continue;
      ++pmf[a.category() * width + b.category()];
      ++n;
    }
    if (n == 0)
      throw DataError("contingency_similarity: no complete rows for pair '" +
                      col_name(t, col_a) + ":" + col_name(t, col_b) + "'");
    for (auto& [_, v] : pmf) v /= static_cast<double>(n);
    return pmf;
  };
  double t = 1.0 - total_variation(joint_pmf(real), joint_pmf(synth));
  return make_scalar_score("ContingencySimilarity(" + col_name(real, col_a) + ":" +
                               col_name(real, col_b) + ")",
                           MetricGroup::Pairwise, clamp01(t));
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw DataError("pearson: need two equal-length samples of size >= 2");
  double ma = mean_of(a), mb = mean_of(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0 || sbb <= 0) throw DataError("pearson: zero variance");
  return sab / std::sqrt(saa * sbb);
}

std::optional<MetricScore> correlation_similarity(const Table& real, const Table& synth,
                                                  std::size_t col_a, std::size_t col_b) {
  for (const Table* t : {&real, &synth}) {
    require_kind(*t, col_a, ColumnKind::Continuous, "correlation_similarity");
    require_kind(*t, col_b, ColumnKind::Continuous, "correlation_similarity");
  }
  auto paired = [&](const Table& t) {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (std::size_t i = 0; i < t.n_rows(); ++i) {
      const Cell& a = t.at(i, col_a);
      const Cell& b = t.at(i, col_b);
      if (a.is_missing() || b.is_missing()) continue;
      out.first.push_back(a.value());
      out.second.push_back(b.value());
    }
    return out;
  };
  auto [ra, rb] = paired(real);
  auto [sa, sb] = paired(synth);
  if (ra.size() < 2 || sa.size() < 2)
    throw DataError("correlation_similarity: fewer than 2 complete rows");
  if (is_constant(ra) || is_constant(rb) || is_constant(sa) || is_constant(sb))
    return std::nullopt;  // zero-variance guard

  double rho_r = pearson_correlation(ra, rb);
  double rho_s = pearson_correlation(sa, sb);
  double t = 1.0 - std::abs(rho_s - rho_r) / 2.0;
  return make_scalar_score("CorrelationSimilarity(" + col_name(real, col_a) + ":" +
                               col_name(real, col_b) + ")",
                           MetricGroup::Pairwise, clamp01(t));
}

double mi_estimate(const Table& t, std::size_t col_a, std::size_t col_b) {
  auto [a, b] = paired_labels(t, col_a, col_b);
  if (a.size() < 2)
    throw DataError("mi_estimate: fewer than 2 complete rows for pair '" +
                    col_name(t, col_a) + ":" + col_name(t, col_b) + "'");
  return plugin_mi(a, b);
}

MetricScore mutual_information_similarity(const Table& real, const Table& synth,
                                          std::uint64_t seed, std::size_t max_rows) {
  if (real.n_cols() < 2)
    throw DataError("mutual_information_similarity: needs at least 2 columns");
  // the same sub-seed on both tables keeps identical inputs identical
  const Table r = stratified_subsample(real, max_rows, std::nullopt,
                                       derive_seed(seed, "mi-sub", 0));
  const Table s = stratified_subsample(synth, max_rows, std::nullopt,
                                       derive_seed(seed, "mi-sub", 0));

  const std::size_t m = r.n_cols();
  auto matrix_of = [&](const Table& t) {
    std::vector<double> mat(m * m, 0.0);
    double sum = 0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        double mi = mi_estimate(t, j, k);
        mat[j * m + k] = mi;
        mat[k * m + j] = mi;
        sum += 2 * mi;
      }
    }
    if (sum > 0)
      for (auto& v : mat) v /= sum;
    return mat;
  };
  auto mr = matrix_of(r);
  auto ms = matrix_of(s);
  double l1 = 0;
  for (std::size_t i = 0; i < mr.size(); ++i) l1 += std::abs(ms[i] - mr[i]);
  return make_scalar_score("MutualInformationSimilarity", MetricGroup::Pairwise,
                           clamp01(1.0 - l1 / 2.0));
}

MetricScore missing_value_similarity(const Table& real, const Table& synth,
                                     std::size_t col) {
  auto frac = [col](const Table& t) {
    if (t.n_rows() == 0) return 0.0;
    return static_cast<double>(missing_count(t, col)) /
           static_cast<double>(t.n_rows());
  };
  double t = 1.0 - std::abs(frac(synth) - frac(real));
  const char* suffix =
      real.schema().column(col).kind == ColumnKind::Categorical ? "Cat" : "Num";
  return make_scalar_score("MissingValueSimilarity" + std::string(suffix) + "(" +
                               col_name(real, col) + ")",
                           MetricGroup::Missingness, clamp01(t));
}

std::optional<MetricScore> mnar_similarity(const Table& real, const Table& synth) {
  auto cols = columns_with_missing(real);
  if (cols.size() < 2) return std::nullopt;

  std::vector<std::string> diagnostics;
  auto corr = [&](const Table& t, std::size_t a, std::size_t b) {
    auto ia = missing_indicator(t, a);
    auto ib = missing_indicator(t, b);
    if (is_constant(ia) || is_constant(ib)) return 0.0;  // convention
    return pearson_correlation(ia, ib);
  };

  double sum_abs = 0;
  std::size_t n_pairs = 0;
  for (std::size_t x = 0; x < cols.size(); ++x) {
    for (std::size_t y = x + 1; y < cols.size(); ++y) {
      double cr = corr(real, cols[x], cols[y]);
      double cs = corr(synth, cols[x], cols[y]);
      sum_abs += std::abs(cs - cr);
      ++n_pairs;
    }
  }
  // each pair can differ by at most 2; the normalizer doubles that again
  double z = 2.0 * static_cast<double>(n_pairs) * 2.0;
  return make_scalar_score("MissingNotAtRandomSimilarity", MetricGroup::Missingness,
                           clamp01(1.0 - sum_abs / z), std::move(diagnostics));
}

std::optional<MetricScore> covariate_dependent_missing_similarity(const Table& real,
                                                                  const Table& synth) {
  auto miss_cols = columns_with_missing(real);
  std::vector<std::size_t> full_cols;
  for (std::size_t j = 0; j < real.n_cols(); ++j)
    if (missing_count(real, j) == 0) full_cols.push_back(j);
  if (miss_cols.empty() || full_cols.empty()) return std::nullopt;

  std::vector<std::string> diagnostics;

  // association between one missingness indicator and one covariate
  auto entry = [&](const Table& t, std::size_t mc, std::size_t fc) -> double {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < t.n_rows(); ++i)
      if (!t.at(i, fc).is_missing()) rows.push_back(i);
    if (rows.size() < 2) return 0.0;

    std::vector<double> ind(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      ind[i] = t.at(rows[i], mc).is_missing() ? 1.0 : 0.0;

    if (t.schema().column(fc).kind == ColumnKind::Continuous) {
      std::vector<double> cov(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) cov[i] = t.at(rows[i], fc).value();
      if (is_constant(ind) || is_constant(cov)) {
        diagnostics.push_back("constant pair " + col_name(t, mc) + ":" +
                              col_name(t, fc));
        return 0.0;
      }
      return pearson_correlation(ind, cov) / 2.0;  // scaled so |entry| <= 1
    }
    std::vector<std::size_t> bi(rows.size()), cat(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      bi[i] = t.at(rows[i], mc).is_missing() ? 1 : 0;
      cat[i] = t.at(rows[i], fc).category();
    }
    return cramers_v(bi, cat);
  };

  double sum_abs = 0;
  std::size_t n_entries = 0;
  for (std::size_t mc : miss_cols) {
    for (std::size_t fc : full_cols) {
      sum_abs += std::abs(entry(synth, mc, fc) - entry(real, mc, fc));
      ++n_entries;
    }
  }
  return make_scalar_score("CovariateDependentMissingSimilarity",
                           MetricGroup::Missingness,
                           clamp01(1.0 - sum_abs / static_cast<double>(n_entries)),
                           std::move(diagnostics));
}

double cramers_v(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw DataError("cramers_v: need two equal-length samples of size >= 2");
  std::set<std::size_t> va(a.begin(), a.end()), vb(b.begin(), b.end());
  if (va.size() < 2 || vb.size() < 2) return 0.0;  // constant column convention

  std::map<std::size_t, std::size_t> ia, ib;
  for (std::size_t v : va) ia.emplace(v, ia.size());
  for (std::size_t v : vb) ib.emplace(v, ib.size());
  const std::size_t r = va.size(), c = vb.size();
  std::vector<double> counts(r * c, 0.0), row_tot(r, 0.0), col_tot(c, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t x = ia[a[i]], y = ib[b[i]];
    counts[x * c + y] += 1;
    row_tot[x] += 1;
    col_tot[y] += 1;
  }
  const double n = static_cast<double>(a.size());
  double chi2 = 0;
  for (std::size_t x = 0; x < r; ++x) {
    for (std::size_t y = 0; y < c; ++y) {
      double expected = row_tot[x] * col_tot[y] / n;
      if (expected > 0) {
        double d = counts[x * c + y] - expected;
        chi2 += d * d / expected;
      }
    }
  }
  return std::sqrt(chi2 / (n * static_cast<double>(std::min(r, c) - 1)));
}

}  // namespace synteval
