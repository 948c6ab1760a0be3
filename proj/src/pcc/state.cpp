#include "synteval/pcc/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "synteval/pcc/crp.hpp"

namespace synteval::pcc {

namespace {

double log_sum_exp(std::span<const double> logs) {
  double mx = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(mx)) return mx;
  double total = 0;
  for (double l : logs) total += std::exp(l - mx);
  return mx + std::log(total);
}

std::size_t sample_from_log_weights(std::span<const double> logw, Rng& rng) {
  double norm = log_sum_exp(logw);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  double acc = 0;
  for (std::size_t k = 0; k < logw.size(); ++k) {
    acc += std::exp(logw[k] - norm);
    if (u < acc) return k;
  }
  return logw.size() - 1;
}

}  // namespace

PccState::PccState(std::shared_ptr<const PccData> data, PccPriorConfig prior,
                   std::uint64_t seed)
    : data_(std::move(data)), prior_(prior), rng_(make_rng(seed)) {
  n_rows_ = data_->n_rows;
  const std::size_t m = data_->columns.size();
  view_of_col_.resize(m);

  view_alpha_ = draw_prior_alpha();
  std::vector<int> col_assignment = crp_partition(view_alpha_, m, rng_);
  std::size_t n_views =
      m == 0 ? 0 : *std::max_element(col_assignment.begin(), col_assignment.end()) + 1;
  views_.resize(n_views);
  for (std::size_t j = 0; j < m; ++j) {
    view_of_col_[j] = static_cast<std::size_t>(col_assignment[j]);
    views_[view_of_col_[j]].columns.push_back(j);
  }
  for (auto& v : views_) {
    v.alpha = draw_prior_alpha();
    v.row_category = crp_partition(v.alpha, n_rows_, rng_);
    std::size_t k = n_rows_ == 0
                        ? 0
                        : *std::max_element(v.row_category.begin(),
                                            v.row_category.end()) + 1;
    v.category_sizes.assign(k, 0);
    for (int c : v.row_category) ++v.category_sizes[static_cast<std::size_t>(c)];
    v.stats.resize(m);
    for (std::size_t j : v.columns)
      v.stats[j] = build_column_stats(j, v.row_category, k);
  }
}

double PccState::draw_prior_alpha() {
  if (prior_.fixed_alpha) return *prior_.fixed_alpha;
  std::gamma_distribution<double> gamma(prior_.alpha_shape, 1.0 / prior_.alpha_rate);
  double a = gamma(rng_);
  return std::max(a, 1e-6);
}

//----------------------------------------------------------------------------
// sufficient statistics plumbing

ComponentStats PccState::empty_stats(std::size_t col) const {
  const PccColumn& c = data_->columns[col];
  if (c.categorical) return CatStats(c.n_cats);
  return ContStats{};
}

void PccState::stats_add_row(std::size_t col, ComponentStats& s, std::size_t row) const {
  const PccColumn& c = data_->columns[col];
  if (!c.present[row]) return;
  if (c.categorical)
    std::get<CatStats>(s).add(static_cast<std::size_t>(c.cat_values[row]));
  else
    std::get<ContStats>(s).add(c.cont_values[row]);
}

void PccState::stats_remove_row(std::size_t col, ComponentStats& s,
                                std::size_t row) const {
  const PccColumn& c = data_->columns[col];
  if (!c.present[row]) return;
  if (c.categorical)
    std::get<CatStats>(s).remove(static_cast<std::size_t>(c.cat_values[row]));
  else
    std::get<ContStats>(s).remove(c.cont_values[row]);
}

double PccState::cell_log_predictive(std::size_t col, const ComponentStats& s,
                                     const Cell& value) const {
  const PccColumn& c = data_->columns[col];
  if (c.categorical) {
    if (value.kind() != Cell::Kind::Categorical)
      throw DataError("pcc: column '" + c.name + "' expects a categorical value");
    if (value.category() >= c.n_cats)
      throw DataError("pcc: category out of range for column '" + c.name + "'");
    return cat_log_predictive(std::get<CatStats>(s), c.dirichlet_gamma,
                              value.category());
  }
  if (value.kind() != Cell::Kind::Continuous)
    throw DataError("pcc: column '" + c.name + "' expects a continuous value");
  return nix_log_predictive(std::get<ContStats>(s), c.hyper, value.value());
}

double PccState::cell_log_predictive_raw(std::size_t col, const ComponentStats& s,
                                         std::size_t row) const {
  const PccColumn& c = data_->columns[col];
  if (c.categorical)
    return cat_log_predictive(std::get<CatStats>(s), c.dirichlet_gamma,
                              static_cast<std::size_t>(c.cat_values[row]));
  return nix_log_predictive(std::get<ContStats>(s), c.hyper, c.cont_values[row]);
}

double PccState::stats_log_marginal(std::size_t col, const ComponentStats& s) const {
  const PccColumn& c = data_->columns[col];
  if (c.categorical) return cat_log_marginal(std::get<CatStats>(s), c.dirichlet_gamma);
  return nix_log_marginal(std::get<ContStats>(s), c.hyper);
}

std::vector<ComponentStats> PccState::build_column_stats(
    std::size_t col, std::span<const int> row_category,
    std::size_t n_categories) const {
  std::vector<ComponentStats> stats(n_categories, empty_stats(col));
  for (std::size_t i = 0; i < row_category.size(); ++i)
    stats_add_row(col, stats[static_cast<std::size_t>(row_category[i])], i);
  return stats;
}

double PccState::column_log_marginal(std::size_t col, std::span<const int> row_category,
                                     std::size_t n_categories) const {
  auto stats = build_column_stats(col, row_category, n_categories);
  double lp = 0;
  for (const auto& s : stats) lp += stats_log_marginal(col, s);
  return lp;
}

//----------------------------------------------------------------------------
// column reassignment (collapsed Gibbs with one auxiliary view)

void PccState::reassign_column(std::size_t col) {
  const std::size_t old_view = view_of_col_[col];
  View& ov = views_[old_view];
  ov.columns.erase(std::find(ov.columns.begin(), ov.columns.end(), col));
  ov.stats[col].clear();
  const bool was_singleton = ov.columns.empty();

  // Auxiliary proposal: a vacated view keeps playing that role, otherwise a
  // fresh partition is drawn from the prior (Neal's algorithm 8, one draw).
  double aux_alpha;
  std::vector<int> aux_partition;
  std::size_t aux_k;
  if (was_singleton) {
    aux_alpha = ov.alpha;
    aux_partition = ov.row_category;
    aux_k = ov.n_categories();
  } else {
    aux_alpha = draw_prior_alpha();
    aux_partition = crp_partition(aux_alpha, n_rows_, rng_);
    aux_k = n_rows_ == 0 ? 0
                         : static_cast<std::size_t>(*std::max_element(
                               aux_partition.begin(), aux_partition.end())) + 1;
  }

  std::vector<double> logw;
  std::vector<std::size_t> view_ids;
  for (std::size_t u = 0; u < views_.size(); ++u) {
    if (views_[u].columns.empty()) continue;
    logw.push_back(std::log(static_cast<double>(views_[u].columns.size())) +
                   column_log_marginal(col, views_[u].row_category,
                                       views_[u].n_categories()));
    view_ids.push_back(u);
  }
  logw.push_back(std::log(view_alpha_) +
                 column_log_marginal(col, aux_partition, aux_k));

  std::size_t choice = sample_from_log_weights(logw, rng_);
  if (choice < view_ids.size()) {
    std::size_t u = view_ids[choice];
    views_[u].columns.push_back(col);
    views_[u].stats[col] =
        build_column_stats(col, views_[u].row_category, views_[u].n_categories());
    view_of_col_[col] = u;
    if (was_singleton) {
      // retire the vacated view
      std::size_t last = views_.size() - 1;
      if (old_view != last) {
        views_[old_view] = std::move(views_[last]);
        for (std::size_t j : views_[old_view].columns) view_of_col_[j] = old_view;
      }
      views_.pop_back();
      if (view_of_col_[col] == last) view_of_col_[col] = old_view;
    }
  } else {
    // new (or re-kept singleton) view
    if (was_singleton) {
      ov.columns.push_back(col);
      ov.alpha = aux_alpha;
      ov.row_category = std::move(aux_partition);
      ov.category_sizes.assign(aux_k, 0);
      for (int c : ov.row_category) ++ov.category_sizes[static_cast<std::size_t>(c)];
      ov.stats[col] = build_column_stats(col, ov.row_category, aux_k);
      view_of_col_[col] = old_view;
    } else {
      View nv;
      nv.columns.push_back(col);
      nv.alpha = aux_alpha;
      nv.row_category = std::move(aux_partition);
      nv.category_sizes.assign(aux_k, 0);
      for (int c : nv.row_category) ++nv.category_sizes[static_cast<std::size_t>(c)];
      nv.stats.resize(data_->columns.size());
      nv.stats[col] = build_column_stats(col, nv.row_category, aux_k);
      views_.push_back(std::move(nv));
      view_of_col_[col] = views_.size() - 1;
    }
  }
}

//----------------------------------------------------------------------------
// row reassignment (collapsed Gibbs, exact within a view)

void PccState::remove_row(View& v, std::size_t row) {
  int k = v.row_category[row];
  for (std::size_t j : v.columns)
    stats_remove_row(j, v.stats[j][static_cast<std::size_t>(k)], row);
  --v.category_sizes[static_cast<std::size_t>(k)];
}

void PccState::add_row(View& v, std::size_t row, int category) {
  if (category == static_cast<int>(v.n_categories())) {
    v.category_sizes.push_back(0);
    for (std::size_t j : v.columns) v.stats[j].push_back(empty_stats(j));
  }
  v.row_category[row] = category;
  ++v.category_sizes[static_cast<std::size_t>(category)];
  for (std::size_t j : v.columns)
    stats_add_row(j, v.stats[j][static_cast<std::size_t>(category)], row);
}

void PccState::drop_empty_category(View& v, int category) {
  const int last = static_cast<int>(v.n_categories()) - 1;
  if (category != last) {
    v.category_sizes[static_cast<std::size_t>(category)] =
        v.category_sizes[static_cast<std::size_t>(last)];
    for (std::size_t j : v.columns)
      v.stats[j][static_cast<std::size_t>(category)] =
          std::move(v.stats[j][static_cast<std::size_t>(last)]);
    for (auto& c : v.row_category)
      if (c == last) c = category;
  }
  v.category_sizes.pop_back();
  for (std::size_t j : v.columns) v.stats[j].pop_back();
}

void PccState::reassign_rows(View& v) {
  std::vector<double> logw;
  for (std::size_t i = 0; i < n_rows_; ++i) {
    const int old_cat = v.row_category[i];
    remove_row(v, i);
    const bool vacated = v.category_sizes[static_cast<std::size_t>(old_cat)] == 0;

    const std::size_t k = v.n_categories();
    logw.assign(k + 1, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      if (static_cast<int>(c) == old_cat && vacated) {
        // an emptied category competes as the "new" block, not twice
        logw[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      logw[c] = std::log(static_cast<double>(v.category_sizes[c]));
      for (std::size_t j : v.columns)
        if (column(j).present[i])
          logw[c] += cell_log_predictive_raw(j, v.stats[j][c], i);
    }
    logw[k] = std::log(v.alpha);
    {
      for (std::size_t j : v.columns)
        if (column(j).present[i]) {
          ComponentStats fresh = empty_stats(j);
          logw[k] += cell_log_predictive_raw(j, fresh, i);
        }
    }

    int choice = static_cast<int>(sample_from_log_weights(logw, rng_));
    if (choice == static_cast<int>(k)) {
      if (vacated) {
        add_row(v, i, old_cat);  // reuse the vacated slot as the fresh block
        continue;
      }
      add_row(v, i, static_cast<int>(k));
    } else {
      add_row(v, i, choice);
      if (vacated) drop_empty_category(v, old_cat);
    }
  }
}

//----------------------------------------------------------------------------
// sequentially-allocated merge-split (Jain-Neal, 3 restricted scans)

void PccState::merge_split(View& v) {
  if (n_rows_ < 2) return;
  std::uniform_int_distribution<std::size_t> pick(0, n_rows_ - 1);
  std::size_t ri = pick(rng_);
  std::size_t rj = pick(rng_);
  while (rj == ri) rj = pick(rng_);

  const int ci = v.row_category[ri];
  const int cj = v.row_category[rj];
  const bool is_split = ci == cj;

  std::vector<std::size_t> members;  // rows besides ri, rj in the two blocks
  for (std::size_t r = 0; r < n_rows_; ++r) {
    if (r == ri || r == rj) continue;
    if (v.row_category[r] == ci || v.row_category[r] == cj) members.push_back(r);
  }

  // scratch clusters A (anchored by ri) and B (anchored by rj)
  struct Scratch {
    std::vector<ComponentStats> stats;  // per local column
    double size = 0;
  };
  Scratch a, b;
  for (std::size_t j : v.columns) {
    a.stats.push_back(empty_stats(j));
    b.stats.push_back(empty_stats(j));
  }
  std::vector<std::uint8_t> in_a(members.size());

  auto scratch_add = [&](Scratch& s, std::size_t row) {
    for (std::size_t local = 0; local < v.columns.size(); ++local)
      stats_add_row(v.columns[local], s.stats[local], row);
    s.size += 1;
  };
  auto scratch_remove = [&](Scratch& s, std::size_t row) {
    for (std::size_t local = 0; local < v.columns.size(); ++local)
      stats_remove_row(v.columns[local], s.stats[local], row);
    s.size -= 1;
  };
  auto log_pred_in = [&](const Scratch& s, std::size_t row) {
    double lp = std::log(s.size);
    for (std::size_t local = 0; local < v.columns.size(); ++local)
      if (column(v.columns[local]).present[row])
        lp += cell_log_predictive_raw(v.columns[local], s.stats[local], row);
    return lp;
  };

  // launch state: random allocation, then restricted Gibbs scans
  scratch_add(a, ri);
  scratch_add(b, rj);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = 0; t < members.size(); ++t) {
    in_a[t] = unit(rng_) < 0.5;
    scratch_add(in_a[t] ? a : b, members[t]);
  }
  constexpr int kRestrictedScans = 3;
  for (int scan = 0; scan < kRestrictedScans; ++scan) {
    for (std::size_t t = 0; t < members.size(); ++t) {
      scratch_remove(in_a[t] ? a : b, members[t]);
      double la = log_pred_in(a, members[t]);
      double lb = log_pred_in(b, members[t]);
      double pa = 1.0 / (1.0 + std::exp(lb - la));
      in_a[t] = unit(rng_) < pa;
      scratch_add(in_a[t] ? a : b, members[t]);
    }
  }

  // final allocation scan: sampled for a split proposal, forced onto the
  // current configuration for a merge (yielding the reverse-move density)
  double log_q = 0;
  for (std::size_t t = 0; t < members.size(); ++t) {
    scratch_remove(in_a[t] ? a : b, members[t]);
    double la = log_pred_in(a, members[t]);
    double lb = log_pred_in(b, members[t]);
    double norm = log_sum_exp(std::array{la, lb});
    bool to_a;
    if (is_split) {
      to_a = unit(rng_) < std::exp(la - norm);
    } else {
      to_a = v.row_category[members[t]] == ci;
    }
    log_q += (to_a ? la : lb) - norm;
    in_a[t] = to_a;
    scratch_add(to_a ? a : b, members[t]);
  }

  auto pair_log_marginal = [&](const Scratch& s) {
    double lp = 0;
    for (std::size_t local = 0; local < v.columns.size(); ++local)
      lp += stats_log_marginal(v.columns[local], s.stats[local]);
    return lp;
  };

  // merged-block marginal: current stats for a split; A+B for a merge
  double log_m_merged = 0;
  {
    Scratch merged;
    for (std::size_t j : v.columns) merged.stats.push_back(empty_stats(j));
    scratch_add(merged, ri);
    scratch_add(merged, rj);
    for (std::size_t r : members) scratch_add(merged, r);
    log_m_merged = pair_log_marginal(merged);
  }

  const double log_prior_split = std::log(v.alpha) + std::lgamma(a.size) +
                                 std::lgamma(b.size) - std::lgamma(a.size + b.size);
  const double log_lik_split =
      pair_log_marginal(a) + pair_log_marginal(b) - log_m_merged;

  double log_accept;
  if (is_split)
    log_accept = log_prior_split + log_lik_split - log_q;
  else
    log_accept = -(log_prior_split + log_lik_split) + log_q;

  if (std::log(unit(rng_)) >= log_accept) return;

  if (is_split) {
    // move B's rows into a fresh category
    const int fresh = static_cast<int>(v.n_categories());
    v.category_sizes.push_back(0);
    for (std::size_t j : v.columns) v.stats[j].push_back(empty_stats(j));
    auto move_to_fresh = [&](std::size_t row) {
      remove_row(v, row);
      add_row(v, row, fresh);
    };
    move_to_fresh(rj);
    for (std::size_t t = 0; t < members.size(); ++t)
      if (!in_a[t]) move_to_fresh(members[t]);
  } else {
    for (std::size_t r = 0; r < n_rows_; ++r) {
      if (v.row_category[r] == cj) {
        remove_row(v, r);
        add_row(v, r, ci);
      }
    }
    drop_empty_category(v, cj);
  }
}

//----------------------------------------------------------------------------
// concentration updates (log-grid posterior sample)

double PccState::sample_concentration(double current, std::size_t n_blocks,
                                      std::size_t n_items) {
  if (prior_.fixed_alpha) return *prior_.fixed_alpha;
  if (n_items == 0) return current;
  constexpr std::size_t kGrid = 100;
  const double lo = std::log(1e-3), hi = std::log(1e3);
  std::vector<double> logw(kGrid);
  std::vector<double> alphas(kGrid);
  for (std::size_t g = 0; g < kGrid; ++g) {
    double alpha =
        std::exp(lo + (hi - lo) * static_cast<double>(g) / (kGrid - 1));
    alphas[g] = alpha;
    logw[g] = (prior_.alpha_shape - 1) * std::log(alpha) -
              prior_.alpha_rate * alpha +
              static_cast<double>(n_blocks) * std::log(alpha) +
              std::lgamma(alpha) - std::lgamma(alpha + static_cast<double>(n_items));
  }
  return alphas[sample_from_log_weights(logw, rng_)];
}

void PccState::resample_concentrations() {
  view_alpha_ = sample_concentration(view_alpha_, views_.size(), n_cols());
  for (auto& v : views_)
    v.alpha = sample_concentration(v.alpha, v.n_categories(), n_rows_);
}

void PccState::sweep() {
  if (!has_data()) throw DataError("pcc: cannot step a state loaded without data");
  for (std::size_t j = 0; j < n_cols(); ++j) reassign_column(j);
  for (auto& v : views_) {
    reassign_rows(v);
    merge_split(v);
  }
  resample_concentrations();
}

//----------------------------------------------------------------------------
// queries

double PccState::log_component_predictive(std::size_t col, std::optional<int> category,
                                          const Cell& value) const {
  if (col >= n_cols()) throw DataError("pcc: unknown column");
  if (value.is_missing()) throw DataError("pcc: predictive of a missing value");
  if (!category) {
    ComponentStats fresh = empty_stats(col);
    return cell_log_predictive(col, fresh, value);
  }
  const View& v = views_[view_of_col_[col]];
  if (*category < 0 || *category >= static_cast<int>(v.n_categories()))
    throw DataError("pcc: unknown category");
  return cell_log_predictive(col, v.stats[col][static_cast<std::size_t>(*category)],
                             value);
}

double PccState::logp(std::span<const ColumnValue> targets,
                      std::span<const ColumnValue> conditions) const {
  double total = 0;
  std::vector<double> logw;
  for (std::size_t u = 0; u < views_.size(); ++u) {
    const View& v = views_[u];
    bool has_target = false;
    for (const auto& t : targets)
      if (view_of_col_[t.column] == u) has_target = true;
    if (!has_target) continue;

    const std::size_t k = v.n_categories();
    logw.assign(k + 1, 0.0);
    for (std::size_t c = 0; c < k; ++c)
      logw[c] = std::log(static_cast<double>(v.category_sizes[c]));
    logw[k] = std::log(v.alpha);
    for (const auto& cond : conditions) {
      if (view_of_col_[cond.column] != u) continue;
      for (std::size_t c = 0; c < k; ++c)
        logw[c] += cell_log_predictive(cond.column, v.stats[cond.column][c], cond.value);
      ComponentStats fresh = empty_stats(cond.column);
      logw[k] += cell_log_predictive(cond.column, fresh, cond.value);
    }
    const double norm = log_sum_exp(logw);

    std::vector<double> joint(logw.begin(), logw.end());
    for (const auto& t : targets) {
      if (view_of_col_[t.column] != u) continue;
      for (std::size_t c = 0; c < k; ++c)
        joint[c] += cell_log_predictive(t.column, v.stats[t.column][c], t.value);
      ComponentStats fresh = empty_stats(t.column);
      joint[k] += cell_log_predictive(t.column, fresh, t.value);
    }
    total += log_sum_exp(joint) - norm;
  }
  return total;
}

void PccState::simulate_row(std::span<const std::size_t> columns,
                            std::span<const ColumnValue> conditions,
                            std::span<Cell> out, Rng& rng) const {
  std::vector<double> logw;
  for (std::size_t u = 0; u < views_.size(); ++u) {
    const View& v = views_[u];
    bool wanted = false;
    for (std::size_t col : columns)
      if (view_of_col_[col] == u) wanted = true;
    if (!wanted) continue;

    const std::size_t k = v.n_categories();
    logw.assign(k + 1, 0.0);
    for (std::size_t c = 0; c < k; ++c)
      logw[c] = std::log(static_cast<double>(v.category_sizes[c]));
    logw[k] = std::log(v.alpha);
    for (const auto& cond : conditions) {
      if (view_of_col_[cond.column] != u) continue;
      for (std::size_t c = 0; c < k; ++c)
        logw[c] += cell_log_predictive(cond.column, v.stats[cond.column][c], cond.value);
      ComponentStats fresh = empty_stats(cond.column);
      logw[k] += cell_log_predictive(cond.column, fresh, cond.value);
    }
    const std::size_t category = sample_from_log_weights(logw, rng);

    for (std::size_t idx = 0; idx < columns.size(); ++idx) {
      const std::size_t col = columns[idx];
      if (view_of_col_[col] != u) continue;
      const PccColumn& c = data_->columns[col];
      ComponentStats fresh = empty_stats(col);
      const ComponentStats& s =
          category < k ? v.stats[col][category] : fresh;
      if (c.categorical)
        out[idx] = Cell::categorical(
            cat_sample_predictive(std::get<CatStats>(s), c.dirichlet_gamma, rng));
      else
        out[idx] =
            Cell::continuous(nix_sample_predictive(std::get<ContStats>(s), c.hyper, rng));
    }
  }
}

//----------------------------------------------------------------------------
// invariants

void PccState::check_consistency(double tol) const {
  if (!has_data()) throw DataError("pcc: consistency check needs raw data");
  std::vector<std::uint8_t> seen(n_cols(), 0);
  for (std::size_t u = 0; u < views_.size(); ++u) {
    const View& v = views_[u];
    if (v.columns.empty()) throw DataError("pcc: empty view");
    for (std::size_t j : v.columns) {
      if (view_of_col_[j] != u) throw DataError("pcc: view_of_col mismatch");
      if (seen[j]++) throw DataError("pcc: column in two views");
    }
    std::vector<int> sizes(v.n_categories(), 0);
    for (std::size_t i = 0; i < n_rows_; ++i) {
      int c = v.row_category[i];
      if (c < 0 || c >= static_cast<int>(v.n_categories()))
        throw DataError("pcc: category index out of range");
      ++sizes[static_cast<std::size_t>(c)];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (sizes[c] == 0) throw DataError("pcc: empty category");
      if (sizes[c] != v.category_sizes[c])
        throw DataError("pcc: category size mismatch");
    }
    for (std::size_t j : v.columns) {
      auto fresh = build_column_stats(j, v.row_category, v.n_categories());
      for (std::size_t c = 0; c < fresh.size(); ++c) {
        if (column(j).categorical) {
          const auto& fa = std::get<CatStats>(fresh[c]);
          const auto& fb = std::get<CatStats>(v.stats[j][c]);
          if (fa.counts != fb.counts || fa.total != fb.total)
            throw DataError("pcc: categorical stats mismatch");
        } else {
          const auto& fa = std::get<ContStats>(fresh[c]);
          const auto& fb = std::get<ContStats>(v.stats[j][c]);
          auto close = [tol](double x, double y) {
            return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
          };
          if (!close(fa.n, fb.n) || !close(fa.sum, fb.sum) ||
              !close(fa.sum_sq, fb.sum_sq))
            throw DataError("pcc: continuous stats mismatch");
        }
      }
    }
  }
  for (std::size_t j = 0; j < n_cols(); ++j)
    if (!seen[j]) throw DataError("pcc: column not in any view");
}

}  // namespace synteval::pcc
