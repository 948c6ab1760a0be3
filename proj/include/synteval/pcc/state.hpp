#pragma once

#include <optional>
#include <span>

#include "synteval/pcc/model.hpp"

namespace synteval::pcc {

// A typed query/condition value for one column.
struct ColumnValue {
  std::size_t column;
  Cell value;
};

// One MCMC chain of the cross-categorization model: a partition of columns
// into views, a per-view partition of rows into categories, and collapsed
// component sufficient statistics. Invariants: view indices are contiguous,
// category indices are contiguous per view, and the statistics always equal
// a from-scratch recomputation over (data, assignments).
class PccState {
public:
  struct View {
    std::vector<std::size_t> columns;
    std::vector<int> row_category;
    std::vector<int> category_sizes;
    double alpha = 1.0;
    // stats[column id][category]; empty for columns outside the view
    std::vector<std::vector<ComponentStats>> stats;

    std::size_t n_categories() const { return category_sizes.size(); }
  };

  PccState(std::shared_ptr<const PccData> data, PccPriorConfig prior,
           std::uint64_t seed);

  // One full sweep: column reassignment, per-view row reassignment plus one
  // merge-split proposal, then concentration updates.
  void sweep();

  // log p(targets | conditions) under this chain; views factorize and each
  // view mixes over its categories plus a fresh one weighted by alpha.
  double logp(std::span<const ColumnValue> targets,
              std::span<const ColumnValue> conditions) const;

  // Posterior predictive of one cell under one category (nullopt = a fresh
  // category, i.e. the prior predictive).
  double log_component_predictive(std::size_t col, std::optional<int> category,
                                  const Cell& value) const;

  void simulate_row(std::span<const std::size_t> columns,
                    std::span<const ColumnValue> conditions,
                    std::span<Cell> out, Rng& rng) const;

  std::size_t n_views() const { return views_.size(); }
  std::size_t view_of(std::size_t col) const { return view_of_col_[col]; }
  const View& view(std::size_t u) const { return views_[u]; }
  double view_alpha() const { return view_alpha_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return view_of_col_.size(); }

  // Throws unless every sufficient statistic matches a recomputation from
  // raw data within tol.
  void check_consistency(double tol) const;

  friend class PccSerializer;

private:
  PccState() = default;  // deserialization shell; PccSerializer fills it in

  bool has_data() const { return data_ && !data_->columns.empty() &&
                                 data_->columns.front().has_values(); }
  const PccColumn& column(std::size_t j) const { return data_->columns[j]; }

  ComponentStats empty_stats(std::size_t col) const;
  double cell_log_predictive(std::size_t col, const ComponentStats& s,
                             const Cell& value) const;
  double cell_log_predictive_raw(std::size_t col, const ComponentStats& s,
                                 std::size_t row) const;
  void stats_add_row(std::size_t col, ComponentStats& s, std::size_t row) const;
  void stats_remove_row(std::size_t col, ComponentStats& s, std::size_t row) const;
  double stats_log_marginal(std::size_t col, const ComponentStats& s) const;

  // marginal likelihood of a whole column under a row partition
  double column_log_marginal(std::size_t col, std::span<const int> row_category,
                             std::size_t n_categories) const;
  std::vector<ComponentStats> build_column_stats(std::size_t col,
                                                 std::span<const int> row_category,
                                                 std::size_t n_categories) const;

  void reassign_column(std::size_t col);
  void reassign_rows(View& v);
  void merge_split(View& v);
  void remove_row(View& v, std::size_t row);
  void add_row(View& v, std::size_t row, int category);
  void drop_empty_category(View& v, int category);
  void resample_concentrations();
  double sample_concentration(double current, std::size_t n_blocks,
                              std::size_t n_items);
  double draw_prior_alpha();

  std::shared_ptr<const PccData> data_;
  PccPriorConfig prior_;
  std::size_t n_rows_ = 0;
  std::vector<std::size_t> view_of_col_;
  std::vector<View> views_;
  double view_alpha_ = 1.0;
  Rng rng_;
};

}  // namespace synteval::pcc
