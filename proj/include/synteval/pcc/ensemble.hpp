#pragma once

#include "synteval/pcc/state.hpp"

namespace synteval::pcc {

// A set of independent chains over shared data. Predictive quantities
// average the chains' probabilities. Query methods need a quiescent
// ensemble and are then safe to call concurrently.
class PccEnsemble {
public:
  static PccEnsemble init(const Table& t, const PccPriorConfig& prior,
                          std::size_t n_chains, std::uint64_t seed);

  void step(std::size_t n_sweeps);

  // log of the chain-averaged probability of targets given conditions
  double logp(std::span<const ColumnValue> targets,
              std::span<const ColumnValue> conditions = {}) const;

  // Draws n rows over the requested base (or coupling) columns.
  Table simulate(std::span<const std::size_t> columns,
                 std::span<const ColumnValue> conditions, std::size_t n,
                 std::uint64_t seed) const;

  void save(const std::string& path) const;
  static PccEnsemble load(const std::string& path);

  std::size_t n_chains() const { return chains_.size(); }
  const PccState& chain(std::size_t i) const { return chains_[i]; }
  std::size_t sweeps_done() const { return sweeps_done_; }
  std::size_t n_base_columns() const { return n_base_; }
  std::size_t n_total_columns() const { return column_meta_.size(); }
  const PccPriorConfig& prior() const { return prior_; }

  struct ColumnMeta {
    std::string name;
    bool categorical;
    std::size_t n_cats;       // categorical width
    bool is_coupling;
    std::size_t parent;       // base column a coupling column mirrors
  };
  const ColumnMeta& column_meta(std::size_t j) const { return column_meta_[j]; }
  std::optional<std::size_t> coupling_column(std::size_t base_col) const;

  void check_consistency(double tol) const;

  friend class PccSerializer;

private:
  PccEnsemble() = default;

  std::shared_ptr<const PccData> data_;
  PccPriorConfig prior_;
  std::vector<PccState> chains_;
  std::vector<ColumnMeta> column_meta_;
  std::size_t n_base_ = 0;
  std::size_t sweeps_done_ = 0;
};

}  // namespace synteval::pcc
