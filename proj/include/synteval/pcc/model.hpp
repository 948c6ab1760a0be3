#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "synteval/pcc/component.hpp"
#include "synteval/table.hpp"

namespace synteval::pcc {

struct PccPriorConfig {
  // Gamma(shape, rate) prior on both concentration parameters
  double alpha_shape = 1.0;
  double alpha_rate = 1.0;
  // symmetric Dirichlet concentration for categorical components
  double dirichlet_gamma = 1.0;
  // continuous hyperparameters; mean0 and s2_0 are anchored per column at
  // the empirical mean and variance
  double kappa0 = 1.0;
  double nu0 = 1.0;
  // pin both concentrations instead of drawing/resampling them (tests)
  std::optional<double> fixed_alpha;
};

// One feature column in engine layout. Coupling columns mirror the
// missingness of their parent as a binary categorical feature so the model
// learns the missingness distribution alongside the values.
struct PccColumn {
  std::string name;
  bool categorical = false;
  std::size_t n_cats = 0;
  double dirichlet_gamma = 1.0;
  NixHyper hyper;
  std::vector<std::int32_t> cat_values;  // per row; meaningful where present
  std::vector<double> cont_values;
  std::vector<std::uint8_t> present;
  bool is_coupling = false;
  std::size_t parent = SIZE_MAX;

  bool has_values() const { return !present.empty(); }
};

struct PccData {
  std::vector<PccColumn> columns;  // base columns first, then couplings
  std::size_t n_rows = 0;
  std::size_t n_base = 0;
};

// Engine-layout copy of a table plus one coupling column per
// missing-allowed column.
std::shared_ptr<const PccData> make_pcc_data(const Table& t,
                                             const PccPriorConfig& prior);

// The public face of the coupling step: the same table with one appended
// "<name>__missing" present/absent column per missing-allowed column.
Table mnar_couple(const Table& t);

}  // namespace synteval::pcc
