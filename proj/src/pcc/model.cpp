#include "synteval/pcc/model.hpp"

namespace synteval::pcc {

namespace {

PccColumn base_column(const Table& t, std::size_t j, const PccPriorConfig& prior) {
  const auto& spec = t.schema().column(j);
  PccColumn col;
  col.name = spec.name;
  col.present.resize(t.n_rows());
  if (spec.kind == ColumnKind::Categorical) {
    col.categorical = true;
    col.n_cats = spec.categories.size();
    col.dirichlet_gamma = prior.dirichlet_gamma;
    col.cat_values.resize(t.n_rows(), 0);
    for (std::size_t i = 0; i < t.n_rows(); ++i) {
      const Cell& c = t.at(i, j);
      col.present[i] = !c.is_missing();
      if (col.present[i]) col.cat_values[i] = static_cast<std::int32_t>(c.category());
    }
  } else {
    col.cont_values.resize(t.n_rows(), 0.0);
    double sum = 0, sum_sq = 0, n = 0;
    for (std::size_t i = 0; i < t.n_rows(); ++i) {
      const Cell& c = t.at(i, j);
      col.present[i] = !c.is_missing();
      if (col.present[i]) {
        col.cont_values[i] = c.value();
        sum += c.value();
        sum_sq += c.value() * c.value();
        n += 1;
      }
    }
    // empirical-Bayes anchoring of the column prior
    col.hyper.kappa0 = prior.kappa0;
    col.hyper.nu0 = prior.nu0;
    col.hyper.mean0 = n > 0 ? sum / n : 0.0;
    double var = n > 0 ? sum_sq / n - col.hyper.mean0 * col.hyper.mean0 : 0.0;
    col.hyper.s2_0 = var > 1e-9 ? var : 1.0;
  }
  return col;
}

PccColumn coupling_column(const PccColumn& parent, std::size_t parent_index) {
  PccColumn col;
  col.name = parent.name + "__missing";
  col.categorical = true;
  col.n_cats = 2;
  col.dirichlet_gamma = parent.dirichlet_gamma > 0 ? parent.dirichlet_gamma : 1.0;
  col.is_coupling = true;
  col.parent = parent_index;
  col.present.assign(parent.present.size(), 1);
  col.cat_values.resize(parent.present.size());
  for (std::size_t i = 0; i < parent.present.size(); ++i)
    col.cat_values[i] =
        parent.present[i] ? static_cast<std::int32_t>(kPresentIndex)
                          : static_cast<std::int32_t>(kAbsentIndex);
  return col;
}

}  // namespace

std::shared_ptr<const PccData> make_pcc_data(const Table& t,
                                             const PccPriorConfig& prior) {
  auto data = std::make_shared<PccData>();
  data->n_rows = t.n_rows();
  data->n_base = t.n_cols();
  for (std::size_t j = 0; j < t.n_cols(); ++j)
    data->columns.push_back(base_column(t, j, prior));
  for (std::size_t j = 0; j < t.n_cols(); ++j)
    if (t.schema().column(j).missing_allowed)
      data->columns.push_back(coupling_column(data->columns[j], j));
  return data;
}

Table mnar_couple(const Table& t) {
  std::vector<ColumnSpec> specs = t.schema().columns();
  std::vector<std::size_t> coupled;
  for (std::size_t j = 0; j < t.n_cols(); ++j) {
    if (!t.schema().column(j).missing_allowed) continue;
    ColumnSpec spec;
    spec.name = t.schema().column(j).name + "__missing";
    spec.kind = ColumnKind::Categorical;
    spec.categories = {"present", "absent"};
    specs.push_back(std::move(spec));
    coupled.push_back(j);
  }
  Codebook schema(std::move(specs), t.schema().missing_sentinels());

  std::vector<Cell> cells;
  cells.reserve(t.n_rows() * schema.n_cols());
  for (std::size_t i = 0; i < t.n_rows(); ++i) {
    auto row = t.row(i);
    cells.insert(cells.end(), row.begin(), row.end());
    for (std::size_t j : coupled)
      cells.push_back(Cell::categorical(t.at(i, j).is_missing() ? kAbsentIndex
                                                                : kPresentIndex));
  }
  return Table(std::move(schema), std::move(cells));
}

}  // namespace synteval::pcc
