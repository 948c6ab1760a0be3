#include "synteval/table.hpp"

#include <string>

namespace synteval {

Table::Table(Codebook schema, std::vector<Cell> cells)
    : schema_(std::move(schema)), cells_(std::move(cells)) {
  const std::size_t m = schema_.n_cols();
  if (m == 0) {
    if (!cells_.empty()) throw DataError("table: cells without columns");
    n_rows_ = 0;
    return;
  }
  if (cells_.size() % m != 0)
    throw DataError("table: cell count " + std::to_string(cells_.size()) +
                    " is not a multiple of column count " + std::to_string(m));
  n_rows_ = cells_.size() / m;
  validate();
}

Table Table::from_rows(Codebook schema, const std::vector<std::vector<Cell>>& rows) {
  std::vector<Cell> cells;
  cells.reserve(rows.size() * schema.n_cols());
  for (const auto& r : rows) {
    if (r.size() != schema.n_cols())
      throw DataError("table: row width " + std::to_string(r.size()) +
                      " does not match schema width " +
                      std::to_string(schema.n_cols()));
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return Table(std::move(schema), std::move(cells));
}

void Table::validate() const {
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (std::size_t j = 0; j < n_cols(); ++j) {
      const Cell& c = at(i, j);
      const ColumnSpec& spec = schema_.column(j);
      const std::string where =
          " at row " + std::to_string(i) + ", column '" + spec.name + "'";
      switch (c.kind()) {
        case Cell::Kind::Missing:
          if (!spec.missing_allowed)
            throw DataError("table: missing cell in non-missing column" + where);
          break;
        case Cell::Kind::Categorical:
          if (spec.kind != ColumnKind::Categorical)
            throw DataError("table: categorical cell in continuous column" + where);
          if (c.category() >= spec.categories.size())
            throw DataError("table: category index out of range" + where);
          break;
        case Cell::Kind::Continuous:
          if (spec.kind != ColumnKind::Continuous)
            throw DataError("table: continuous cell in categorical column" + where);
          break;
      }
    }
  }
}

Table Table::take_rows(std::span<const std::size_t> rows) const {
  std::vector<Cell> out;
  out.reserve(rows.size() * n_cols());
  for (std::size_t i : rows) {
    if (i >= n_rows_) throw DataError("table: row index out of range");
    auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return Table(schema_, std::move(out));
}

Table missingness_of(const Table& t) {
  std::vector<ColumnSpec> cols;
  cols.reserve(t.n_cols());
  for (const auto& src : t.schema().columns()) {
    ColumnSpec spec;
    spec.name = src.name;
    spec.kind = ColumnKind::Categorical;
    spec.categories = {"present", "absent"};
    spec.missing_allowed = false;
    cols.push_back(std::move(spec));
  }
  Codebook schema(std::move(cols), t.schema().missing_sentinels());

  std::vector<Cell> cells;
  cells.reserve(t.n_rows() * t.n_cols());
  for (std::size_t i = 0; i < t.n_rows(); ++i)
    for (std::size_t j = 0; j < t.n_cols(); ++j)
      cells.push_back(
          Cell::categorical(t.at(i, j).is_missing() ? kAbsentIndex : kPresentIndex));
  return Table(std::move(schema), std::move(cells));
}

std::vector<double> observed_values(const Table& t, std::size_t col) {
  std::vector<double> out;
  out.reserve(t.n_rows());
  for (std::size_t i = 0; i < t.n_rows(); ++i) {
    const Cell& c = t.at(i, col);
    if (!c.is_missing()) out.push_back(c.value());
  }
  return out;
}

std::vector<std::size_t> observed_categories(const Table& t, std::size_t col) {
  std::vector<std::size_t> out;
  out.reserve(t.n_rows());
  for (std::size_t i = 0; i < t.n_rows(); ++i) {
    const Cell& c = t.at(i, col);
    if (!c.is_missing()) out.push_back(c.category());
  }
  return out;
}

std::size_t missing_count(const Table& t, std::size_t col) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.n_rows(); ++i)
    if (t.at(i, col).is_missing()) ++n;
  return n;
}

}  // namespace synteval
