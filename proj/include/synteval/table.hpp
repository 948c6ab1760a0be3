#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "synteval/codebook.hpp"
#include "synteval/error.hpp"

namespace synteval {

// One datum: a category index, a finite real value, or an explicit gap.
class Cell {
public:
  enum class Kind : std::uint8_t { Missing, Categorical, Continuous };

  constexpr Cell() = default;

  static Cell missing() { return Cell(); }
  static Cell categorical(std::size_t index) {
    Cell c;
    c.kind_ = Kind::Categorical;
    c.index_ = static_cast<std::uint32_t>(index);
    return c;
  }
  static Cell continuous(double value) {
    if (!std::isfinite(value))
      throw DataError("cell: continuous value must be finite");
    Cell c;
    c.kind_ = Kind::Continuous;
    c.value_ = value;
    return c;
  }

  Kind kind() const { return kind_; }
  bool is_missing() const { return kind_ == Kind::Missing; }
  std::size_t category() const {
    if (kind_ != Kind::Categorical) throw DataError("cell: not categorical");
    return index_;
  }
  double value() const {
    if (kind_ != Kind::Continuous) throw DataError("cell: not continuous");
    return value_;
  }

  bool operator==(const Cell& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
      case Kind::Missing: return true;
      case Kind::Categorical: return index_ == o.index_;
      case Kind::Continuous: return value_ == o.value_;
    }
    return false;
  }

private:
  Kind kind_ = Kind::Missing;
  std::uint32_t index_ = 0;
  double value_ = 0.0;
};

// Column-typed, row-exchangeable dataset. Immutable after construction;
// all operations hand back new tables, so shared instances are safe to
// read concurrently.
class Table {
public:
  Table() = default;
  Table(Codebook schema, std::vector<Cell> row_major_cells);

  static Table from_rows(Codebook schema, const std::vector<std::vector<Cell>>& rows);

  const Codebook& schema() const { return schema_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return schema_.n_cols(); }

  const Cell& at(std::size_t row, std::size_t col) const {
    return cells_[row * n_cols() + col];
  }
  std::span<const Cell> row(std::size_t i) const {
    return {cells_.data() + i * n_cols(), n_cols()};
  }
  const std::vector<Cell>& cells() const { return cells_; }

  // New table holding the given rows of this one, in the given order.
  Table take_rows(std::span<const std::size_t> rows) const;

  bool operator==(const Table& o) const {
    return schema_ == o.schema_ && cells_ == o.cells_;
  }

private:
  void validate() const;

  Codebook schema_;
  std::vector<Cell> cells_;
  std::size_t n_rows_ = 0;
};

// Binary present/absent view of a table: one categorical column per source
// column with categories ["present", "absent"]; a cell is "absent" exactly
// where the source cell is Missing. Being an ordinary Table keeps it
// composable with subsampling and the correlation metrics.
Table missingness_of(const Table& t);

inline constexpr std::size_t kPresentIndex = 0;
inline constexpr std::size_t kAbsentIndex = 1;

// Observed (non-missing) values of a column.
std::vector<double> observed_values(const Table& t, std::size_t col);
std::vector<std::size_t> observed_categories(const Table& t, std::size_t col);
std::size_t missing_count(const Table& t, std::size_t col);

}  // namespace synteval
