#include "synteval/transform.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "synteval/rng.hpp"

namespace synteval {

namespace {

// Stratum key for a strata cell; Missing gets its own stratum.
long stratum_key(const Cell& c) {
  return c.is_missing() ? -1 : static_cast<long>(c.category());
}

}  // namespace

Table stratified_subsample(const Table& t, std::size_t max_rows,
                           const std::optional<std::string>& strata,
                           std::uint64_t seed) {
  if (t.n_rows() <= max_rows) return t;
  Rng rng = make_rng(derive_seed(seed, "subsample"));

  std::vector<std::size_t> picked;
  picked.reserve(max_rows);

  if (!strata) {
    // Algorithm R reservoir over row indices.
    std::vector<std::size_t> reservoir(max_rows);
    for (std::size_t i = 0; i < max_rows; ++i) reservoir[i] = i;
    for (std::size_t i = max_rows; i < t.n_rows(); ++i) {
      std::uniform_int_distribution<std::size_t> d(0, i);
      std::size_t k = d(rng);
      if (k < max_rows) reservoir[k] = i;
    }
    picked = std::move(reservoir);
  } else {
    auto col = t.schema().column_index(*strata);
    if (!col) throw DataError("subsample: unknown strata column '" + *strata + "'");
    if (t.schema().column(*col).kind != ColumnKind::Categorical)
      throw DataError("subsample: strata column '" + *strata + "' is not categorical");

    std::map<long, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < t.n_rows(); ++i)
      groups[stratum_key(t.at(i, *col))].push_back(i);
    for (auto& [key, rows] : groups) std::shuffle(rows.begin(), rows.end(), rng);

    // one representative per stratum first, then a uniform fill
    std::vector<std::size_t> leftovers;
    for (auto& [key, rows] : groups) {
      if (picked.size() < max_rows) {
        picked.push_back(rows.back());
        rows.pop_back();
      }
      leftovers.insert(leftovers.end(), rows.begin(), rows.end());
    }
    std::shuffle(leftovers.begin(), leftovers.end(), rng);
    for (std::size_t i = 0; picked.size() < max_rows && i < leftovers.size(); ++i)
      picked.push_back(leftovers[i]);
  }

  std::sort(picked.begin(), picked.end());
  return t.take_rows(picked);
}

Table impute_random(const Table& t, std::uint64_t seed) {
  std::vector<Cell> cells(t.cells());
  for (std::size_t j = 0; j < t.n_cols(); ++j) {
    std::vector<const Cell*> donors;
    std::vector<std::size_t> holes;
    for (std::size_t i = 0; i < t.n_rows(); ++i) {
      const Cell& c = t.at(i, j);
      if (c.is_missing())
        holes.push_back(i);
      else
        donors.push_back(&c);
    }
    if (holes.empty()) continue;
    if (donors.empty())
      throw DataError("impute: column '" + t.schema().column(j).name +
                      "' has no observed values");
    Rng rng = make_rng(derive_seed(seed, "impute", j));
    std::uniform_int_distribution<std::size_t> pick(0, donors.size() - 1);
    for (std::size_t i : holes) cells[i * t.n_cols() + j] = *donors[pick(rng)];
  }
  return Table(t.schema(), std::move(cells));
}

std::pair<Table, Table> harmonize_categories(const Table& train, const Table& test) {
  std::vector<std::size_t> all(train.n_cols());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return harmonize_categories_on(train, test, all);
}

std::pair<Table, Table> harmonize_categories_on(const Table& train, const Table& test,
                                                std::span<const std::size_t> columns) {
  if (!(train.schema() == test.schema()))
    throw DataError("harmonize: schemas do not match");

  std::vector<bool> keep_train(train.n_rows(), true);
  std::vector<bool> keep_test(test.n_rows(), true);

  for (std::size_t j : columns) {
    if (train.schema().column(j).kind != ColumnKind::Categorical) continue;
    auto a = observed_categories(train, j);
    auto b = observed_categories(test, j);
    std::set<std::size_t> sa(a.begin(), a.end());
    std::set<std::size_t> sb(b.begin(), b.end());
    std::set<std::size_t> both;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::inserter(both, both.begin()));
    if (both.empty()) {
      if (sa.empty() && sb.empty()) continue;  // nothing observed anywhere
      throw DataError("harmonize: no shared categories in column '" +
                      train.schema().column(j).name + "'");
    }
    for (std::size_t i = 0; i < train.n_rows(); ++i) {
      const Cell& c = train.at(i, j);
      if (!c.is_missing() && !both.count(c.category())) keep_train[i] = false;
    }
    for (std::size_t i = 0; i < test.n_rows(); ++i) {
      const Cell& c = test.at(i, j);
      if (!c.is_missing() && !both.count(c.category())) keep_test[i] = false;
    }
  }

  auto select = [](const Table& t, const std::vector<bool>& keep) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < keep.size(); ++i)
      if (keep[i]) rows.push_back(i);
    return t.take_rows(rows);
  };
  return {select(train, keep_train), select(test, keep_test)};
}

}  // namespace synteval
