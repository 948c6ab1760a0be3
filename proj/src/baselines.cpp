#include "synteval/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "synteval/rng.hpp"

namespace synteval {

const char* baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Self: return "SELF";
    case BaselineKind::Perm: return "PERM";
    case BaselineKind::Half: return "HALF";
  }
  return "?";
}

BaselinePair baseline_self(const Table& x) {
  return {x, x, BaselineKind::Self};
}

BaselinePair baseline_perm(const Table& x, std::uint64_t seed) {
  std::vector<Cell> cells(x.cells());
  const std::size_t n = x.n_rows();
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < x.n_cols(); ++j) {
    Rng rng = make_rng(derive_seed(seed, "perm", j));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n; ++i)
      cells[i * x.n_cols() + j] = x.at(order[i], j);
  }
  return {x, Table(x.schema(), std::move(cells)), BaselineKind::Perm};
}

BaselinePair baseline_half(const Table& x, std::uint64_t seed) {
  const std::size_t n = x.n_rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(derive_seed(seed, "half"));
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_real = (n + 1) / 2;
  std::vector<std::size_t> real_rows(order.begin(), order.begin() + n_real);
  std::vector<std::size_t> synth_rows(order.begin() + n_real, order.end());
  std::sort(real_rows.begin(), real_rows.end());
  std::sort(synth_rows.begin(), synth_rows.end());
  return {x.take_rows(real_rows), x.take_rows(synth_rows), BaselineKind::Half};
}

}  // namespace synteval
