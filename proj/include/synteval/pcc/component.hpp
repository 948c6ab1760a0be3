#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "synteval/rng.hpp"

namespace synteval::pcc {

// Collapsed categorical component with a symmetric Dirichlet prior.
struct CatStats {
  std::vector<double> counts;
  double total = 0;

  explicit CatStats(std::size_t n_cats = 0) : counts(n_cats, 0.0) {}
  void add(std::size_t value) {
    counts[value] += 1;
    total += 1;
  }
  void remove(std::size_t value) {
    counts[value] -= 1;
    total -= 1;
  }
};

double cat_log_predictive(const CatStats& s, double gamma, std::size_t value);
double cat_log_marginal(const CatStats& s, double gamma);
std::size_t cat_sample_predictive(const CatStats& s, double gamma, Rng& rng);

// Normal component, mean and variance marginalized under a
// Normal-scaled-inverse-chi-squared prior. Predictive is Student-t.
struct NixHyper {
  double mean0 = 0;
  double kappa0 = 1;
  double nu0 = 1;
  double s2_0 = 1;
};

struct ContStats {
  double n = 0, sum = 0, sum_sq = 0;

  void add(double x) {
    n += 1;
    sum += x;
    sum_sq += x * x;
  }
  void remove(double x) {
    n -= 1;
    sum -= x;
    sum_sq -= x * x;
  }
};

double nix_log_predictive(const ContStats& s, const NixHyper& h, double x);
double nix_log_marginal(const ContStats& s, const NixHyper& h);
double nix_sample_predictive(const ContStats& s, const NixHyper& h, Rng& rng);

double log_student_t(double x, double location, double scale_sq, double dof);

using ComponentStats = std::variant<CatStats, ContStats>;

}  // namespace synteval::pcc
