#include "synteval/pcc/component.hpp"

#include <cmath>

namespace synteval::pcc {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct NixPosterior {
  double kappa, mean, nu, s2;
};

NixPosterior nix_posterior(const ContStats& s, const NixHyper& h) {
  NixPosterior p;
  p.kappa = h.kappa0 + s.n;
  p.mean = (h.kappa0 * h.mean0 + s.sum) / p.kappa;
  p.nu = h.nu0 + s.n;
  double nu_s2 = h.nu0 * h.s2_0;
  if (s.n > 0) {
    double xbar = s.sum / s.n;
    double ss = s.sum_sq - s.n * xbar * xbar;
    if (ss < 0) ss = 0;  // cancellation guard
    nu_s2 += ss + (h.kappa0 * s.n / p.kappa) * (xbar - h.mean0) * (xbar - h.mean0);
  }
  p.s2 = nu_s2 / p.nu;
  return p;
}

}  // namespace

double cat_log_predictive(const CatStats& s, double gamma, std::size_t value) {
  const double k = static_cast<double>(s.counts.size());
  return std::log(s.counts[value] + gamma) - std::log(s.total + k * gamma);
}

double cat_log_marginal(const CatStats& s, double gamma) {
  const double k = static_cast<double>(s.counts.size());
  double lp = std::lgamma(k * gamma) - std::lgamma(k * gamma + s.total);
  for (double c : s.counts) lp += std::lgamma(gamma + c) - std::lgamma(gamma);
  return lp;
}

std::size_t cat_sample_predictive(const CatStats& s, double gamma, Rng& rng) {
  const double k = static_cast<double>(s.counts.size());
  double total = s.total + k * gamma;
  std::uniform_real_distribution<double> unit(0.0, total);
  double u = unit(rng);
  for (std::size_t c = 0; c + 1 < s.counts.size(); ++c) {
    u -= s.counts[c] + gamma;
    if (u < 0) return c;
  }
  return s.counts.size() - 1;
}

double log_student_t(double x, double location, double scale_sq, double dof) {
  double z2 = (x - location) * (x - location) / scale_sq;
  return std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2) -
         0.5 * std::log(dof * kPi * scale_sq) -
         (dof + 1) / 2 * std::log1p(z2 / dof);
}

double nix_log_predictive(const ContStats& s, const NixHyper& h, double x) {
  NixPosterior p = nix_posterior(s, h);
  return log_student_t(x, p.mean, p.s2 * (p.kappa + 1) / p.kappa, p.nu);
}

double nix_log_marginal(const ContStats& s, const NixHyper& h) {
  if (s.n == 0) return 0.0;
  NixPosterior p = nix_posterior(s, h);
  return std::lgamma(p.nu / 2) - std::lgamma(h.nu0 / 2) +
         (h.nu0 / 2) * std::log(h.nu0 * h.s2_0) - (p.nu / 2) * std::log(p.nu * p.s2) +
         0.5 * (std::log(h.kappa0) - std::log(p.kappa)) - (s.n / 2) * std::log(kPi);
}

double nix_sample_predictive(const ContStats& s, const NixHyper& h, Rng& rng) {
  NixPosterior p = nix_posterior(s, h);
  std::student_t_distribution<double> t(p.nu);
  return p.mean + std::sqrt(p.s2 * (p.kappa + 1) / p.kappa) * t(rng);
}

}  // namespace synteval::pcc
