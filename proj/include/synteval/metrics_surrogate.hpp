#pragma once

#include "synteval/metric.hpp"
#include "synteval/pcc/ensemble.hpp"

namespace synteval {

// Right-continuous empirical CDF over a sample of log-likelihoods.
class EmpiricalCdf {
public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double x) const;  // fraction of samples <= x
  const std::vector<double>& samples() const { return sorted_; }

private:
  std::vector<double> sorted_;
};

// t = 1 - |ppe|/2 where |ppe| is the exact area between the pp-curve
// (both CDFs evaluated over the merged sample grid, points joined
// linearly) and the diagonal. Equal samples give t = 1; fully separated
// samples give the corner path and t = 0.75.
MetricScore pp_score(const EmpiricalCdf& f_q, const EmpiricalCdf& f_p);

// pp-plot comparisons of per-cell / per-pair / per-row log-likelihoods of
// the two tables under the PCC surrogate fitted to the real data.
MetricScore pcc_marginal(const pcc::PccEnsemble& e, const Table& real,
                         const Table& synth);
MetricScore pcc_pairwise(const pcc::PccEnsemble& e, const Table& real,
                         const Table& synth, std::uint64_t seed = 0,
                         std::size_t max_rows = 10000);
MetricScore pcc_loo(const pcc::PccEnsemble& e, const Table& real, const Table& synth,
                    std::uint64_t seed = 0, std::size_t max_rows = 10000);
MetricScore pcc_fulljoint(const pcc::PccEnsemble& e, const Table& real,
                          const Table& synth);

}  // namespace synteval
