#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "synteval/metric.hpp"
#include "synteval/table.hpp"

namespace synteval {

enum class StatKind {
  Mean,
  Median,
  Std,
  RangeCoverage,
  BoundaryAdherence,
  CategoryCoverage,
};

const char* stat_kind_name(StatKind k);

// --- per-column marginal scores (missing cells excluded) ---

// 1 - total variation distance between the two category PMFs.
MetricScore tv_complement(const Table& real, const Table& synth, std::size_t col);

// 1 - exact two-sample Kolmogorov-Smirnov statistic.
MetricScore ks_complement(const Table& real, const Table& synth, std::size_t col);

MetricScore stat_similarity(StatKind kind, const Table& real, const Table& synth,
                            std::size_t col);

// --- pairwise scores ---

MetricScore contingency_similarity(const Table& real, const Table& synth,
                                   std::size_t col_a, std::size_t col_b);

// nullopt when either column is constant (recorded as a diagnostic by the
// harness) so degenerate inputs cannot poison group averages.
std::optional<MetricScore> correlation_similarity(const Table& real, const Table& synth,
                                                  std::size_t col_a, std::size_t col_b);

// Plug-in mutual information in nats; continuous columns are discretized to
// at most 8 equal-frequency bins first.
double mi_estimate(const Table& t, std::size_t col_a, std::size_t col_b);

// 1 - L1/2 distance between the diagonal-zeroed, sum-normalized MI matrices.
MetricScore mutual_information_similarity(const Table& real, const Table& synth,
                                          std::uint64_t seed = 0,
                                          std::size_t max_rows = 10000);

// --- missingness scores ---

MetricScore missing_value_similarity(const Table& real, const Table& synth,
                                     std::size_t col);

std::optional<MetricScore> mnar_similarity(const Table& real, const Table& synth);

std::optional<MetricScore> covariate_dependent_missing_similarity(const Table& real,
                                                                  const Table& synth);

// Cramer's V (no bias correction) between two integer-valued columns;
// constant columns give 0 by convention.
double cramers_v(std::span<const std::size_t> a, std::span<const std::size_t> b);

double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace synteval
