#pragma once

#include "synteval/config.hpp"
#include "synteval/pcc/ensemble.hpp"
#include "synteval/report.hpp"

namespace synteval {

// Every enabled metric for one (real, synth) pair at one replication seed.
std::vector<MetricScore> compute_metrics(const Table& real, const Table& synth,
                                         const EvalConfig& cfg, std::uint64_t seed,
                                         const pcc::PccEnsemble* ensemble);

// Loads the tables, runs all synthesizers and baselines across replications,
// aggregates groups in the structural order, and scores quality vs HALF.
EvaluationReport run_evaluation(const EvalConfig& cfg);

// In-memory variant used by tests and the CLI after loading inputs.
EvaluationReport run_evaluation(const EvalConfig& cfg, const Table& real,
                                const std::vector<std::pair<std::string, Table>>& synths,
                                const pcc::PccEnsemble* ensemble);

}  // namespace synteval
