#pragma once

#include <cstdint>

#include "synteval/table.hpp"

namespace synteval {

enum class BaselineKind { Self, Perm, Half };

// A (real, synthetic) table pair playing the X and S roles.
struct BaselinePair {
  Table real;
  Table synth;
  BaselineKind kind;
};

// Upper bound: the real data doubles as its own synthetic copy.
BaselinePair baseline_self(const Table& x);

// Lower bound for dependence: each column permuted independently, missing
// cells permuted along with values so per-column marginals are preserved
// exactly.
BaselinePair baseline_perm(const Table& x, std::uint64_t seed);

// Realistic target: disjoint uniform halves of the source; the larger half
// takes the X role.
BaselinePair baseline_half(const Table& x, std::uint64_t seed);

const char* baseline_name(BaselineKind kind);

}  // namespace synteval
