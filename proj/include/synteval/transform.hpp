#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "synteval/table.hpp"

namespace synteval {

// Caps a table at max_rows. Without strata: uniform reservoir selection.
// With a categorical strata column: every category observed in t keeps at
// least one row (budget permitting), remaining slots filled uniformly.
// Row order of the source is preserved in the output.
Table stratified_subsample(const Table& t, std::size_t max_rows,
                           const std::optional<std::string>& strata,
                           std::uint64_t seed);

// Replaces every Missing cell with a uniform draw from the non-missing
// values of its own column.
Table impute_random(const Table& t, std::uint64_t seed);

// For each categorical column, drops rows whose value falls outside the
// intersection of the two tables' observed value sets.
std::pair<Table, Table> harmonize_categories(const Table& train, const Table& test);

// Same, restricted to the given columns (non-categorical entries ignored).
std::pair<Table, Table> harmonize_categories_on(const Table& train, const Table& test,
                                                std::span<const std::size_t> columns);

}  // namespace synteval
