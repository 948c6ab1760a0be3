#pragma once

#include <string>

#include "synteval/table.hpp"

namespace synteval {

// RFC-4180 ingestion. Header names must match the codebook (any order).
// Sentinel tokens and numeric NaN parse as Missing; timestamp-directed
// columns land as continuous epoch seconds.
Table load_csv(const std::string& path, const Codebook& codebook);
Table load_csv_text(const std::string& text, const Codebook& codebook);

void write_csv(const Table& t, const std::string& path);
std::string write_csv_text(const Table& t);

// "YYYY-MM-DD[ HH:MM:SS]" (or 'T' separator, or a plain number) to epoch
// seconds, UTC.
double parse_timestamp_epoch_seconds(const std::string& token);

}  // namespace synteval
