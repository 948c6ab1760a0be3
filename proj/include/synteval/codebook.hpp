#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace synteval {

enum class ColumnKind { Categorical, Continuous };

enum class IngestAs { TimestampEpochSeconds };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  std::vector<std::string> categories;  // categorical only, codebook order
  bool missing_allowed = false;
  std::optional<IngestAs> ingest_as;

  // Index of a category label, or nullopt if unknown.
  std::optional<std::size_t> category_index(const std::string& label) const;
};

// Per-column schema driving CSV ingestion, metric dispatch, and PCC priors.
class Codebook {
public:
  Codebook() = default;
  explicit Codebook(std::vector<ColumnSpec> columns,
                    std::vector<std::string> missing_sentinels = default_sentinels());

  static std::vector<std::string> default_sentinels() {
    return {"", "NA", "NaN", "null"};
  }

  static Codebook from_json_file(const std::string& path);
  static Codebook from_json_text(const std::string& text);
  std::string to_json_text() const;

  std::size_t n_cols() const { return columns_.size(); }
  const ColumnSpec& column(std::size_t j) const { return columns_.at(j); }
  const std::vector<ColumnSpec>& columns() const { return columns_; }
  const std::vector<std::string>& missing_sentinels() const { return sentinels_; }

  std::optional<std::size_t> column_index(const std::string& name) const;
  bool is_missing_sentinel(const std::string& token) const;

  bool operator==(const Codebook& other) const;

private:
  void validate() const;

  std::vector<ColumnSpec> columns_;
  std::vector<std::string> sentinels_;
};

}  // namespace synteval
