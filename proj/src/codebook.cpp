#include "synteval/codebook.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "synteval/error.hpp"

namespace synteval {

namespace {

const char* kind_name(ColumnKind k) {
  return k == ColumnKind::Categorical ? "categorical" : "continuous";
}

ColumnKind kind_from_name(const std::string& s) {
  if (s == "categorical") return ColumnKind::Categorical;
  if (s == "continuous") return ColumnKind::Continuous;
  throw DataError("codebook: unknown column kind '" + s + "'");
}

}  // namespace

std::optional<std::size_t> ColumnSpec::category_index(const std::string& label) const {
  auto it = std::find(categories.begin(), categories.end(), label);
  if (it == categories.end()) return std::nullopt;
  return static_cast<std::size_t>(it - categories.begin());
}

Codebook::Codebook(std::vector<ColumnSpec> columns, std::vector<std::string> sentinels)
    : columns_(std::move(columns)), sentinels_(std::move(sentinels)) {
  validate();
}

void Codebook::validate() const {
  std::set<std::string> seen;
  for (const auto& col : columns_) {
    if (col.name.empty()) throw DataError("codebook: empty column name");
    if (!seen.insert(col.name).second)
      throw DataError("codebook: duplicate column name '" + col.name + "'");
    if (col.kind == ColumnKind::Categorical) {
      if (col.categories.empty())
        throw DataError("codebook: categorical column '" + col.name +
                        "' lists no categories");
      std::set<std::string> cats(col.categories.begin(), col.categories.end());
      if (cats.size() != col.categories.size())
        throw DataError("codebook: duplicate category in column '" + col.name + "'");
    } else if (!col.categories.empty()) {
      throw DataError("codebook: continuous column '" + col.name +
                      "' must not list categories");
    }
  }
}

std::optional<std::size_t> Codebook::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns_.size(); ++j)
    if (columns_[j].name == name) return j;
  return std::nullopt;
}

bool Codebook::is_missing_sentinel(const std::string& token) const {
  return std::find(sentinels_.begin(), sentinels_.end(), token) != sentinels_.end();
}

bool Codebook::operator==(const Codebook& other) const {
  if (columns_.size() != other.columns_.size()) return false;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& a = columns_[j];
    const auto& b = other.columns_[j];
    if (a.name != b.name || a.kind != b.kind || a.categories != b.categories ||
        a.missing_allowed != b.missing_allowed || a.ingest_as != b.ingest_as)
      return false;
  }
  return sentinels_ == other.sentinels_;
}

Codebook Codebook::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("codebook: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array())
    throw DataError("codebook: expected object with a 'columns' array");

  std::vector<ColumnSpec> cols;
  for (const auto& jc : doc["columns"]) {
    ColumnSpec spec;
    spec.name = jc.at("name").get<std::string>();
    spec.kind = kind_from_name(jc.at("kind").get<std::string>());
    if (jc.contains("categories"))
      spec.categories = jc["categories"].get<std::vector<std::string>>();
    spec.missing_allowed = jc.value("missing_allowed", false);
    if (jc.contains("ingest_as")) {
      const auto s = jc["ingest_as"].get<std::string>();
      if (s != "timestamp_epoch_seconds")
        throw DataError("codebook: unknown ingest_as directive '" + s + "'");
      spec.ingest_as = IngestAs::TimestampEpochSeconds;
    }
    cols.push_back(std::move(spec));
  }
  std::vector<std::string> sentinels = default_sentinels();
  if (doc.contains("missing_sentinels"))
    sentinels = doc["missing_sentinels"].get<std::vector<std::string>>();
  return Codebook(std::move(cols), std::move(sentinels));
}

Codebook Codebook::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("codebook: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Codebook::to_json_text() const {
  nlohmann::ordered_json doc;
  doc["columns"] = nlohmann::ordered_json::array();
  for (const auto& col : columns_) {
    nlohmann::ordered_json jc;
    jc["name"] = col.name;
    jc["kind"] = kind_name(col.kind);
    if (col.kind == ColumnKind::Categorical) jc["categories"] = col.categories;
    jc["missing_allowed"] = col.missing_allowed;
    if (col.ingest_as) jc["ingest_as"] = "timestamp_epoch_seconds";
    doc["columns"].push_back(std::move(jc));
  }
  doc["missing_sentinels"] = sentinels_;
  return doc.dump(2);
}

}  // namespace synteval
