#include "synteval/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace synteval {

namespace {

// State-machine RFC-4180 reader handling quoted fields with embedded
// separators, quotes, and newlines. Accepts \n and \r\n row endings.
std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw DataError("csv: unterminated quoted field");
  if (!field.empty() || field_started || !row.empty()) end_row();
  return rows;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quoted(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

double parse_number(const std::string& token, std::size_t row, const std::string& col) {
  double value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw DataError("csv: unparseable numeric cell '" + token + "' at row " +
                    std::to_string(row) + ", column '" + col + "'");
  return value;
}

std::string format_number(double v) {
  char buf[40];
  int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

// Days since 1970-01-01 for a civil date (Hinnant's algorithm).
long long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

}  // namespace

double parse_timestamp_epoch_seconds(const std::string& token) {
  // Plain numbers pass through so epoch-second round trips stay exact.
  {
    double value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc{} && ptr == token.data() + token.size()) return value;
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double s = 0;
  char sep = 0;
  int consumed = 0;
  int fields =
      std::sscanf(token.c_str(), "%d-%d-%d%c%d:%d:%lf%n", &y, &mo, &d, &sep, &h, &mi, &s,
                  &consumed);
  if (fields >= 3) {
    if (fields == 3) {
      // date-only form; verify nothing trails
      int only = 0;
      if (std::sscanf(token.c_str(), "%d-%d-%d%n", &y, &mo, &d, &only) == 3 &&
          static_cast<std::size_t>(only) == token.size()) {
        h = mi = 0;
        s = 0;
      } else {
        throw DataError("csv: unparseable timestamp '" + token + "'");
      }
    } else if (fields != 7 || (sep != ' ' && sep != 'T') ||
               static_cast<std::size_t>(consumed) != token.size()) {
      throw DataError("csv: unparseable timestamp '" + token + "'");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s >= 61)
      throw DataError("csv: timestamp out of range '" + token + "'");
    return static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 +
           mi * 60.0 + s;
  }
  throw DataError("csv: unparseable timestamp '" + token + "'");
}

Table load_csv_text(const std::string& text, const Codebook& codebook) {
  auto rows = parse_rows(text);
  if (rows.empty()) throw DataError("csv: empty file");

  const auto& header = rows.front();
  if (header.size() != codebook.n_cols())
    throw DataError("csv: header has " + std::to_string(header.size()) +
                    " columns, codebook has " + std::to_string(codebook.n_cols()));
  // field index in the file for each codebook column
  std::vector<std::size_t> source_of(codebook.n_cols());
  std::vector<bool> used(header.size(), false);
  for (std::size_t j = 0; j < codebook.n_cols(); ++j) {
    const auto& name = codebook.column(j).name;
    bool found = false;
    for (std::size_t f = 0; f < header.size(); ++f) {
      if (!used[f] && header[f] == name) {
        source_of[j] = f;
        used[f] = true;
        found = true;
        break;
      }
    }
    if (!found) throw DataError("csv: header is missing codebook column '" + name + "'");
  }

  std::vector<Cell> cells;
  cells.reserve((rows.size() - 1) * codebook.n_cols());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    if (fields.size() != header.size())
      throw DataError("csv: row " + std::to_string(r) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    for (std::size_t j = 0; j < codebook.n_cols(); ++j) {
      const ColumnSpec& spec = codebook.column(j);
      const std::string& token = fields[source_of[j]];
      if (codebook.is_missing_sentinel(token)) {
        if (!spec.missing_allowed)
          throw DataError("csv: missing value at row " + std::to_string(r) +
                          ", column '" + spec.name + "' (missing not allowed)");
        cells.push_back(Cell::missing());
        continue;
      }
      if (spec.kind == ColumnKind::Categorical) {
        auto idx = spec.category_index(token);
        if (!idx)
          throw DataError("csv: unknown category '" + token + "' at row " +
                          std::to_string(r) + ", column '" + spec.name + "'");
        cells.push_back(Cell::categorical(*idx));
      } else {
        double v = spec.ingest_as == IngestAs::TimestampEpochSeconds
                       ? parse_timestamp_epoch_seconds(token)
                       : parse_number(token, r, spec.name);
        if (std::isnan(v)) {
          if (!spec.missing_allowed)
            throw DataError("csv: NaN at row " + std::to_string(r) + ", column '" +
                            spec.name + "' (missing not allowed)");
          cells.push_back(Cell::missing());
        } else if (!std::isfinite(v)) {
          throw DataError("csv: non-finite value at row " + std::to_string(r) +
                          ", column '" + spec.name + "'");
        } else {
          cells.push_back(Cell::continuous(v));
        }
      }
    }
  }
  return Table(codebook, std::move(cells));
}

Table load_csv(const std::string& path, const Codebook& codebook) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("csv: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_csv_text(ss.str(), codebook);
}

std::string write_csv_text(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.n_cols(); ++j) {
    if (j) out += ',';
    out += quoted(t.schema().column(j).name);
  }
  out += '\n';
  for (std::size_t i = 0; i < t.n_rows(); ++i) {
    for (std::size_t j = 0; j < t.n_cols(); ++j) {
      if (j) out += ',';
      const Cell& c = t.at(i, j);
      switch (c.kind()) {
        case Cell::Kind::Missing:
          break;  // empty field
        case Cell::Kind::Categorical:
          out += quoted(t.schema().column(j).categories[c.category()]);
          break;
        case Cell::Kind::Continuous:
          out += format_number(c.value());
          break;
      }
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Table& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("csv: cannot write '" + path + "'");
  out << write_csv_text(t);
}

}  // namespace synteval
