#include "momentdecomp/stats_input.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "momentdecomp/error.hpp"

namespace momentdecomp {

namespace {

enum class Column { kName, kN, kMean, kSd, kVar, kSkew, kKurt };

constexpr double kSdVarTolerance = 1e-9;

std::optional<Column> column_for(std::string_view header) {
  std::string h;
  for (char c : header) {
    if (c != ' ' && c != '\t') h.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (h.starts_with("sample.")) h.erase(0, 7);
  if (h == "name" || h == "group") return Column::kName;
  if (h == "n") return Column::kN;
  if (h == "mean") return Column::kMean;
  if (h == "sd") return Column::kSd;
  if (h == "var") return Column::kVar;
  if (h == "skew") return Column::kSkew;
  if (h == "kurt") return Column::kKurt;
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_missing(std::string_view cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "null";
}

[[noreturn]] void parse_error(std::size_t row, std::string_view column, const std::string& what) {
  throw StatsError(ErrorKind::kParse, "row " + std::to_string(row) + ", column '" +
                                          std::string(column) + "': " + what);
}

double parse_real(std::string_view cell, std::size_t row, std::string_view column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    parse_error(row, column, "malformed number '" + std::string(cell) + "'");
  }
  return value;
}

std::int64_t parse_count(std::string_view cell, std::size_t row, std::string_view column) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    // Accept integral reals such as "28.0".
    const double real = parse_real(cell, row, column);
    if (real != std::floor(real)) parse_error(row, column, "n must be an integer");
    value = static_cast<std::int64_t>(real);
  }
  return value;
}

// Shared checks once a descriptor has been assembled.
void finish_descriptor(const GroupDescriptor& d, std::size_t row) {
  const std::string where = "row " + std::to_string(row);
  if (d.n <= 0) {
    throw StatsError(ErrorKind::kInvalidArgument, where + ": n missing or non-positive");
  }
  if (auto broken = d.chain_violation(); !broken.empty()) {
    throw StatsError(ErrorKind::kInvalidArgument, where + ": " + broken);
  }
  if (d.sd && d.variance) {
    const double s2 = *d.sd * *d.sd;
    if (std::abs(s2 - *d.variance) > kSdVarTolerance * std::max(std::abs(s2), std::abs(*d.variance))) {
      throw StatsError(ErrorKind::kInconsistent, where + ": sd and var disagree");
    }
  }
}

std::vector<GroupDescriptor> parse_csv(std::string_view text) {
  std::vector<GroupDescriptor> out;
  std::vector<std::optional<Column>> columns;
  std::vector<std::string> headers;
  bool have_header = false;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    auto cells = split_csv_record(line);
    if (!have_header) {
      headers = cells;
      bool has_n = false;
      std::array<bool, 7> seen{};
      for (const auto& h : cells) {
        auto col = column_for(h);
        if (!col) {
          throw StatsError(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                                  ": unknown column '" + h + "'");
        }
        if (seen[static_cast<int>(*col)]) {
          throw StatsError(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                                  ": duplicate column '" + h + "'");
        }
        seen[static_cast<int>(*col)] = true;
        has_n = has_n || *col == Column::kN;
        columns.push_back(col);
      }
      if (!has_n) throw StatsError(ErrorKind::kParse, "header has no 'n' column");
      have_header = true;
      continue;
    }

    if (cells.size() != columns.size()) {
      throw StatsError(ErrorKind::kParse,
                       "line " + std::to_string(line_no) + ": expected " +
                           std::to_string(columns.size()) + " cells, found " +
                           std::to_string(cells.size()));
    }
    GroupDescriptor d;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string_view cell = trim(cells[i]);
      const std::string& col_name = headers[i];
      if (*columns[i] == Column::kName) {
        d.name = std::string(cell);
        continue;
      }
      if (is_missing(cell)) continue;
      switch (*columns[i]) {
        case Column::kN:
          d.n = parse_count(cell, line_no, col_name);
          break;
        case Column::kMean:
          d.mean = parse_real(cell, line_no, col_name);
          break;
        case Column::kSd:
          d.sd = parse_real(cell, line_no, col_name);
          break;
        case Column::kVar:
          d.variance = parse_real(cell, line_no, col_name);
          break;
        case Column::kSkew:
          d.skewness = parse_real(cell, line_no, col_name);
          break;
        case Column::kKurt:
          d.kurtosis = parse_real(cell, line_no, col_name);
          break;
        case Column::kName:
          break;
      }
    }
    finish_descriptor(d, line_no);
    out.push_back(std::move(d));
  }
  if (!have_header) throw StatsError(ErrorKind::kParse, "empty CSV input");
  return out;
}

std::vector<GroupDescriptor> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StatsError(ErrorKind::kParse, std::string("malformed JSON: ") + e.what());
  }
  const nlohmann::json* rows = &doc;
  if (doc.is_object()) {
    if (!doc.contains("rows")) throw StatsError(ErrorKind::kParse, "JSON object has no 'rows'");
    rows = &doc["rows"];
  }
  if (!rows->is_array()) throw StatsError(ErrorKind::kParse, "expected a JSON array of groups");

  std::vector<GroupDescriptor> out;
  std::size_t row = 0;
  for (const auto& obj : *rows) {
    ++row;
    if (!obj.is_object()) parse_error(row, "*", "expected an object");
    GroupDescriptor d;
    if (auto it = obj.find("name"); it != obj.end() && it->is_string()) {
      d.name = it->get<std::string>();
    }
    for (const auto& [key, value] : obj.items()) {
      auto col = column_for(key);
      if (!col || *col == Column::kName || value.is_null()) continue;
      if (!value.is_number()) parse_error(row, key, "expected a number");
      if (*col == Column::kN) {
        if (!value.is_number_integer()) {
          const double real = value.get<double>();
          if (real != std::floor(real)) parse_error(row, key, "n must be an integer");
          d.n = static_cast<std::int64_t>(real);
        } else {
          d.n = value.get<std::int64_t>();
        }
        continue;
      }
      const double v = value.get<double>();
      switch (*col) {
        case Column::kMean: d.mean = v; break;
        case Column::kSd: d.sd = v; break;
        case Column::kVar: d.variance = v; break;
        case Column::kSkew: d.skewness = v; break;
        case Column::kKurt: d.kurtosis = v; break;
        default: break;
      }
    }
    finish_descriptor(d, row);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back().push_back(c);
    }
  }
  if (quoted) throw StatsError(ErrorKind::kParse, "unterminated quoted CSV field");
  return cells;
}

std::vector<GroupDescriptor> parse_stats_input(std::string_view text, InputFormat format) {
  return format == InputFormat::kJson ? parse_json(text) : parse_csv(text);
}

}  // namespace momentdecomp
