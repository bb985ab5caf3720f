#include "momentdecomp/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "momentdecomp/error.hpp"

namespace momentdecomp {

namespace {

struct Column {
  const char* table_header;
  const char* key;  // csv header and json key
  std::function<std::optional<double>(const GroupDescriptor&)> get;
};

std::vector<Column> present_columns(const DecompTable& table) {
  const std::vector<Column> all{
      {"sample.mean", "mean", [](const GroupDescriptor& d) { return d.mean; }},
      {"sample.sd", "sd", [](const GroupDescriptor& d) { return d.sd; }},
      {"sample.var", "var", [](const GroupDescriptor& d) { return d.variance; }},
      {"sample.skew", "skew", [](const GroupDescriptor& d) { return d.skewness; }},
      {"sample.kurt", "kurt", [](const GroupDescriptor& d) { return d.kurtosis; }},
  };
  std::vector<Column> out;
  for (const auto& col : all) {
    const bool any = std::any_of(table.rows.begin(), table.rows.end(),
                                 [&](const DecompRow& r) { return col.get(r.stats).has_value(); });
    if (any) out.push_back(col);
  }
  return out;
}

// Decimal exponent and number of significant digits (<= digits, trailing
// zeros dropped) of |x| rounded to `digits` significant digits.
struct SigInfo {
  int exponent = 0;
  int nsig = 1;
};

SigInfo sig_info(double x, int digits) {
  if (x == 0.0) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, std::abs(x));
  const std::string s(buf);
  const auto e_pos = s.find('e');
  std::string mantissa;
  for (std::size_t i = 0; i < e_pos; ++i) {
    if (s[i] != '.') mantissa.push_back(s[i]);
  }
  while (mantissa.size() > 1 && mantissa.back() == '0') mantissa.pop_back();
  return {std::stoi(s.substr(e_pos + 1)), static_cast<int>(mantissa.size())};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

const char* kind_name(RowKind kind) {
  switch (kind) {
    case RowKind::kInput:
      return "input";
    case RowKind::kOther:
      return "other";
    case RowKind::kPooled:
      return "pooled";
  }
  return "input";
}

std::string render_text(const DecompTable& table, int precision) {
  const auto cols = present_columns(table);

  // Cells column by column: label, n, then statistics.
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> headers;
  std::vector<std::string> labels;
  std::vector<std::string> counts;
  for (const auto& row : table.rows) {
    labels.push_back(row.label);
    counts.push_back(std::to_string(row.stats.n));
  }
  headers.push_back("n");
  cells.push_back(counts);
  for (const auto& col : cols) {
    std::vector<std::optional<double>> values;
    for (const auto& row : table.rows) values.push_back(col.get(row.stats));
    headers.push_back(col.table_header);
    cells.push_back(format_column(values, precision));
  }

  std::size_t label_width = 0;
  for (const auto& l : labels) label_width = std::max(label_width, l.size());
  std::vector<std::size_t> widths;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::size_t w = headers[c].size();
    for (const auto& cell : cells[c]) w = std::max(w, cell.size());
    widths.push_back(w);
  }

  std::ostringstream out;
  const auto pad_left = [](const std::string& s, std::size_t w) {
    return std::string(w - std::min(w, s.size()), ' ') + s;
  };
  out << std::string(label_width, ' ');
  for (std::size_t c = 0; c < cells.size(); ++c) out << ' ' << pad_left(headers[c], widths[c]);
  out << '\n';
  for (std::size_t r = 0; r < labels.size(); ++r) {
    out << labels[r] << std::string(label_width - labels[r].size(), ' ');
    for (std::size_t c = 0; c < cells.size(); ++c) out << ' ' << pad_left(cells[c][r], widths[c]);
    out << '\n';
  }
  return out.str();
}

std::string render_csv(const DecompTable& table) {
  const auto cols = present_columns(table);
  std::ostringstream out;
  out << "name,n";
  for (const auto& col : cols) out << ',' << col.key;
  out << '\n';
  for (const auto& row : table.rows) {
    out << csv_escape(row.label) << ',' << row.stats.n;
    for (const auto& col : cols) {
      out << ',';
      if (auto v = col.get(row.stats)) out << shortest_repr(*v);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_json(const DecompTable& table) {
  using nlohmann::ordered_json;
  const auto cols = present_columns(table);
  ordered_json doc;
  doc["order"] = table.order;
  doc["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r;
    r["name"] = row.label;
    r["kind"] = kind_name(row.kind);
    r["n"] = row.stats.n;
    for (const auto& col : cols) {
      if (auto v = col.get(row.stats)) r[col.key] = *v;
    }
    if (!row.stats.absent.empty()) {
      ordered_json absent = ordered_json::array();
      for (const auto& a : row.stats.absent) {
        absent.push_back({{"order", a.order}, {"reason", a.reason}});
      }
      r["absent"] = absent;
    }
    doc["rows"].push_back(std::move(r));
  }
  doc["warnings"] = table.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace

std::vector<std::string> format_column(std::span<const std::optional<double>> values,
                                       int digits) {
  if (digits < 1 || digits > 17) {
    throw StatsError(ErrorKind::kInvalidArgument, "precision must be in 1..17");
  }
  bool any = false;
  bool negative = false;
  int max_left = 1;       // integer digits in fixed notation
  int max_right = 0;      // decimals in fixed notation
  int max_sig = 1;        // significant digits in scientific notation
  int max_exp_abs = 0;
  for (const auto& v : values) {
    if (!v) continue;
    any = true;
    const auto info = sig_info(*v, digits);
    negative = negative || *v < 0.0;
    max_left = std::max(max_left, info.exponent >= 0 ? info.exponent + 1 : 1);
    max_right = std::max(max_right, info.nsig - info.exponent - 1);
    max_sig = std::max(max_sig, info.nsig);
    max_exp_abs = std::max(max_exp_abs, std::abs(info.exponent));
  }

  std::vector<std::string> out;
  out.reserve(values.size());
  if (!any) {
    out.assign(values.size(), "NA");
    return out;
  }
  const int neg = negative ? 1 : 0;
  const int fixed_width = neg + max_left + (max_right > 0 ? max_right + 1 : 0);
  const int sci_width = neg + (max_sig > 1 ? max_sig + 1 : max_sig) + (max_exp_abs >= 100 ? 5 : 4);
  const bool fixed = fixed_width <= sci_width;

  char buf[512];
  for (const auto& v : values) {
    if (!v) {
      out.emplace_back("NA");
    } else if (fixed) {
      std::snprintf(buf, sizeof buf, "%.*f", max_right, *v);
      out.emplace_back(buf);
    } else {
      std::snprintf(buf, sizeof buf, "%.*e", max_sig - 1, *v);
      out.emplace_back(buf);
    }
  }
  return out;
}

std::string shortest_repr(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string render_table(const DecompTable& table, const RenderOptions& options) {
  switch (options.format) {
    case OutputFormat::kCsv:
      return render_csv(table);
    case OutputFormat::kJson:
      return render_json(table);
    case OutputFormat::kTable:
      break;
  }
  return render_text(table, options.precision);
}

}  // namespace momentdecomp
