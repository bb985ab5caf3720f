// mdecomp: pool group moment statistics, recover a missing subgroup, or
// summarize raw data streams.
//
// Exit codes: 0 success, 1 validation or inconsistency error, 2 I/O or parse
// error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "momentdecomp/decomp_engine.hpp"
#include "momentdecomp/error.hpp"
#include "momentdecomp/raw_stream.hpp"
#include "momentdecomp/render.hpp"
#include "momentdecomp/stats_input.hpp"

namespace md = momentdecomp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitParse = 2;

struct CliConfig {
  std::vector<std::string> inputs;
  bool raw = false;
  std::string input_format = "auto";
  std::string pooled;
  std::string skew_type = "fisher-pearson";
  std::string kurt_type = "fisher-pearson";
  std::optional<bool> kurt_excess;
  bool include_sd = false;
  std::string format = "table";
  int precision = md::kDefaultPrecision;
  int max_order = 4;
  bool dump_sums = false;
  bool validate_only = false;
};

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_input(const std::string& path) {
  if (path == "-") return read_all(std::cin);
  std::ifstream file(path, std::ios::binary);
  if (!file) throw md::StatsError(md::ErrorKind::kIo, "cannot open '" + path + "'");
  return read_all(file);
}

md::InputFormat detect_format(const CliConfig& cfg, const std::string& path,
                              const std::string& text) {
  if (cfg.input_format == "csv") return md::InputFormat::kCsv;
  if (cfg.input_format == "json") return md::InputFormat::kJson;
  if (path.ends_with(".json")) return md::InputFormat::kJson;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    return md::InputFormat::kJson;
  }
  return md::InputFormat::kCsv;
}

md::MomentConventions make_conventions(const CliConfig& cfg) {
  const auto skew = md::resolve_stat_type(cfg.skew_type);
  const auto kurt = md::resolve_stat_type(cfg.kurt_type);
  md::MomentConventions conv;
  conv.skew_type = skew.type;
  conv.kurt_type = kurt.type;
  conv.kurt_excess = cfg.kurt_excess.value_or(kurt.excess.value_or(false));
  return conv;
}

md::OutputFormat output_format(const std::string& name) {
  if (name == "csv") return md::OutputFormat::kCsv;
  if (name == "json") return md::OutputFormat::kJson;
  return md::OutputFormat::kTable;
}

int run_stats(const CliConfig& cfg) {
  const std::string path = cfg.inputs.empty() ? "-" : cfg.inputs.front();
  if (cfg.inputs.size() > 1) {
    throw md::StatsError(md::ErrorKind::kInvalidArgument,
                         "statistics mode takes a single input table");
  }
  const std::string text = read_input(path);

  md::DecompRequest req;
  req.groups = md::parse_stats_input(text, detect_format(cfg, path, text));
  req.conventions = make_conventions(cfg);
  if (!cfg.pooled.empty()) req.pooled = cfg.pooled;
  req.include_sd = cfg.include_sd;

  if (cfg.validate_only) {
    const auto violations = md::validate_request(req);
    for (const auto& v : violations) std::cout << v.message << '\n';
    return violations.empty() ? kExitOk : kExitInvalid;
  }

  const auto table = md::sample_decomp(req);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << md::render_table(table, {output_format(cfg.format), cfg.precision});
  return kExitOk;
}

void dump_sums(const std::string& label, const md::PowerSumsN& sums) {
  std::ostringstream line;
  line.precision(17);
  line << "# " << label << ": n=" << sums.n() << " mean=" << sums.mean();
  for (int p = 2; p <= sums.max_order(); ++p) line << " SP" << p << '=' << sums.sp(p);
  std::cout << line.str() << '\n';
}

int run_raw(const CliConfig& cfg) {
  const auto conv = make_conventions(cfg);
  std::vector<std::string> paths = cfg.inputs;
  if (paths.empty()) paths.push_back("-");

  md::DecompTable table;
  table.order = 4;
  table.include_sd = cfg.include_sd;
  std::vector<md::RawSummary> summaries;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    md::RawSummary raw{md::empty(), md::PowerSumsN(cfg.max_order)};
    if (paths[i] == "-") {
      raw = md::compute_raw(std::cin, cfg.max_order);
    } else {
      std::ifstream file(paths[i]);
      if (!file) throw md::StatsError(md::ErrorKind::kIo, "cannot open '" + paths[i] + "'");
      raw = md::compute_raw(file, cfg.max_order);
    }
    const std::string label = paths.size() == 1 ? "1" : paths[i];
    auto desc = md::describe_raw(raw, conv, cfg.include_sd);
    desc.name = label;
    table.rows.push_back({label, md::RowKind::kInput, desc});
    summaries.push_back(std::move(raw));
  }

  std::optional<md::PowerSumsN> pooled_general;
  if (summaries.size() > 1) {
    std::vector<md::PowerSums> parts;
    std::vector<md::PowerSumsN> general;
    for (const auto& s : summaries) {
      parts.push_back(s.sums);
      general.push_back(s.general);
    }
    md::RawSummary pooled{md::pool_many(parts), md::gp_merge(general)};
    auto desc = md::describe_raw(pooled, conv, cfg.include_sd);
    desc.name = md::kPooledLabel;
    table.rows.push_back({md::kPooledLabel, md::RowKind::kPooled, desc});
    pooled_general = pooled.general;
  }

  std::cout << md::render_table(table, {output_format(cfg.format), cfg.precision});
  if (cfg.dump_sums) {
    for (std::size_t i = 0; i < summaries.size(); ++i) {
      dump_sums(table.rows[i].label, summaries[i].general);
    }
    if (pooled_general) dump_sums(md::kPooledLabel, *pooled_general);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pool or decompose sample moments (mean, variance, skewness, kurtosis)"};
  CliConfig cfg;

  app.add_option("inputs", cfg.inputs,
                 "Input files ('-' or none for stdin). Statistics mode: one CSV/JSON "
                 "table. Raw mode: one group of numbers per file");
  app.add_flag("--raw", cfg.raw, "Inputs are raw observations instead of statistics");
  app.add_option("--input-format", cfg.input_format, "csv, json or auto")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--pooled", cfg.pooled,
                 "Group (1-based index or name) that is the pooled sample; the missing "
                 "subgroup is reported as --other--");
  app.add_option("--skew-type", cfg.skew_type,
                 "moment, fisher-pearson, adjusted-fisher-pearson or a software alias")
      ->capture_default_str();
  app.add_option("--kurt-type", cfg.kurt_type,
                 "moment, fisher-pearson, adjusted-fisher-pearson or a software alias")
      ->capture_default_str();
  app.add_flag("--kurt-excess,!--no-kurt-excess", cfg.kurt_excess,
               "Kurtosis values are excess kurtosis (raw - 3)");
  app.add_flag("--include-sd", cfg.include_sd, "Add a standard deviation column");
  app.add_option("--format", cfg.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--precision", cfg.precision, "Significant digits in table output")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
  app.add_option("--max-order", cfg.max_order, "Highest power sum kept in raw mode")
      ->check(CLI::Range(2, 16))
      ->capture_default_str();
  app.add_flag("--dump-sums", cfg.dump_sums, "Raw mode: print the centered power sums");
  app.add_flag("--validate", cfg.validate_only, "Only check the input table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    return cfg.raw ? run_raw(cfg) : run_stats(cfg);
  } catch (const md::StatsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool parse = e.kind() == md::ErrorKind::kParse || e.kind() == md::ErrorKind::kIo;
    return parse ? kExitParse : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
}
