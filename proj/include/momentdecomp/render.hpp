#ifndef MOMENTDECOMP_RENDER_HPP_
#define MOMENTDECOMP_RENDER_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momentdecomp/decomp_engine.hpp"

namespace momentdecomp {

enum class OutputFormat { kTable, kCsv, kJson };

inline constexpr int kDefaultPrecision = 7;

struct RenderOptions {
  OutputFormat format = OutputFormat::kTable;
  // Significant digits for the table format; csv and json are always
  // shortest round-trip.
  int precision = kDefaultPrecision;
};

/**
 * Formats one numeric column the way R prints a data frame column: every
 * value is shown to `digits` significant digits, trailing zeros are dropped,
 * and the whole column shares the largest number of decimals any entry
 * needs. Falls back to scientific notation when that is narrower. Absent
 * values print as "NA".
 */
std::vector<std::string> format_column(std::span<const std::optional<double>> values,
                                       int digits);

/// Shortest decimal string that parses back to exactly `x`.
std::string shortest_repr(double x);

std::string render_table(const DecompTable& table, const RenderOptions& options);

}  // namespace momentdecomp

#endif  // MOMENTDECOMP_RENDER_HPP_
