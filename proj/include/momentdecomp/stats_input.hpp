#ifndef MOMENTDECOMP_STATS_INPUT_HPP_
#define MOMENTDECOMP_STATS_INPUT_HPP_

#include <string_view>
#include <vector>

#include "momentdecomp/stats_bridge.hpp"

namespace momentdecomp {

enum class InputFormat { kCsv, kJson };

/**
 * Parses group statistics.
 *
 * CSV: a header drawn from name, n, mean, sd, var, skew, kurt (the R-style
 * spellings sample.mean etc. are accepted too), one group per row. Empty, NA
 * and NaN cells are absent values. JSON: an array of objects with the same
 * keys, or an object whose "rows" member is such an array; null is absent.
 *
 * Throws StatsError(kParse) for malformed text (with row and column),
 * StatsError(kInvalidArgument) for a broken moment chain or bad n, and
 * StatsError(kInconsistent) when sd and var disagree.
 */
std::vector<GroupDescriptor> parse_stats_input(std::string_view text, InputFormat format);

/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace momentdecomp

#endif  // MOMENTDECOMP_STATS_INPUT_HPP_
