#ifndef MOMENTDECOMP_RAW_STREAM_HPP_
#define MOMENTDECOMP_RAW_STREAM_HPP_

#include <istream>
#include <span>

#include "momentdecomp/general_powers.hpp"
#include "momentdecomp/power_sums.hpp"
#include "momentdecomp/stats_bridge.hpp"

namespace momentdecomp {

struct RawSummary {
  PowerSums sums;       // order-4 accumulator
  PowerSumsN general;   // orders 2..max_order
};

/**
 * Folds a whitespace-separated stream of numbers in one pass with constant
 * memory. Throws StatsError(kParse) naming the line of the first bad token.
 * An empty stream yields n = 0.
 */
RawSummary compute_raw(std::istream& in, int max_order);

/// Descriptor for a raw summary: statistics up to min(4, max_order).
GroupDescriptor describe_raw(const RawSummary& raw, const MomentConventions& conv,
                             bool include_sd);

/// Splits xs into `chunks` contiguous pieces folded on separate threads and
/// merged in order.
PowerSums parallel_fold(std::span<const double> xs, unsigned chunks);
PowerSumsN parallel_gp_fold(std::span<const double> xs, int max_order, unsigned chunks);

}  // namespace momentdecomp

#endif  // MOMENTDECOMP_RAW_STREAM_HPP_
