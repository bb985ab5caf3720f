#ifndef MOMENTDECOMP_POWER_SUMS_HPP_
#define MOMENTDECOMP_POWER_SUMS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace momentdecomp {

/**
 * Mergeable summary of one group of observations: the count, the mean and
 * the centered sums of powers
 *
 * ```
 * ss = sum (x_i - mean)^2,  sc = sum (x_i - mean)^3,  sq = sum (x_i - mean)^4.
 * ```
 *
 * Storing the mean rather than the raw sum keeps single-point updates
 * shift-invariant. The update operations also carry the rounding error of the
 * mean in `mean_residual` (the mean is mean + mean_residual), so offsets such
 * as (mean - x) stay accurate when the data sit far from zero. Values built
 * by hand may leave it at zero.
 *
 * An empty group has n = 0 and every field zero; it is the identity of
 * merge2().
 */
struct PowerSums {
  std::int64_t n = 0;
  double mean = 0.0;
  double ss = 0.0;
  double sc = 0.0;
  double sq = 0.0;
  double mean_residual = 0.0;

  friend bool operator==(const PowerSums&, const PowerSums&) = default;
};

/// Relative tolerance below which a negative ss/sq from subtract() is rounding.
inline constexpr double kNegativityTolerance = 1e-9;

/// Relative slack on sc^2 <= ss*sq before subtract() reports a warning.
inline constexpr double kCauchySchwarzSlack = 1e-6;

PowerSums empty();

/// Throws StatsError(kInvalidArgument) if x is not finite.
PowerSums from_value(double x);

/// Adds one observation using the single-point update (old n, old mean, old sums).
PowerSums push(const PowerSums& acc, double x);

/// Left fold of push() starting from empty().
PowerSums from_sequence(std::span<const double> xs);

/// Summary of the concatenation of two groups.
PowerSums merge2(const PowerSums& a, const PowerSums& b);

struct SubtractResult {
  PowerSums remainder;
  // Non-fatal findings, e.g. sc^2 exceeding ss*sq beyond kCauchySchwarzSlack.
  std::vector<std::string> warnings;
};

/**
 * Recovers the remainder group of `pooled` once `known` is taken out.
 *
 * Only orders up to `max_order` (1..4) are computed and validated; higher
 * fields of the result are zero. Negative ss/sq within kNegativityTolerance of
 * the operand scale are clamped to zero, larger ones throw
 * StatsError(kInconsistent). Throws StatsError(kNoRemainder) when
 * pooled.n <= known.n.
 */
SubtractResult subtract_checked(const PowerSums& pooled, const PowerSums& known,
                                int max_order = 4);

/// subtract_checked() discarding warnings.
PowerSums subtract(const PowerSums& pooled, const PowerSums& known);

/// One-step pooling of any number of groups. Empty input gives empty().
PowerSums pool_many(std::span<const PowerSums> groups);

}  // namespace momentdecomp

#endif  // MOMENTDECOMP_POWER_SUMS_HPP_
