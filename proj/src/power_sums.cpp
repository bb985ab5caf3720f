#include "momentdecomp/power_sums.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "momentdecomp/error.hpp"

namespace momentdecomp {

namespace {

void require_finite(double x) {
  if (!std::isfinite(x)) {
    throw StatsError(ErrorKind::kInvalidArgument, "observation is not finite");
  }
}

// mean + delta as an unevaluated sum hi + lo (Knuth two-sum), with the
// residual of the old mean folded in.
void add_to_mean(PowerSums& out, double mean, double residual, double delta) {
  const double hi = mean + delta;
  const double back = hi - mean;
  const double err = (mean - (hi - back)) + (delta - back);
  const double lo = err + residual;
  out.mean = hi + lo;
  out.mean_residual = lo - (out.mean - hi);
}

// Clamps a small negative even-order sum to zero or rejects it.
double clamp_even(double value, double scale, int order) {
  if (value >= 0.0) return value;
  if (value >= -kNegativityTolerance * scale) return 0.0;
  std::ostringstream msg;
  msg << "inconsistent group statistics: remainder has negative order-" << order
      << " central sum (" << value << ")";
  throw StatsError(ErrorKind::kInconsistent, msg.str());
}

}  // namespace

PowerSums empty() { return PowerSums{}; }

PowerSums from_value(double x) {
  require_finite(x);
  return PowerSums{1, x, 0.0, 0.0, 0.0};
}

PowerSums push(const PowerSums& acc, double x) {
  require_finite(x);
  const double n = static_cast<double>(acc.n);
  const double n1 = n + 1.0;
  const double d = (acc.mean - x) + acc.mean_residual;
  const double d2 = d * d;

  PowerSums out;
  out.n = acc.n + 1;
  add_to_mean(out, acc.mean, acc.mean_residual, -d / n1);
  out.ss = acc.ss + n / n1 * d2;
  out.sc = acc.sc + 3.0 * acc.ss / n1 * d - n * (n - 1.0) / (n1 * n1) * d2 * d;
  out.sq = acc.sq + 4.0 * acc.sc / n1 * d + 6.0 * acc.ss / (n1 * n1) * d2 +
           n * (1.0 + n * n * n) / (n1 * n1 * n1 * n1) * d2 * d2;
  return out;
}

PowerSums from_sequence(std::span<const double> xs) {
  PowerSums acc = empty();
  for (double x : xs) acc = push(acc, x);
  return acc;
}

PowerSums merge2(const PowerSums& a, const PowerSums& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;

  const double n1 = static_cast<double>(a.n);
  const double n2 = static_cast<double>(b.n);
  const double n = n1 + n2;
  const double d = (a.mean - b.mean) + (a.mean_residual - b.mean_residual);
  const double d2 = d * d;

  PowerSums out;
  out.n = a.n + b.n;
  add_to_mean(out, a.mean, a.mean_residual, -n2 / n * d);
  out.ss = a.ss + b.ss + n1 * n2 / n * d2;
  out.sc = a.sc + b.sc + 3.0 * (n2 * a.ss - n1 * b.ss) / n * d +
           (n1 * n2 * n2 * n2 - n2 * n1 * n1 * n1) / (n * n * n) * d2 * d;
  out.sq = a.sq + b.sq + 4.0 * (n2 * a.sc - n1 * b.sc) / n * d +
           6.0 * (n2 * n2 * a.ss + n1 * n1 * b.ss) / (n * n) * d2 +
           (n1 * n2 * n2 * n2 * n2 + n2 * n1 * n1 * n1 * n1) / (n * n * n * n) *
               d2 * d2;
  return out;
}

SubtractResult subtract_checked(const PowerSums& pooled, const PowerSums& known,
                                int max_order) {
  if (max_order < 0 || max_order > 4) {
    throw StatsError(ErrorKind::kInvalidArgument, "max_order must be in 0..4");
  }
  if (pooled.n <= known.n) {
    throw StatsError(ErrorKind::kNoRemainder,
                     "no remainder group: pooled n must exceed the known n");
  }

  SubtractResult result;
  PowerSums& rem = result.remainder;
  rem.n = pooled.n - known.n;

  const double np = static_cast<double>(pooled.n);
  const double n2 = static_cast<double>(known.n);
  const double nr = np - n2;
  const double d = (known.mean - pooled.mean) + (known.mean_residual - pooled.mean_residual);
  const double d2 = d * d;

  if (max_order >= 1) add_to_mean(rem, pooled.mean, pooled.mean_residual, -n2 / nr * d);
  if (max_order >= 2) {
    rem.ss = pooled.ss - known.ss - n2 * np / nr * d2;
  }
  if (max_order >= 3) {
    rem.sc = pooled.sc - known.sc - 3.0 * (np * known.ss - n2 * pooled.ss) / nr * d -
             (np * n2 * n2 + n2 * np * np) / (nr * nr) * d2 * d;
  }
  if (max_order >= 4) {
    rem.sq = pooled.sq - known.sq - 4.0 * (np * known.sc - n2 * pooled.sc) / nr * d -
             6.0 * (np * np * known.ss - n2 * n2 * pooled.ss) / (nr * nr) * d2 -
             (n2 * np * np * np + n2 * n2 * np * np + n2 * n2 * n2 * np) /
                 (nr * nr * nr) * d2 * d2;
  }

  const double ss_scale = std::max(pooled.ss + known.ss, 1.0);
  const double sq_scale = std::max(pooled.sq + known.sq, 1.0);
  rem.ss = clamp_even(rem.ss, ss_scale, 2);
  rem.sq = clamp_even(rem.sq, sq_scale, 4);

  if (rem.n == 1) {
    // A single observation has no spread; anything beyond rounding is an error.
    if (rem.ss > kNegativityTolerance * ss_scale) {
      throw StatsError(ErrorKind::kInconsistent,
                       "inconsistent group statistics: single-observation remainder "
                       "has nonzero order-2 central sum");
    }
    if (rem.sq > kNegativityTolerance * sq_scale) {
      throw StatsError(ErrorKind::kInconsistent,
                       "inconsistent group statistics: single-observation remainder "
                       "has nonzero order-4 central sum");
    }
    rem.ss = rem.sc = rem.sq = 0.0;
  }

  if (max_order >= 4) {
    if (rem.sc * rem.sc > rem.ss * rem.sq * (1.0 + kCauchySchwarzSlack) &&
        std::abs(rem.sc) > kNegativityTolerance * std::sqrt(ss_scale * sq_scale)) {
      result.warnings.push_back(
          "remainder violates sc^2 <= ss*sq (order-3 sum inconsistent with orders 2 and 4)");
    }
    const double nr_sq = static_cast<double>(rem.n) * rem.sq;
    if (nr_sq * (1.0 + kCauchySchwarzSlack) < rem.ss * rem.ss) {
      result.warnings.push_back(
          "remainder violates n*sq >= ss^2 (order-4 sum inconsistent with order 2)");
    }
  }
  return result;
}

PowerSums subtract(const PowerSums& pooled, const PowerSums& known) {
  return subtract_checked(pooled, known).remainder;
}

PowerSums pool_many(std::span<const PowerSums> groups) {
  std::int64_t n_total = 0;
  for (const auto& g : groups) n_total += g.n;
  if (n_total == 0) return empty();

  // The between-group terms are shift-invariant, so means are taken relative
  // to a reference mean; this keeps sum(n_i * mean_i^2) from swamping the
  // result when every group sits far from zero.
  double ref = 0.0;
  double ref_residual = 0.0;
  for (const auto& g : groups) {
    if (g.n > 0) {
      ref = g.mean;
      ref_residual = g.mean_residual;
      break;
    }
  }

  const double n = static_cast<double>(n_total);
  double weighted = 0.0;     // sum n_i (mean_i - ref)
  double weighted_sq = 0.0;  // sum n_i (mean_i - ref)^2
  double ss = 0.0, sc = 0.0, sq = 0.0;
  for (const auto& g : groups) {
    if (g.n == 0) continue;
    const double ni = static_cast<double>(g.n);
    const double c = (g.mean - ref) + (g.mean_residual - ref_residual);
    weighted += ni * c;
    weighted_sq += ni * c * c;
    ss += g.ss;
    sc += g.sc;
    sq += g.sq;
  }
  const double offset = weighted / n;

  PowerSums out;
  out.n = n_total;
  add_to_mean(out, ref, ref_residual, offset);
  out.ss = ss + weighted_sq - weighted * weighted / n;
  for (const auto& g : groups) {
    if (g.n == 0) continue;
    const double ni = static_cast<double>(g.n);
    const double delta = ((g.mean - ref) + (g.mean_residual - ref_residual)) - offset;
    const double delta2 = delta * delta;
    sc += 3.0 * g.ss * delta + ni * delta2 * delta;
    sq += 4.0 * g.sc * delta + 6.0 * g.ss * delta2 + ni * delta2 * delta2;
  }
  out.sc = sc;
  out.sq = sq;
  if (out.ss < 0.0) out.ss = 0.0;
  return out;
}

}  // namespace momentdecomp
