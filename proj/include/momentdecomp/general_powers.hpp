#ifndef MOMENTDECOMP_GENERAL_POWERS_HPP_
#define MOMENTDECOMP_GENERAL_POWERS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "momentdecomp/power_sums.hpp"

namespace momentdecomp {

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 16;

/**
 * Count, mean and centered power sums SP^2..SP^P for an arbitrary maximum
 * order P in [kMinOrder, kMaxOrder]. SP^0 = n and SP^1 = 0 are implied.
 */
class PowerSumsN {
 public:
  /// Empty group of maximum order `max_order`.
  explicit PowerSumsN(int max_order);
  PowerSumsN(std::int64_t n, double mean, std::vector<double> sp);

  std::int64_t n() const { return n_; }
  double mean() const { return mean_; }
  int max_order() const { return static_cast<int>(sp_.size()) + 1; }

  /// SP^p for 0 <= p <= max_order(), including the implied orders 0 and 1.
  double sp(int p) const;
  /// Stored sums, index 0 holds SP^2.
  std::span<const double> stored() const { return sp_; }

  /// Orders 2..4 as a PowerSums. Requires max_order() >= 4.
  PowerSums truncate4() const;
  static PowerSumsN from_power_sums(const PowerSums& ps);

  friend bool operator==(const PowerSumsN&, const PowerSumsN&) = default;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  std::vector<double> sp_;
};

/// Exact binomial coefficient C(p, s) for 0 <= s <= p <= kMaxOrder.
double binomial(int p, int s);

PowerSumsN gp_singleton(double x, int max_order);
PowerSumsN gp_from_sequence(std::span<const double> xs, int max_order);

/// Pools any number of groups with the binomial offset expansion. All groups
/// must share max_order; the list must be nonempty.
PowerSumsN gp_merge(std::span<const PowerSumsN> groups);

PowerSumsN gp_push(const PowerSumsN& acc, double x);

/**
 * Remainder group of `pooled` after removing every group in `known`.
 *
 * Solved order by order: in the pooled expansion the remainder's SP^p enters
 * with unit coefficient and every other term involves known groups or lower
 * remainder orders.
 */
PowerSumsN gp_subtract(const PowerSumsN& pooled, std::span<const PowerSumsN> known);

}  // namespace momentdecomp

#endif  // MOMENTDECOMP_GENERAL_POWERS_HPP_
