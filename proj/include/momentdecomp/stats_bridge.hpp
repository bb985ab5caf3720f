#ifndef MOMENTDECOMP_STATS_BRIDGE_HPP_
#define MOMENTDECOMP_STATS_BRIDGE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "momentdecomp/power_sums.hpp"

namespace momentdecomp {

// Sample skewness / kurtosis families, with m_k = SP^k / n and s^2 the
// Bessel-corrected variance:
//   kFisherPearson          g1 = m3 / m2^(3/2),       g2 = m4 / m2^2
//   kMoment                 b1 = m3 / s^3,            b2 = m4 / s^4
//   kAdjustedFisherPearson  G1 = g1 sqrt(n(n-1))/(n-2),
//                           G2 = ((n+1)(g2-3)+6)(n-1)/((n-2)(n-3))  (excess)
enum class StatType { kMoment, kFisherPearson, kAdjustedFisherPearson };

struct MomentConventions {
  StatType skew_type = StatType::kFisherPearson;
  StatType kurt_type = StatType::kFisherPearson;
  bool kurt_excess = false;
};

/// A statistic family plus the excess-kurtosis default implied by a software
/// alias (empty for the canonical names).
struct ResolvedStatType {
  StatType type;
  std::optional<bool> excess;
};

/**
 * Resolves a convention name. Canonical names are "moment", "fisher-pearson"
 * and "adjusted-fisher-pearson"; matching ignores case and treats spaces,
 * underscores, dots and hyphens alike. Software aliases (sas, spss, excel,
 * minitab, bmdp, stata) resolve to a family and an excess default.
 * Throws StatsError(kInvalidArgument) for unknown names.
 */
ResolvedStatType resolve_stat_type(std::string_view name);
std::string_view stat_type_name(StatType type);

/// Smallest n for which the statistic is defined.
std::int64_t min_n_for_skew(StatType type);
std::int64_t min_n_for_kurt(StatType type);

/// Why a statistic is absent from a descriptor produced by from_power_sums().
struct AbsentStat {
  int order;  // 1 mean, 2 variance, 3 skewness, 4 kurtosis
  std::string reason;

  friend bool operator==(const AbsentStat&, const AbsentStat&) = default;
};

/**
 * Human-facing statistics for one group. A field may be present only when
 * every lower-order field is (kurtosis => skewness => variance => mean).
 * Variance may be given directly, through sd, or both (then sd^2 must agree).
 */
struct GroupDescriptor {
  std::string name;
  std::int64_t n = 0;
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> sd;
  std::optional<double> skewness;
  std::optional<double> kurtosis;
  std::vector<AbsentStat> absent;

  /// Highest k such that all statistics of order <= k are present.
  int order() const;
  std::optional<double> effective_variance() const;
  /// Empty string when the moment chain holds, otherwise a description.
  std::string chain_violation() const;
};

/// PowerSums with the highest order actually determined by the input.
/// Fields above `order` are zero and carry no information.
struct TruncatedSums {
  PowerSums sums;
  int order = 0;
};

double variance_of(const PowerSums& ps);
double skew_of(const PowerSums& ps, const MomentConventions& conv);
double kurt_of(const PowerSums& ps, const MomentConventions& conv);

TruncatedSums to_power_sums(const GroupDescriptor& desc, const MomentConventions& conv);

GroupDescriptor from_power_sums(const PowerSums& ps, const MomentConventions& conv,
                                int order, bool include_sd);

}  // namespace momentdecomp

#endif  // MOMENTDECOMP_STATS_BRIDGE_HPP_
