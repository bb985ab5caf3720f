#include "momentdecomp/stats_bridge.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include "momentdecomp/error.hpp"

namespace momentdecomp {

namespace {

constexpr const char* kReasonEmpty = "empty group";
constexpr const char* kReasonInsufficientN = "insufficient n";
constexpr const char* kReasonZeroVariance = "zero variance";

// Relative slack on n*sq >= ss^2 when inverting a supplied kurtosis.
constexpr double kKurtosisSlack = 1e-6;

std::string normalize_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == ' ' || c == '_' || c == '.' || c == '-') {
      if (!out.empty() && out.back() != '-') out.push_back('-');
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

struct Alias {
  const char* name;
  StatType type;
  std::optional<bool> excess;
};

constexpr std::array<Alias, 9> kAliases{{
    {"moment", StatType::kMoment, std::nullopt},
    {"fisher-pearson", StatType::kFisherPearson, std::nullopt},
    {"adjusted-fisher-pearson", StatType::kAdjustedFisherPearson, std::nullopt},
    // Statistical software defaults.
    {"sas", StatType::kAdjustedFisherPearson, true},
    {"spss", StatType::kAdjustedFisherPearson, true},
    {"excel", StatType::kAdjustedFisherPearson, true},
    {"minitab", StatType::kMoment, true},
    {"bmdp", StatType::kMoment, true},
    {"stata", StatType::kFisherPearson, false},
}};

void require_defined(const PowerSums& ps, std::int64_t min_n, const char* what) {
  if (ps.n < min_n) {
    std::ostringstream msg;
    msg << what << " undefined: insufficient n (" << ps.n << " < " << min_n << ")";
    throw StatsError(ErrorKind::kUndefined, msg.str());
  }
  if (ps.ss <= 0.0) {
    throw StatsError(ErrorKind::kUndefined,
                     std::string(what) + " undefined (zero variance)");
  }
}

// Raw Fisher-Pearson moments g1 = m3/m2^1.5 and g2 = m4/m2^2.
double raw_g1(const PowerSums& ps) {
  const double n = static_cast<double>(ps.n);
  const double m2 = ps.ss / n;
  return (ps.sc / n) / (m2 * std::sqrt(m2));
}

double raw_g2(const PowerSums& ps) {
  const double n = static_cast<double>(ps.n);
  const double m2 = ps.ss / n;
  return (ps.sq / n) / (m2 * m2);
}

// Multiplier turning g1 into the requested skewness family.
double skew_factor(StatType type, double n) {
  switch (type) {
    case StatType::kFisherPearson:
      return 1.0;
    case StatType::kMoment: {
      const double r = (n - 1.0) / n;
      return r * std::sqrt(r);
    }
    case StatType::kAdjustedFisherPearson:
      return std::sqrt(n * (n - 1.0)) / (n - 2.0);
  }
  return 1.0;
}

// g2 -> raw kurtosis of the requested family.
double raw_kurt_from_g2(StatType type, double g2, double n) {
  switch (type) {
    case StatType::kFisherPearson:
      return g2;
    case StatType::kMoment: {
      const double r = (n - 1.0) / n;
      return g2 * r * r;
    }
    case StatType::kAdjustedFisherPearson:
      return ((n + 1.0) * (g2 - 3.0) + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0)) + 3.0;
  }
  return g2;
}

double g2_from_raw_kurt(StatType type, double raw, double n) {
  switch (type) {
    case StatType::kFisherPearson:
      return raw;
    case StatType::kMoment: {
      const double r = (n - 1.0) / n;
      return raw / (r * r);
    }
    case StatType::kAdjustedFisherPearson:
      return ((raw - 3.0) * (n - 2.0) * (n - 3.0) / (n - 1.0) - 6.0) / (n + 1.0) + 3.0;
  }
  return raw;
}

}  // namespace

ResolvedStatType resolve_stat_type(std::string_view name) {
  const std::string key = normalize_name(name);
  for (const auto& alias : kAliases) {
    if (key == alias.name) return {alias.type, alias.excess};
  }
  throw StatsError(ErrorKind::kInvalidArgument,
                   "unknown statistic type '" + std::string(name) +
                       "' (expected moment, fisher-pearson, adjusted-fisher-pearson "
                       "or a software alias)");
}

std::string_view stat_type_name(StatType type) {
  switch (type) {
    case StatType::kMoment:
      return "moment";
    case StatType::kFisherPearson:
      return "fisher-pearson";
    case StatType::kAdjustedFisherPearson:
      return "adjusted-fisher-pearson";
  }
  return "unknown";
}

std::int64_t min_n_for_skew(StatType type) {
  return type == StatType::kAdjustedFisherPearson ? 3 : 2;
}

std::int64_t min_n_for_kurt(StatType type) {
  return type == StatType::kAdjustedFisherPearson ? 4 : 2;
}

int GroupDescriptor::order() const {
  if (!mean) return 0;
  if (!effective_variance()) return 1;
  if (!skewness) return 2;
  if (!kurtosis) return 3;
  return 4;
}

std::optional<double> GroupDescriptor::effective_variance() const {
  if (variance) return variance;
  if (sd) return *sd * *sd;
  return std::nullopt;
}

std::string GroupDescriptor::chain_violation() const {
  const bool has_var = effective_variance().has_value();
  const std::array<std::pair<const char*, bool>, 4> chain{{
      {"mean", mean.has_value()},
      {"var", has_var},
      {"skew", skewness.has_value()},
      {"kurt", kurtosis.has_value()},
  }};
  for (int k = 3; k >= 1; --k) {
    if (!chain[k].second) continue;
    std::string missing;
    for (int j = 0; j < k; ++j) {
      if (chain[j].second) continue;
      if (!missing.empty()) missing += "/";
      missing += chain[j].first;
    }
    if (!missing.empty()) {
      return std::string("moment chain broken: ") + chain[k].first + " without " + missing;
    }
  }
  return {};
}

double variance_of(const PowerSums& ps) {
  if (ps.n < 2) {
    throw StatsError(ErrorKind::kUndefined, "variance undefined: n < 2");
  }
  return ps.ss / static_cast<double>(ps.n - 1);
}

double skew_of(const PowerSums& ps, const MomentConventions& conv) {
  require_defined(ps, min_n_for_skew(conv.skew_type), "skewness");
  return raw_g1(ps) * skew_factor(conv.skew_type, static_cast<double>(ps.n));
}

double kurt_of(const PowerSums& ps, const MomentConventions& conv) {
  require_defined(ps, min_n_for_kurt(conv.kurt_type), "kurtosis");
  const double raw =
      raw_kurt_from_g2(conv.kurt_type, raw_g2(ps), static_cast<double>(ps.n));
  return conv.kurt_excess ? raw - 3.0 : raw;
}

TruncatedSums to_power_sums(const GroupDescriptor& desc, const MomentConventions& conv) {
  if (desc.n <= 0) {
    throw StatsError(ErrorKind::kInvalidArgument,
                     "group '" + desc.name + "': n must be positive");
  }
  if (auto broken = desc.chain_violation(); !broken.empty()) {
    throw StatsError(ErrorKind::kInvalidArgument, "group '" + desc.name + "': " + broken);
  }
  const auto fail = [&](ErrorKind kind, const std::string& what) {
    throw StatsError(kind, "group '" + desc.name + "': " + what);
  };

  TruncatedSums out;
  out.sums.n = desc.n;
  if (!desc.mean) return out;
  if (!std::isfinite(*desc.mean)) fail(ErrorKind::kInvalidArgument, "mean is not finite");
  out.sums.mean = *desc.mean;
  out.order = 1;

  const auto var = desc.effective_variance();
  const double n = static_cast<double>(desc.n);
  if (!var) {
    // A single observation has all central sums zero.
    if (desc.n == 1) out.order = 4;
    return out;
  }
  if (!std::isfinite(*var)) fail(ErrorKind::kInvalidArgument, "variance is not finite");
  if (*var < 0.0 || (desc.sd && *desc.sd < 0.0)) {
    fail(ErrorKind::kInconsistent, "inconsistent statistics: negative variance");
  }
  if (desc.n < 2) fail(ErrorKind::kUndefined, "variance supplied but insufficient n (n < 2)");
  out.sums.ss = *var * (n - 1.0);
  out.order = 2;

  if (out.sums.ss == 0.0) {
    if (desc.skewness || desc.kurtosis) {
      fail(ErrorKind::kInconsistent,
           "inconsistent statistics: skewness/kurtosis supplied for a zero-variance group");
    }
    out.order = 4;
    return out;
  }

  const double m2 = out.sums.ss / n;
  if (!desc.skewness) return out;
  if (!std::isfinite(*desc.skewness)) fail(ErrorKind::kInvalidArgument, "skewness is not finite");
  if (desc.n < min_n_for_skew(conv.skew_type)) {
    fail(ErrorKind::kUndefined, "skewness supplied but insufficient n for its type");
  }
  const double g1 = *desc.skewness / skew_factor(conv.skew_type, n);
  out.sums.sc = g1 * n * m2 * std::sqrt(m2);
  out.order = 3;

  if (!desc.kurtosis) return out;
  if (!std::isfinite(*desc.kurtosis)) fail(ErrorKind::kInvalidArgument, "kurtosis is not finite");
  if (desc.n < min_n_for_kurt(conv.kurt_type)) {
    fail(ErrorKind::kUndefined, "kurtosis supplied but insufficient n for its type");
  }
  const double raw = conv.kurt_excess ? *desc.kurtosis + 3.0 : *desc.kurtosis;
  const double g2 = g2_from_raw_kurt(conv.kurt_type, raw, n);
  // n*sq >= ss^2 is g2 >= 1.
  if (g2 < 1.0 - kKurtosisSlack) {
    std::ostringstream msg;
    msg << "inconsistent statistics: kurtosis implies m4/m2^2 = " << g2 << " < 1";
    fail(ErrorKind::kInconsistent, msg.str());
  }
  out.sums.sq = std::max(g2, 1.0) * n * m2 * m2;
  out.order = 4;
  return out;
}

GroupDescriptor from_power_sums(const PowerSums& ps, const MomentConventions& conv,
                                int order, bool include_sd) {
  if (order < 0 || order > 4) {
    throw StatsError(ErrorKind::kInvalidArgument, "order must be in 0..4");
  }
  GroupDescriptor d;
  d.n = ps.n;

  const auto mark_absent = [&](int from, const char* reason) {
    for (int k = from; k <= order; ++k) d.absent.push_back({k, reason});
  };

  if (order < 1) return d;
  if (ps.n == 0) {
    mark_absent(1, kReasonEmpty);
    return d;
  }
  d.mean = ps.mean;

  if (order < 2) return d;
  if (ps.n < 2) {
    mark_absent(2, kReasonInsufficientN);
    return d;
  }
  d.variance = variance_of(ps);
  if (include_sd) d.sd = std::sqrt(*d.variance);

  if (order < 3) return d;
  if (ps.ss <= 0.0) {
    mark_absent(3, kReasonZeroVariance);
    return d;
  }
  if (ps.n < min_n_for_skew(conv.skew_type)) {
    mark_absent(3, kReasonInsufficientN);
    return d;
  }
  d.skewness = skew_of(ps, conv);

  if (order < 4) return d;
  if (ps.n < min_n_for_kurt(conv.kurt_type)) {
    mark_absent(4, kReasonInsufficientN);
    return d;
  }
  d.kurtosis = kurt_of(ps, conv);
  return d;
}

}  // namespace momentdecomp
