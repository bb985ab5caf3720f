#include "momentdecomp/general_powers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "momentdecomp/error.hpp"

namespace momentdecomp {

namespace {

using BinomialTable = std::array<std::array<std::uint64_t, kMaxOrder + 1>, kMaxOrder + 1>;

constexpr BinomialTable make_binomials() {
  BinomialTable t{};
  for (int p = 0; p <= kMaxOrder; ++p) {
    t[p][0] = 1;
    for (int s = 1; s <= p; ++s) t[p][s] = t[p - 1][s - 1] + (s < p ? t[p - 1][s] : 0);
  }
  return t;
}

constexpr BinomialTable kBinomials = make_binomials();
static_assert(kBinomials[16][8] == 12870);

void check_order(int max_order) {
  if (max_order < kMinOrder || max_order > kMaxOrder) {
    throw StatsError(ErrorKind::kInvalidArgument,
                     "maximum order must be in [" + std::to_string(kMinOrder) + ", " +
                         std::to_string(kMaxOrder) + "], got " +
                         std::to_string(max_order));
  }
}

void check_same_order(const PowerSumsN& a, const PowerSumsN& b) {
  if (a.max_order() != b.max_order()) {
    throw StatsError(ErrorKind::kInvalidArgument,
                     "mismatched maximum order: " + std::to_string(a.max_order()) +
                         " vs " + std::to_string(b.max_order()));
  }
}

// powers[s] = base^s for s = 0..max_order
std::vector<double> powers_of(double base, int max_order) {
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
  out[0] = 1.0;
  for (int s = 1; s <= max_order; ++s) out[s] = out[s - 1] * base;
  return out;
}

// sum_{s=s_begin}^{p} C(p,s) SP^{p-s} offset^s for one group
double offset_expansion(const PowerSumsN& g, int p, std::span<const double> offset_pow,
                        int s_begin) {
  double acc = 0.0;
  for (int s = s_begin; s <= p; ++s) {
    if (p - s == 1) continue;
    acc += binomial(p, s) * g.sp(p - s) * offset_pow[s];
  }
  return acc;
}

}  // namespace

double binomial(int p, int s) {
  if (p < 0 || p > kMaxOrder || s < 0 || s > p) {
    throw StatsError(ErrorKind::kInvalidArgument, "binomial index out of range");
  }
  return static_cast<double>(kBinomials[p][s]);
}

PowerSumsN::PowerSumsN(int max_order) {
  check_order(max_order);
  sp_.assign(static_cast<std::size_t>(max_order - 1), 0.0);
}

PowerSumsN::PowerSumsN(std::int64_t n, double mean, std::vector<double> sp)
    : n_(n), mean_(mean), sp_(std::move(sp)) {
  check_order(max_order());
  if (n < 0) throw StatsError(ErrorKind::kInvalidArgument, "negative count");
}

double PowerSumsN::sp(int p) const {
  if (p == 0) return static_cast<double>(n_);
  if (p == 1) return 0.0;
  if (p < 0 || p > max_order()) {
    throw StatsError(ErrorKind::kInvalidArgument, "power " + std::to_string(p) +
                                                      " outside stored range");
  }
  return sp_[static_cast<std::size_t>(p - 2)];
}

PowerSums PowerSumsN::truncate4() const {
  if (max_order() < 4) {
    throw StatsError(ErrorKind::kInvalidArgument, "truncate4 requires max order >= 4");
  }
  return PowerSums{n_, mean_, sp_[0], sp_[1], sp_[2]};
}

PowerSumsN PowerSumsN::from_power_sums(const PowerSums& ps) {
  return PowerSumsN(ps.n, ps.mean, {ps.ss, ps.sc, ps.sq});
}

PowerSumsN gp_singleton(double x, int max_order) {
  if (!std::isfinite(x)) {
    throw StatsError(ErrorKind::kInvalidArgument, "observation is not finite");
  }
  check_order(max_order);
  return PowerSumsN(1, x, std::vector<double>(static_cast<std::size_t>(max_order - 1), 0.0));
}

PowerSumsN gp_from_sequence(std::span<const double> xs, int max_order) {
  PowerSumsN acc(max_order);
  for (double x : xs) acc = gp_push(acc, x);
  return acc;
}

PowerSumsN gp_merge(std::span<const PowerSumsN> groups) {
  if (groups.empty()) {
    throw StatsError(ErrorKind::kInvalidArgument, "gp_merge needs at least one group");
  }
  const int order = groups.front().max_order();
  for (const auto& g : groups) check_same_order(groups.front(), g);

  std::int64_t n_total = 0;
  double ref = 0.0;
  bool have_ref = false;
  for (const auto& g : groups) {
    n_total += g.n();
    if (!have_ref && g.n() > 0) {
      ref = g.mean();
      have_ref = true;
    }
  }
  if (n_total == 0) return PowerSumsN(order);

  const double n = static_cast<double>(n_total);
  double weighted = 0.0;
  for (const auto& g : groups) weighted += static_cast<double>(g.n()) * (g.mean() - ref);
  const double offset = weighted / n;

  std::vector<double> sp(static_cast<std::size_t>(order - 1), 0.0);
  for (const auto& g : groups) {
    if (g.n() == 0) continue;
    const auto delta_pow = powers_of((g.mean() - ref) - offset, order);
    for (int p = 2; p <= order; ++p) sp[p - 2] += offset_expansion(g, p, delta_pow, 0);
  }
  for (int p = 2; p <= order; p += 2) sp[p - 2] = std::max(sp[p - 2], 0.0);
  return PowerSumsN(n_total, ref + offset, std::move(sp));
}

PowerSumsN gp_push(const PowerSumsN& acc, double x) {
  const std::array<PowerSumsN, 2> pair{acc, gp_singleton(x, acc.max_order())};
  return gp_merge(pair);
}

PowerSumsN gp_subtract(const PowerSumsN& pooled, std::span<const PowerSumsN> known) {
  const int order = pooled.max_order();
  std::int64_t n_known = 0;
  for (const auto& g : known) {
    check_same_order(pooled, g);
    n_known += g.n();
  }
  if (pooled.n() <= n_known) {
    throw StatsError(ErrorKind::kNoRemainder,
                     "no remainder group: pooled n must exceed the known n");
  }
  const std::int64_t n_rem = pooled.n() - n_known;
  const double nr = static_cast<double>(n_rem);

  // Offsets of each known group's mean from the pooled mean; the remainder's
  // offset follows from the weighted offsets summing to zero.
  std::vector<std::vector<double>> known_pow;
  known_pow.reserve(known.size());
  double weighted = 0.0;
  for (const auto& g : known) {
    const double d = g.mean() - pooled.mean();
    weighted += static_cast<double>(g.n()) * d;
    known_pow.push_back(powers_of(d, order));
  }
  const double rem_offset = -weighted / nr;
  const auto rem_pow = powers_of(rem_offset, order);

  std::vector<double> rem_sp(static_cast<std::size_t>(order - 1), 0.0);
  const auto rem_sp_at = [&](int p) -> double {
    if (p == 0) return nr;
    if (p == 1) return 0.0;
    return rem_sp[static_cast<std::size_t>(p - 2)];
  };

  for (int p = 2; p <= order; ++p) {
    double value = pooled.sp(p);
    double scale = pooled.sp(p);
    for (std::size_t i = 0; i < known.size(); ++i) {
      value -= offset_expansion(known[i], p, known_pow[i], 0);
      scale += known[i].sp(p);
    }
    for (int s = 1; s <= p; ++s) {
      if (p - s == 1) continue;
      value -= binomial(p, s) * rem_sp_at(p - s) * rem_pow[s];
    }
    if (p % 2 == 0 && value < 0.0) {
      scale = std::max(scale, 1.0);
      if (value < -kNegativityTolerance * scale) {
        std::ostringstream msg;
        msg << "inconsistent group statistics: remainder has negative order-" << p
            << " central sum (" << value << ")";
        throw StatsError(ErrorKind::kInconsistent, msg.str());
      }
      value = 0.0;
    }
    rem_sp[static_cast<std::size_t>(p - 2)] = value;
  }
  if (n_rem == 1) std::fill(rem_sp.begin(), rem_sp.end(), 0.0);

  return PowerSumsN(n_rem, pooled.mean() + rem_offset, std::move(rem_sp));
}

}  // namespace momentdecomp
