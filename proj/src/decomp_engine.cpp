#include "momentdecomp/decomp_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace momentdecomp {

namespace {

// Echoed rows further than this from their inputs are reported.
constexpr double kEchoTolerance = 1e-9;
constexpr double kSdVarTolerance = 1e-9;

std::optional<long long> parse_index(const std::string& ref) {
  long long value = 0;
  const char* first = ref.data();
  const char* last = ref.data() + ref.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || ref.empty()) return std::nullopt;
  return value;
}

std::string group_label(const GroupDescriptor& g, std::size_t index) {
  return g.name.empty() ? std::to_string(index + 1) : g.name;
}

bool close(double a, double b) {
  return std::abs(a - b) <= kEchoTolerance * std::max(std::abs(a), std::abs(b)) + 1e-15;
}

void truncate(PowerSums& ps, int order) {
  if (order < 1) ps.mean = ps.mean_residual = 0.0;
  if (order < 2) ps.ss = 0.0;
  if (order < 3) ps.sc = 0.0;
  if (order < 4) ps.sq = 0.0;
}

void check_echo(const GroupDescriptor& in, const GroupDescriptor& out,
                const std::string& label, std::vector<std::string>& warnings) {
  const auto cmp = [&](const char* field, const std::optional<double>& a,
                       const std::optional<double>& b) {
    if (a && b && !close(*a, *b)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "group " << label << ": " << field << " " << *a
          << " does not survive conversion (got " << *b << ")";
      warnings.push_back(msg.str());
    }
  };
  cmp("mean", in.mean, out.mean);
  cmp("var", in.effective_variance(), out.variance);
  cmp("skew", in.skewness, out.skewness);
  cmp("kurt", in.kurtosis, out.kurtosis);
}

}  // namespace

std::size_t resolve_group_ref(const std::vector<GroupDescriptor>& groups,
                              const std::string& ref) {
  if (auto index = parse_index(ref)) {
    if (*index < 1 || *index > static_cast<long long>(groups.size())) {
      throw StatsError(ErrorKind::kInvalidArgument,
                       "pooled reference out of range: " + ref + " (have " +
                           std::to_string(groups.size()) + " groups)");
    }
    return static_cast<std::size_t>(*index - 1);
  }
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].name != ref) continue;
    if (found) {
      throw StatsError(ErrorKind::kInvalidArgument,
                       "pooled reference is ambiguous: duplicate group name '" + ref + "'");
    }
    found = i;
  }
  if (!found) {
    throw StatsError(ErrorKind::kInvalidArgument, "pooled reference not found: '" + ref + "'");
  }
  return *found;
}

std::vector<Violation> validate_request(const DecompRequest& req) {
  std::vector<Violation> out;
  const auto add = [&](ErrorKind kind, std::string msg) {
    out.push_back({kind, std::move(msg)});
  };

  if (req.groups.empty()) add(ErrorKind::kInvalidArgument, "no groups supplied");

  for (std::size_t i = 0; i < req.groups.size(); ++i) {
    const auto& g = req.groups[i];
    const std::string label = "group " + group_label(g, i);
    if (g.n <= 0) add(ErrorKind::kInvalidArgument, label + ": n must be positive");
    if (auto broken = g.chain_violation(); !broken.empty()) {
      add(ErrorKind::kInvalidArgument, label + ": " + broken);
    }
    if (g.variance && g.sd) {
      const double v = *g.variance;
      const double s2 = *g.sd * *g.sd;
      if (std::abs(v - s2) > kSdVarTolerance * std::max(std::abs(v), std::abs(s2))) {
        add(ErrorKind::kInconsistent, label + ": sd and var disagree");
      }
    }
    if (auto v = g.effective_variance(); v && *v < 0.0) {
      add(ErrorKind::kInconsistent, label + ": negative variance");
    }
  }

  if (req.pooled) {
    std::size_t pooled_index = 0;
    try {
      pooled_index = resolve_group_ref(req.groups, *req.pooled);
    } catch (const StatsError& e) {
      add(e.kind(), e.what());
      return out;
    }
    if (req.groups.size() < 2) {
      add(ErrorKind::kInvalidArgument,
          "pooled mode needs the pooled group and at least one subgroup");
    }
    std::int64_t n_sub = 0;
    for (std::size_t i = 0; i < req.groups.size(); ++i) {
      if (i != pooled_index) n_sub += req.groups[i].n;
    }
    if (req.groups[pooled_index].n <= n_sub) {
      add(ErrorKind::kNoRemainder,
          "no remainder group: pooled n (" + std::to_string(req.groups[pooled_index].n) +
              ") must exceed the subgroup total (" + std::to_string(n_sub) + ")");
    }
  }
  return out;
}

DecompTable sample_decomp(const DecompRequest& req) {
  if (auto violations = validate_request(req); !violations.empty()) {
    throw StatsError(violations.front().kind, violations.front().message);
  }

  const auto& conv = req.conventions;
  std::vector<PowerSums> sums;
  sums.reserve(req.groups.size());
  int order = 4;
  for (const auto& g : req.groups) {
    auto t = to_power_sums(g, conv);
    order = std::min(order, t.order);
    sums.push_back(t.sums);
  }
  for (auto& s : sums) truncate(s, order);

  DecompTable table;
  table.order = order;
  table.include_sd = req.include_sd;

  const auto emit = [&](const std::string& label, RowKind kind, const PowerSums& ps,
                        const GroupDescriptor* input) {
    DecompRow row{label, kind, from_power_sums(ps, conv, order, req.include_sd)};
    row.stats.name = input != nullptr && !input->name.empty() ? input->name : label;
    if (input != nullptr) check_echo(*input, row.stats, label, table.warnings);
    table.rows.push_back(std::move(row));
  };

  if (!req.pooled) {
    for (std::size_t i = 0; i < sums.size(); ++i) {
      emit(group_label(req.groups[i], i), RowKind::kInput, sums[i], &req.groups[i]);
    }
    emit(kPooledLabel, RowKind::kPooled, pool_many(sums), nullptr);
    return table;
  }

  const std::size_t pooled_index = resolve_group_ref(req.groups, *req.pooled);
  std::vector<PowerSums> known;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (i == pooled_index) continue;
    known.push_back(sums[i]);
    emit(group_label(req.groups[i], i), RowKind::kInput, sums[i], &req.groups[i]);
  }
  // Pool the known subgroups first, then take them out of the pooled sample.
  const PowerSums known_pooled = pool_many(known);
  auto remainder = subtract_checked(sums[pooled_index], known_pooled, order);
  for (auto& w : remainder.warnings) table.warnings.push_back("--other--: " + w);
  emit(kOtherLabel, RowKind::kOther, remainder.remainder, nullptr);

  emit(kPooledLabel, RowKind::kPooled, sums[pooled_index], &req.groups[pooled_index]);
  return table;
}

}  // namespace momentdecomp
