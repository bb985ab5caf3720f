#ifndef MOMENTDECOMP_DECOMP_ENGINE_HPP_
#define MOMENTDECOMP_DECOMP_ENGINE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "momentdecomp/error.hpp"
#include "momentdecomp/stats_bridge.hpp"

namespace momentdecomp {

inline constexpr const char* kPooledLabel = "--pooled--";
inline constexpr const char* kOtherLabel = "--other--";

struct DecompRequest {
  std::vector<GroupDescriptor> groups;
  MomentConventions conventions;
  // 1-based index or group name of the pooled sample; unset means every
  // group is a subgroup and the pooled sample is computed.
  std::optional<std::string> pooled;
  bool include_sd = false;
};

enum class RowKind { kInput, kOther, kPooled };

struct DecompRow {
  std::string label;
  RowKind kind = RowKind::kInput;
  GroupDescriptor stats;
};

/**
 * Output of sample_decomp(). Rows are the echoed subgroups in input order,
 * then "--other--" when a pooled group was given, then "--pooled--".
 * Every row is truncated to `order`, the highest order supplied by all groups.
 */
struct DecompTable {
  std::vector<DecompRow> rows;
  int order = 0;
  bool include_sd = false;
  std::vector<std::string> warnings;
};

struct Violation {
  ErrorKind kind;
  std::string message;
};

/// Checks a request without computing anything. Empty result means valid.
std::vector<Violation> validate_request(const DecompRequest& req);

/// Resolves a pooled reference to a 0-based group index. Integers are tried
/// first (1-based), then names.
std::size_t resolve_group_ref(const std::vector<GroupDescriptor>& groups,
                              const std::string& ref);

/// Pools the groups, or recovers the missing subgroup when req.pooled is set.
/// Throws StatsError on the first violation or on inconsistent statistics.
DecompTable sample_decomp(const DecompRequest& req);

}  // namespace momentdecomp

#endif  // MOMENTDECOMP_DECOMP_ENGINE_HPP_
