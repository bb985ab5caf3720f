#include "momentdecomp/raw_stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <string>
#include <vector>

#include "momentdecomp/error.hpp"

namespace momentdecomp {

RawSummary compute_raw(std::istream& in, int max_order) {
  RawSummary out{empty(), PowerSumsN(max_order)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto begin = line.find_first_not_of(" \t\r,;", pos);
      if (begin == std::string::npos) break;
      auto end = line.find_first_of(" \t\r,;", begin);
      if (end == std::string::npos) end = line.size();
      pos = end;

      const char* first = line.data() + begin;
      const char* last = line.data() + end;
      if (*first == '+') ++first;
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, x);
      if (ec != std::errc() || ptr != last || !std::isfinite(x)) {
        throw StatsError(ErrorKind::kParse,
                         "line " + std::to_string(line_no) + ": not a finite number '" +
                             line.substr(begin, end - begin) + "'");
      }
      out.sums = push(out.sums, x);
      out.general = gp_push(out.general, x);
    }
  }
  if (in.bad()) throw StatsError(ErrorKind::kIo, "read error on input stream");
  return out;
}

GroupDescriptor describe_raw(const RawSummary& raw, const MomentConventions& conv,
                             bool include_sd) {
  return from_power_sums(raw.sums, conv, 4, include_sd);
}

namespace {

template <typename Acc, typename Fold, typename Merge>
Acc fold_chunks(std::span<const double> xs, unsigned chunks, Fold fold, Merge merge) {
  chunks = std::max(1u, std::min<unsigned>(chunks, static_cast<unsigned>(std::max<std::size_t>(xs.size(), 1))));
  const std::size_t step = (xs.size() + chunks - 1) / chunks;
  std::vector<std::future<Acc>> parts;
  for (std::size_t begin = 0; begin < xs.size(); begin += step) {
    auto piece = xs.subspan(begin, std::min(step, xs.size() - begin));
    parts.push_back(std::async(std::launch::async, [piece, &fold] { return fold(piece); }));
  }
  std::vector<Acc> results;
  for (auto& f : parts) results.push_back(f.get());
  return merge(results);
}

}  // namespace

PowerSums parallel_fold(std::span<const double> xs, unsigned chunks) {
  return fold_chunks<PowerSums>(
      xs, chunks, [](std::span<const double> piece) { return from_sequence(piece); },
      [](const std::vector<PowerSums>& parts) {
        PowerSums acc = empty();
        for (const auto& p : parts) acc = merge2(acc, p);
        return acc;
      });
}

PowerSumsN parallel_gp_fold(std::span<const double> xs, int max_order, unsigned chunks) {
  return fold_chunks<PowerSumsN>(
      xs, chunks,
      [max_order](std::span<const double> piece) { return gp_from_sequence(piece, max_order); },
      [max_order](const std::vector<PowerSumsN>& parts) {
        if (parts.empty()) return PowerSumsN(max_order);
        return gp_merge(parts);
      });
}

}  // namespace momentdecomp
