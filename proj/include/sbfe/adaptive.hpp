#pragma once

// Optimal adaptive policy for k-of-n: test a variable that lies both in the
// cheapest certificate for value 1 (ascending c/p) and in the cheapest
// certificate for value 0 (ascending c/(1-p)).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sbfe/core.hpp"
#include "sbfe/eval.hpp"

namespace sbfe::adaptive {

inline constexpr int kDefaultCap = 20;

struct AdaptiveState {
  std::vector<Index> remaining;  // untested variables
  int ones = 0;
  int zeros = 0;
};

namespace detail {

// a before b in ascending c/w order, w = p (ones) or 1-p (zeros); ties by index.
inline bool ratio_less(const Instance& inst, Index a, Index b, bool for_ones) {
  const double wa = for_ones ? inst.p(a) : 1.0 - inst.p(a);
  const double wb = for_ones ? inst.p(b) : 1.0 - inst.p(b);
  const double lhs = static_cast<double>(inst.c(a)) * wb;
  const double rhs = static_cast<double>(inst.c(b)) * wa;
  if (lhs != rhs) return lhs < rhs;
  return a < b;
}

inline Index choose(const Instance& inst, std::vector<Index> remaining, int ones_needed, int zeros_needed) {
  auto by_ones = remaining;
  auto by_zeros = std::move(remaining);
  std::sort(by_ones.begin(), by_ones.end(), [&](Index a, Index b) { return ratio_less(inst, a, b, true); });
  std::sort(by_zeros.begin(), by_zeros.end(), [&](Index a, Index b) { return ratio_less(inst, a, b, false); });
  std::vector<bool> in_ones(static_cast<std::size_t>(inst.n()), false);
  for (int i = 0; i < ones_needed; ++i) in_ones[static_cast<std::size_t>(by_ones[static_cast<std::size_t>(i)])] = true;
  Index best = std::numeric_limits<Index>::max();
  for (int i = 0; i < zeros_needed; ++i) {
    const Index v = by_zeros[static_cast<std::size_t>(i)];
    if (in_ones[static_cast<std::size_t>(v)]) best = std::min(best, v);
  }
  return best;
}

}  // namespace detail

/// Smallest index lying in both ratio-sorted certificate prefixes.
inline Index ratio_prefix_choice(const Instance& inst, const AdaptiveState& state) {
  if (state.remaining.empty()) throw ValidationError("no untested variables remain");
  if (state.ones < 0 || state.zeros < 0 ||
      static_cast<std::size_t>(state.ones + state.zeros) + state.remaining.size() != static_cast<std::size_t>(inst.n())) {
    throw ValidationError("adaptive state counts are inconsistent with n");
  }
  for (Index v : state.remaining) {
    if (v < 0 || v >= inst.n()) throw ValidationError("adaptive state index out of range");
  }
  if (is_determined({state.ones, state.zeros}, inst) != Verdict::undetermined) {
    throw ValidationError("adaptive state is already determined");
  }
  return detail::choose(inst, state.remaining, inst.k() - state.ones, inst.zeros_needed() - state.zeros);
}

/// The ratio-prefix policy as an executable strategy.
inline Strategy ratio_prefix_strategy() {
  return [](const Instance& inst, std::span<const Observation> history) -> std::optional<Index> {
    AdaptiveState st;
    std::vector<bool> tested(static_cast<std::size_t>(inst.n()), false);
    for (const auto& o : history) {
      tested[static_cast<std::size_t>(o.variable)] = true;
      (o.value ? st.ones : st.zeros) += 1;
    }
    for (Index i = 0; i < inst.n(); ++i) {
      if (!tested[static_cast<std::size_t>(i)]) st.remaining.push_back(i);
    }
    return ratio_prefix_choice(inst, st);
  };
}

/// Exact expected cost of the ratio-prefix policy, memoized on
/// (untested set, ones observed).
inline double adaptive_expected_cost(const Instance& inst, int cap = kDefaultCap) {
  if (inst.n() > cap) {
    throw CapExceeded("adaptive_expected_cost: n=" + std::to_string(inst.n()) + " exceeds cap " + std::to_string(cap));
  }
  if (cap > 31) throw ValidationError("adaptive_expected_cost: cap above 31 is not supported");
  const int n = inst.n();
  std::unordered_map<std::uint64_t, double> memo;

  auto value = [&](auto&& self, std::uint32_t remaining, int ones) -> double {
    const int tested = n - std::popcount(remaining);
    const int zeros = tested - ones;
    if (is_determined({ones, zeros}, inst) != Verdict::undetermined) return 0.0;
    const std::uint64_t key = (static_cast<std::uint64_t>(remaining) << 6) | static_cast<std::uint64_t>(ones);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Index> rest;
    for (Index i = 0; i < n; ++i) {
      if ((remaining >> i) & 1u) rest.push_back(i);
    }
    const Index v = detail::choose(inst, std::move(rest), inst.k() - ones, inst.zeros_needed() - zeros);
    const std::uint32_t next = remaining & ~(1u << v);
    const double result = static_cast<double>(inst.c(v)) + inst.p(v) * self(self, next, ones + 1) +
                          (1.0 - inst.p(v)) * self(self, next, ones);
    memo.emplace(key, result);
    return result;
  };
  const std::uint32_t full = (1u << n) - 1u;
  return value(value, full, 0);
}

}  // namespace sbfe::adaptive
