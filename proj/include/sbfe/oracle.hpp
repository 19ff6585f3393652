#pragma once

// Brute-force ground truth for small instances.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sbfe/core.hpp"
#include "sbfe/eval.hpp"

namespace sbfe::oracle {

inline constexpr int kDefaultNonAdaptiveCap = 8;
inline constexpr int kDefaultAdaptiveCap = 15;
inline constexpr int kEnumerationCap = 20;

inline void require_cap(const Instance& inst, int cap, const char* what) {
  if (inst.n() > cap) {
    throw CapExceeded(std::string(what) + ": n=" + std::to_string(inst.n()) + " exceeds cap " + std::to_string(cap));
  }
}

struct OracleResult {
  PartialPolicy best_policy;
  double best_cost = 0.0;
};

/// Exact tails by summing the product-form probability over all 2^n outcomes.
inline TailDistribution tail_by_enumeration(const Instance& inst, const PartialPolicy& pi, Offset off = {}) {
  require_cap(inst, kEnumerationCap, "tail_by_enumeration");
  require_fits(pi, inst);
  const int n = inst.n();
  const int need1 = inst.k() - off.ones;
  const int need0 = inst.zeros_needed() - off.zeros;
  if (need1 < 0 || need0 < 0) throw ValidationError("offset exceeds the determination thresholds");
  const Cost horizon = inst.undetermined_cost();
  std::vector<double> mass(static_cast<std::size_t>(horizon) + 1, 0.0);
  double undetermined = 0.0;

  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    double pr = 1.0;
    for (int i = 0; i < n; ++i) pr *= ((x >> i) & 1u) ? inst.p(i) : 1.0 - inst.p(i);
    int ones = 0, zeros = 0;
    Cost paid = 0;
    bool done = need1 == 0 || need0 == 0;
    for (Index v : pi) {
      if (done) break;
      paid += inst.c(v);
      ((x >> v) & 1u) ? ++ones : ++zeros;
      done = ones >= need1 || zeros >= need0;
    }
    mass[static_cast<std::size_t>(done ? paid : horizon)] += pr;
    if (!done) undetermined += pr;
  }

  TailDistribution out;
  out.tail.assign(mass.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = mass.size(); i-- > 0;) {
    acc += mass[i];
    out.tail[i] = acc;
    out.expected += static_cast<double>(i) * mass[i];
  }
  out.undetermined = undetermined;
  return out;
}

/// Exact expectation of an arbitrary strategy by running it on every outcome.
inline double strategy_expectation_by_enumeration(const Instance& inst, const Strategy& strategy) {
  require_cap(inst, kEnumerationCap, "strategy_expectation_by_enumeration");
  const int n = inst.n();
  Outcome x(static_cast<std::size_t>(n));
  double total = 0.0;
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    double pr = 1.0;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
      pr *= x[static_cast<std::size_t>(i)] ? inst.p(i) : 1.0 - inst.p(i);
    }
    total += pr * static_cast<double>(run_strategy(inst, strategy, x));
  }
  return total;
}

namespace detail {

// Depth-first search over permutations in lexicographic order. Each frame
// holds the distribution of ones among undetermined histories; a prefix is
// cut once its accumulated expected cost exceeds the incumbent.
class PermutationSearch {
 public:
  explicit PermutationSearch(const Instance& inst) : inst_(inst), n_(inst.n()) {}

  OracleResult run() {
    used_.assign(static_cast<std::size_t>(n_), false);
    order_.clear();
    std::vector<double> alive(static_cast<std::size_t>(inst_.k()), 0.0);
    alive[0] = 1.0;
    descend(alive, 0.0);
    return OracleResult{PartialPolicy(best_order_), best_cost_};
  }

 private:
  static constexpr double kTol = 1e-12;

  void descend(const std::vector<double>& alive, double partial) {
    const int depth = static_cast<int>(order_.size());
    if (depth == n_) {
      if (partial < best_cost_ - kTol) {
        best_cost_ = partial;
        best_order_ = order_;
      }
      return;
    }
    double survive = 0.0;
    for (double m : alive) survive += m;

    std::vector<double> next(alive.size(), 0.0);
    for (Index v = 0; v < n_; ++v) {
      if (used_[static_cast<std::size_t>(v)]) continue;
      const double step_cost = partial + static_cast<double>(inst_.c(v)) * survive;
      if (step_cost > best_cost_ + kTol) continue;
      std::fill(next.begin(), next.end(), 0.0);
      const double q = inst_.p(v);
      for (int j = 0; j < static_cast<int>(alive.size()); ++j) {
        const double mass = alive[static_cast<std::size_t>(j)];
        if (mass == 0.0) continue;
        if (j + 1 < inst_.k()) next[static_cast<std::size_t>(j + 1)] += mass * q;
        if (depth - j + 1 < inst_.zeros_needed()) next[static_cast<std::size_t>(j)] += mass * (1.0 - q);
      }
      used_[static_cast<std::size_t>(v)] = true;
      order_.push_back(v);
      descend(next, step_cost);
      order_.pop_back();
      used_[static_cast<std::size_t>(v)] = false;
    }
  }

  const Instance& inst_;
  int n_;
  std::vector<bool> used_;
  std::vector<Index> order_;
  std::vector<Index> best_order_;
  double best_cost_ = std::numeric_limits<double>::infinity();
};

}  // namespace detail

/// Optimal non-adaptive order over all n! permutations; ties go to the
/// lexicographically smallest order.
inline OracleResult opt_na_bruteforce(const Instance& inst, int cap = kDefaultNonAdaptiveCap) {
  require_cap(inst, cap, "opt_na_bruteforce");
  auto result = detail::PermutationSearch(inst).run();
  result.best_cost = expected_cost(inst, result.best_policy);
  return result;
}

/// Optimal adaptive expected cost by exhaustive recursion over
/// (untested set, ones observed).
inline double opt_adaptive_dp(const Instance& inst, int cap = kDefaultAdaptiveCap) {
  require_cap(inst, cap, "opt_adaptive_dp");
  if (cap > 24) throw ValidationError("opt_adaptive_dp: cap above 24 is not supported");
  const int n = inst.n();
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> memo((static_cast<std::size_t>(full) + 1) * static_cast<std::size_t>(n + 1),
                           std::numeric_limits<double>::quiet_NaN());

  auto value = [&](auto&& self, std::uint32_t remaining, int ones) -> double {
    const int tested = n - std::popcount(remaining);
    if (is_determined({ones, tested - ones}, inst) != Verdict::undetermined) return 0.0;
    double& slot = memo[static_cast<std::size_t>(remaining) * static_cast<std::size_t>(n + 1) +
                        static_cast<std::size_t>(ones)];
    if (!std::isnan(slot)) return slot;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!((remaining >> i) & 1u)) continue;
      const std::uint32_t rest = remaining & ~(1u << i);
      const double v = static_cast<double>(inst.c(i)) + inst.p(i) * self(self, rest, ones + 1) +
                       (1.0 - inst.p(i)) * self(self, rest, ones);
      best = std::min(best, v);
    }
    slot = best;
    return best;
  };
  return value(value, full, 0);
}

}  // namespace sbfe::oracle
