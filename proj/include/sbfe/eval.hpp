#pragma once

// Exact cost distributions of non-adaptive partial policies, plus a seeded
// Monte Carlo runner that also executes adaptive strategies.

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "sbfe/core.hpp"

namespace sbfe {

/// Outcome counts already known before the policy starts (conditional evaluation).
struct Offset {
  int ones = 0;
  int zeros = 0;
};

/// tail[i] = Pr[cost >= i] for i = 0..H where H is the undetermined cost.
struct TailDistribution {
  std::vector<double> tail;
  double expected = 0.0;
  /// Probability that the policy ends without determining f.
  double undetermined = 0.0;

  /// Pr[cost >= i] for any integer threshold.
  double at(Cost i) const noexcept {
    if (i <= 0) return 1.0;
    if (i >= static_cast<Cost>(tail.size())) return 0.0;
    return tail[static_cast<std::size_t>(i)];
  }
};

namespace detail {

struct Thresholds {
  int ones;   // ones still needed for value 1
  int zeros;  // zeros still needed for value 0
};

inline Thresholds check_eval_inputs(const Instance& inst, const PartialPolicy& pi, Offset off) {
  require_fits(pi, inst);
  if (off.ones < 0 || off.zeros < 0) throw ValidationError("offset counts must be nonnegative");
  const Thresholds need{inst.k() - off.ones, inst.zeros_needed() - off.zeros};
  if (need.ones < 0 || need.zeros < 0) throw ValidationError("offset exceeds the determination thresholds");
  if (static_cast<std::size_t>(off.ones + off.zeros) + pi.size() > static_cast<std::size_t>(inst.n())) {
    throw ValidationError("offset plus policy length exceeds n");
  }
  return need;
}

// Walks the policy keeping the distribution of ones among undetermined
// histories. `on_step(position, survive_before, stopped_now)` is called per test.
template <typename OnStep>
double forward_alive(const Instance& inst, const PartialPolicy& pi, Thresholds need, OnStep&& on_step) {
  if (need.ones == 0 || need.zeros == 0) return 0.0;
  const auto len = static_cast<int>(pi.size());
  const int width = std::min(len, need.ones - 1) + 1;
  std::vector<double> alive(static_cast<std::size_t>(width), 0.0), next(alive.size(), 0.0);
  alive[0] = 1.0;
  double survive = 1.0;
  for (int s = 0; s < len; ++s) {
    const double q = inst.p(pi[static_cast<std::size_t>(s)]);
    const int lo = std::max(0, s - need.zeros + 1);
    const int hi = std::min(s, need.ones - 1);
    std::fill(next.begin(), next.end(), 0.0);
    double stopped = 0.0;
    double remaining = 0.0;
    for (int j = lo; j <= hi; ++j) {
      const double mass = alive[static_cast<std::size_t>(j)];
      if (mass == 0.0) continue;
      if (j + 1 >= need.ones) {
        stopped += mass * q;
      } else {
        next[static_cast<std::size_t>(j + 1)] += mass * q;
        remaining += mass * q;
      }
      if (s - j + 1 >= need.zeros) {
        stopped += mass * (1.0 - q);
      } else {
        next[static_cast<std::size_t>(j)] += mass * (1.0 - q);
        remaining += mass * (1.0 - q);
      }
    }
    on_step(s, survive, stopped);
    alive.swap(next);
    survive = remaining;
  }
  return survive;
}

}  // namespace detail

/// Exact stopping-cost distribution of `pi`. Histories that exhaust `pi`
/// undetermined are charged inst.undetermined_cost() (n for unit cost).
inline TailDistribution cost_tail(const Instance& inst, const PartialPolicy& pi, Offset off = {}) {
  const auto need = detail::check_eval_inputs(inst, pi, off);
  const Cost horizon = inst.undetermined_cost();
  std::vector<double> mass(static_cast<std::size_t>(horizon) + 1, 0.0);

  Cost paid = 0;
  double leftover = 0.0;
  if (need.ones == 0 || need.zeros == 0) {
    mass[0] = 1.0;
  } else {
    leftover = detail::forward_alive(inst, pi, need, [&](int s, double, double stopped) {
      paid += inst.c(pi[static_cast<std::size_t>(s)]);
      mass[static_cast<std::size_t>(paid)] += stopped;
    });
    mass[static_cast<std::size_t>(horizon)] += leftover;
  }

  TailDistribution out;
  out.tail.assign(mass.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = mass.size(); i-- > 0;) {
    acc += mass[i];
    out.tail[i] = std::min(acc, 1.0);
    out.expected += static_cast<double>(i) * mass[i];
  }
  out.tail[0] = 1.0;
  out.undetermined = leftover;
  return out;
}

/// Expected cost summed per position: c_{pi(j)} * Pr[undetermined before test j].
/// Only tests actually performed are paid; histories left undetermined are
/// not charged extra, so this equals cost_tail(...).expected exactly when
/// undetermined_probability(...) is 0.
inline double expected_cost(const Instance& inst, const PartialPolicy& pi, Offset off = {}) {
  const auto need = detail::check_eval_inputs(inst, pi, off);
  double total = 0.0;
  detail::forward_alive(inst, pi, need, [&](int s, double survive, double) {
    total += static_cast<double>(inst.c(pi[static_cast<std::size_t>(s)])) * survive;
  });
  return total;
}

/// Probability that `pi` ends without determining f.
inline double undetermined_probability(const Instance& inst, const PartialPolicy& pi, Offset off = {}) {
  const auto need = detail::check_eval_inputs(inst, pi, off);
  if (need.ones == 0 || need.zeros == 0) return 0.0;
  return detail::forward_alive(inst, pi, need, [](int, double, double) {});
}

/// sum_{i=lower}^{upper-1} Pr[cost >= i] + upper * Pr[cost >= upper].
inline double bounded_score(const TailDistribution& t, int lower, int upper) {
  double s = 0.0;
  for (int i = lower; i < upper; ++i) s += t.at(i);
  return s + static_cast<double>(upper) * t.at(upper);
}

inline double bounded_score(const Instance& inst, const PartialPolicy& pi, int lower, int upper) {
  if (!inst.unit_cost()) throw ValidationError("bounded score is defined for unit-cost instances only");
  if (lower < 1 || lower >= upper || upper > inst.n()) throw ValidationError("bounded score needs 1 <= a < a' <= n");
  return bounded_score(cost_tail(inst, pi), lower, upper);
}

// ---------------------------------------------------------------------------
// Strategy execution

struct Observation {
  Index variable;
  bool value;
};

/// Maps the observed history to the next variable to test; nullopt stops
/// (the run is then charged the undetermined cost).
using Strategy = std::function<std::optional<Index>(const Instance&, std::span<const Observation>)>;

inline Strategy fixed_order_strategy(PartialPolicy pi) {
  return [pi = std::move(pi)](const Instance&, std::span<const Observation> history) -> std::optional<Index> {
    if (history.size() >= pi.size()) return std::nullopt;
    return pi[history.size()];
  };
}

/// Cost of executing `strategy` on the fixed outcome `x`.
inline Cost run_strategy(const Instance& inst, const Strategy& strategy, const Outcome& x) {
  if (x.size() != static_cast<std::size_t>(inst.n())) throw ValidationError("outcome length differs from n");
  std::vector<Observation> history;
  std::vector<bool> tested(x.size(), false);
  DeterminationState st;
  Cost paid = 0;
  while (is_determined(st, inst) == Verdict::undetermined) {
    const auto next = strategy(inst, history);
    if (!next) return inst.undetermined_cost();
    const Index v = *next;
    if (v < 0 || v >= inst.n()) throw ValidationError("strategy returned an index out of range");
    if (tested[static_cast<std::size_t>(v)]) throw ValidationError("strategy returned an already-tested index");
    tested[static_cast<std::size_t>(v)] = true;
    paid += inst.c(v);
    const bool value = x[static_cast<std::size_t>(v)] != 0;
    (value ? st.ones : st.zeros) += 1;
    history.push_back({v, value});
  }
  return paid;
}

struct SimulationResult {
  double mean = 0.0;
  /// 95% normal-approximation confidence half-width.
  double half_width = 0.0;
};

inline SimulationResult simulate(const Instance& inst, const Strategy& strategy, std::int64_t trials,
                                 std::uint64_t seed) {
  if (trials < 1) throw ValidationError("simulation needs at least one trial");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Outcome x(static_cast<std::size_t>(inst.n()));
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t t = 1; t <= trials; ++t) {
    for (Index i = 0; i < inst.n(); ++i) x[static_cast<std::size_t>(i)] = unit(rng) < inst.p(i) ? 1 : 0;
    const auto cost = static_cast<double>(run_strategy(inst, strategy, x));
    const double delta = cost - mean;
    mean += delta / static_cast<double>(t);
    m2 += delta * (cost - mean);
  }
  SimulationResult r;
  r.mean = mean;
  if (trials > 1) {
    const double var = m2 / static_cast<double>(trials - 1);
    r.half_width = 1.959963984540054 * std::sqrt(var / static_cast<double>(trials));
  }
  return r;
}

}  // namespace sbfe
