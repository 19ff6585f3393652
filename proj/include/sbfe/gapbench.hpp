#pragma once

// Lower-bound family for the adaptivity gap: t unit-cost variables with
// p = eps, 2m free variables with p = 1/2, t unit-cost variables with
// p = 1 - eps, and k = m + t. Free variables are tested first; only when
// their count X of ones lands in [m-t, m+t-1] do the paid variables matter.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sbfe/core.hpp"
#include "sbfe/eval.hpp"

namespace sbfe::gapbench {

inline constexpr int kMaxM = 100000;

struct GapParams {
  int m = 1;
  int t = 1;
  double eps = 0.01;
};

inline void validate(const GapParams& g) {
  if (g.m < 1 || g.t < 1) throw ValidationError("gap instance needs m >= 1 and t >= 1");
  if (!(g.eps > 0.0 && g.eps < 0.5)) throw ValidationError("gap instance needs 0 < eps < 1/2");
  if (g.m > kMaxM) throw CapExceeded("gap instance: m=" + std::to_string(g.m) + " exceeds cap " + std::to_string(kMaxM));
}

inline Instance build_L(const GapParams& g) {
  validate(g);
  const int n = 2 * g.m + 2 * g.t;
  std::vector<double> p(static_cast<std::size_t>(n));
  std::vector<Cost> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i < g.t) {
      p[static_cast<std::size_t>(i)] = g.eps;
      c[static_cast<std::size_t>(i)] = 1;
    } else if (i < 2 * g.m + g.t) {
      p[static_cast<std::size_t>(i)] = 0.5;
      c[static_cast<std::size_t>(i)] = 0;
    } else {
      p[static_cast<std::size_t>(i)] = 1.0 - g.eps;
      c[static_cast<std::size_t>(i)] = 1;
    }
  }
  return Instance(g.m + g.t, std::move(p), std::move(c));
}

/// Paid variables that are almost surely 0.
inline std::vector<Index> zero_variables(const GapParams& g) {
  std::vector<Index> v;
  for (int i = 0; i < g.t; ++i) v.push_back(i);
  return v;
}

/// Paid variables that are almost surely 1.
inline std::vector<Index> one_variables(const GapParams& g) {
  std::vector<Index> v;
  for (int i = 0; i < g.t; ++i) v.push_back(2 * g.m + g.t + i);
  return v;
}

inline std::vector<Index> free_variables(const GapParams& g) {
  std::vector<Index> v;
  for (int i = 0; i < 2 * g.m; ++i) v.push_back(g.t + i);
  return v;
}

/// One-variable, zero-variable, one-variable, ...
inline PartialPolicy alternating_paid_order(const GapParams& g) {
  const auto ones = one_variables(g);
  const auto zeros = zero_variables(g);
  std::vector<Index> order;
  for (int i = 0; i < g.t; ++i) {
    order.push_back(ones[static_cast<std::size_t>(i)]);
    order.push_back(zeros[static_cast<std::size_t>(i)]);
  }
  return PartialPolicy(std::move(order));
}

/// Binomial(trials, 1/2) pmf via the multiplicative recurrence from the
/// mode, renormalized; entries far in the tails underflow to 0.
inline std::vector<double> binomial_weights(int trials) {
  std::vector<double> w(static_cast<std::size_t>(trials) + 1, 0.0);
  const int mode = trials / 2;
  w[static_cast<std::size_t>(mode)] = 1.0;
  for (int x = mode; x < trials; ++x) {
    w[static_cast<std::size_t>(x + 1)] =
        w[static_cast<std::size_t>(x)] * static_cast<double>(trials - x) / static_cast<double>(x + 1);
  }
  for (int x = mode; x > 0; --x) {
    w[static_cast<std::size_t>(x - 1)] =
        w[static_cast<std::size_t>(x)] * static_cast<double>(x) / static_cast<double>(trials - x + 1);
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

/// Pr[X - a = i | X - a in [-c, c-1]] for X ~ Binomial(2a, 1/2).
inline double binomial_window_probability(int a, int c, int i) {
  if (a < 1 || c < 1 || a < c) throw ValidationError("window probability needs a >= c >= 1");
  if (i < -c || i > c - 1) throw ValidationError("offset i outside [-c, c-1]");
  const auto w = binomial_weights(2 * a);
  double window = 0.0;
  for (int j = -c; j <= c - 1; ++j) window += w[static_cast<std::size_t>(a + j)];
  return w[static_cast<std::size_t>(a + i)] / window;
}

/// Counts of free ones for which the paid variables are needed.
inline std::pair<int, int> undetermined_window(const GapParams& g) {
  return {std::max(0, g.m - g.t), std::min(2 * g.m, g.m + g.t - 1)};
}

/// Paid order of the adaptive policy once X free ones are known.
inline PartialPolicy adaptive_paid_order(const GapParams& g, int free_ones) {
  auto first = free_ones - g.m >= 0 ? one_variables(g) : zero_variables(g);
  const auto second = free_ones - g.m >= 0 ? zero_variables(g) : one_variables(g);
  first.insert(first.end(), second.begin(), second.end());
  return PartialPolicy(std::move(first));
}

/// The adaptive policy as an executable strategy: free variables in index
/// order, then the paid group suggested by the free count.
inline Strategy adaptive_L_strategy(const GapParams& g) {
  validate(g);
  return [g](const Instance&, std::span<const Observation> history) -> std::optional<Index> {
    const auto free_count = static_cast<std::size_t>(2 * g.m);
    if (history.size() < free_count) return g.t + static_cast<Index>(history.size());
    int ones = 0;
    for (std::size_t i = 0; i < free_count; ++i) ones += history[i].value ? 1 : 0;
    const auto order = adaptive_paid_order(g, ones);
    const std::size_t step = history.size() - free_count;
    if (step >= order.size()) return std::nullopt;
    return order[step];
  };
}

/// Free variables first, then `paid_order`.
inline PartialPolicy economical_policy(const GapParams& g, const PartialPolicy& paid_order) {
  auto order = free_variables(g);
  order.insert(order.end(), paid_order.begin(), paid_order.end());
  return PartialPolicy(std::move(order));
}

namespace detail {

inline void check_paid_order(const GapParams& g, const PartialPolicy& paid_order) {
  if (paid_order.size() != static_cast<std::size_t>(2 * g.t)) throw ValidationError("paid order must list all 2t paid variables");
  for (Index v : paid_order) {
    if (v >= g.t && v < 2 * g.m + g.t) throw ValidationError("paid order contains a free variable");
    if (v < 0 || v >= 2 * g.m + 2 * g.t) throw ValidationError("paid order index out of range");
  }
}

// sum over the undetermined window of w(x) * f(x), and the window mass.
template <typename F>
std::pair<double, double> window_sum(const GapParams& g, F&& f) {
  const auto w = binomial_weights(2 * g.m);
  const auto [lo, hi] = undetermined_window(g);
  double total = 0.0, mass = 0.0;
  for (int x = lo; x <= hi; ++x) {
    total += w[static_cast<std::size_t>(x)] * f(x);
    mass += w[static_cast<std::size_t>(x)];
  }
  return {total, mass};
}

}  // namespace detail

/// Exact expected cost of the adaptive policy, conditioning on the free count.
inline double adaptive_L_cost(const GapParams& g) {
  const auto inst = build_L(g);
  return detail::window_sum(g, [&](int x) {
           return expected_cost(inst, adaptive_paid_order(g, x), Offset{x, 2 * g.m - x});
         }).first;
}

/// Exact expected cost of the economical non-adaptive policy, evaluated on
/// the full instance.
inline double na_L_cost(const GapParams& g, const PartialPolicy& paid_order) {
  const auto inst = build_L(g);
  detail::check_paid_order(g, paid_order);
  return expected_cost(inst, economical_policy(g, paid_order));
}

struct ConditionalCosts {
  double adaptive = 0.0;
  double nonadaptive = 0.0;
  /// Pr[X - m in [-t, t-1]].
  double window_probability = 0.0;
};

/// E[cost | X - m in [-t, t-1]] for the adaptive policy and an economical
/// non-adaptive policy.
inline ConditionalCosts conditional_costs(const GapParams& g, const PartialPolicy& paid_order) {
  const auto inst = build_L(g);
  detail::check_paid_order(g, paid_order);
  const auto [ad, mass] = detail::window_sum(g, [&](int x) {
    return expected_cost(inst, adaptive_paid_order(g, x), Offset{x, 2 * g.m - x});
  });
  const auto na = detail::window_sum(g, [&](int x) {
    return expected_cost(inst, paid_order, Offset{x, 2 * g.m - x});
  }).first;
  return ConditionalCosts{ad / mass, na / mass, mass};
}

struct GapRecord {
  int t = 0;
  int m = 0;
  double eps = 0.0;
  double e_adaptive = 0.0;
  double e_nonadaptive = 0.0;
  double ratio = 0.0;
  double limit = 0.0;
};

inline double limit_ratio(int t) { return static_cast<double>(2 * t + 1) / static_cast<double>(t + 1); }

/// One record per t with the alternating paid order.
inline std::vector<GapRecord> gap_table(const std::vector<int>& t_values, int m, double eps) {
  std::vector<GapRecord> out;
  out.reserve(t_values.size());
  for (int t : t_values) {
    const GapParams g{m, t, eps};
    GapRecord r{t, m, eps, adaptive_L_cost(g), na_L_cost(g, alternating_paid_order(g)), 0.0, limit_ratio(t)};
    r.ratio = r.e_nonadaptive / r.e_adaptive;
    out.push_back(r);
  }
  return out;
}

inline constexpr const char* kCsvHeader = "t,m,eps,e_adaptive,e_nonadaptive,ratio,limit";

inline std::string to_csv(const std::vector<GapRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : records) {
    os << r.t << ',' << r.m << ',' << r.eps << ',' << r.e_adaptive << ',' << r.e_nonadaptive << ',' << r.ratio << ','
       << r.limit << '\n';
  }
  return os.str();
}

}  // namespace sbfe::gapbench
