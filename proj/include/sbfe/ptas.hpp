#pragma once

// Approximation scheme for the optimal non-adaptive policy (unit cost).
//
// The horizon 1..n is cut at thresholds 1 = a_0 < a_1 < ... with
// a_j = 2^(j/eps + shift). For each window [a_j, a_{j+1}] a partial policy
// of length a_{j+1} is chosen that minimizes the bounded score; the windows'
// policies are composed and the cheapest shift wins.
//
// Windows that start early are solved by enumerating every ordered prefix.
// Later windows split a reference prefix into buckets, guess the buckets'
// milestones and rebuild dominating buckets from them. In guided mode the
// milestones are read off a given reference policy instead of enumerated,
// which makes the bucket machinery usable at realistic n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbfe/core.hpp"
#include "sbfe/dominance.hpp"
#include "sbfe/eval.hpp"

namespace sbfe::ptas {

inline constexpr double kDefaultBudget = 1e8;
inline constexpr double kScoreTolerance = 1e-12;

/// 1/ceil(56/eps_target): three bucket-level (1+2x) factors and the final
/// (1+4x) composition factor together stay below 1 + eps_target.
inline Epsilon internal_epsilon(double eps_target) {
  if (!(eps_target > 0.0)) throw ValidationError("eps must be positive");
  if (eps_target > 1.0) throw ValidationError("eps must not exceed 1");
  const double inverse = std::ceil(56.0 / eps_target);
  if (inverse > static_cast<double>(std::numeric_limits<int>::max())) throw ValidationError("eps is too small");
  return Epsilon(static_cast<int>(inverse));
}

/// (1+2eps)^3 - 1: the per-window loss of the bucket construction.
inline double bucket_loss(Epsilon eps) {
  const double r = 1.0 + 2.0 * eps.value();
  return r * r * r - 1.0;
}

enum class BoundedCase { full_enumeration, single_tail, uniform_tail };

inline const char* case_tag(BoundedCase c) {
  switch (c) {
    case BoundedCase::full_enumeration: return "1";
    case BoundedCase::single_tail: return "2a";
    case BoundedCase::uniform_tail: return "2b";
  }
  return "?";
}

struct BucketPlan {
  BoundedCase kind = BoundedCase::full_enumeration;
  std::vector<int> sizes;  // empty for full enumeration
};

struct BoundedSpec {
  int lower = 1;  // first threshold of the window
  int upper = 2;  // last threshold; policies stop after this many tests
  Epsilon eps{1};
};

struct EnumerationOptions {
  double budget = kDefaultBudget;
  /// Test hook: use the bucket construction whenever it is well defined
  /// instead of only above the full-enumeration threshold.
  bool force_bucket_cases = false;
};

/// Windows starting below (2/eps + 1)^2 = 4(1+eps)/eps^2 + 1 are enumerated in full.
inline std::int64_t full_enumeration_threshold(Epsilon eps) {
  const std::int64_t r = 2 * static_cast<std::int64_t>(eps.inverse()) + 1;
  return r * r;
}

/// floor((a-1)/(1+2eps)).
inline int head_bucket_size(int lower, Epsilon eps) {
  const std::int64_t e = eps.inverse();
  return static_cast<int>((static_cast<std::int64_t>(lower - 1) * e) / (e + 2));
}

namespace detail {

inline BucketPlan bucket_cases_plan(int lower, int upper, Epsilon eps) {
  const int e = eps.inverse();
  const int head = head_bucket_size(lower, eps);
  int rest = upper - head;
  BucketPlan plan;
  plan.sizes.push_back(head);
  if (rest < 2 * e) {
    plan.kind = BoundedCase::single_tail;
    plan.sizes.push_back(rest);
    return plan;
  }
  plan.kind = BoundedCase::uniform_tail;
  while (rest > 2 * e) {
    plan.sizes.push_back(e);
    rest -= e;
  }
  plan.sizes.push_back(rest);
  return plan;
}

inline void check_window(int lower, int upper) {
  if (lower < 1 || lower >= upper) throw ValidationError("window needs 1 <= a < a'");
}

}  // namespace detail

/// Bucket sizes |V*_1|, ..., |V*_b| for the window [lower, upper].
inline BucketPlan bucket_size_plan(int lower, int upper, Epsilon eps) {
  detail::check_window(lower, upper);
  if (lower < full_enumeration_threshold(eps)) return BucketPlan{};
  return detail::bucket_cases_plan(lower, upper, eps);
}

inline BucketPlan plan_for(const BoundedSpec& spec, const EnumerationOptions& opt) {
  detail::check_window(spec.lower, spec.upper);
  if (opt.force_bucket_cases && head_bucket_size(spec.lower, spec.eps) >= spec.eps.inverse()) {
    return detail::bucket_cases_plan(spec.lower, spec.upper, spec.eps);
  }
  return bucket_size_plan(spec.lower, spec.upper, spec.eps);
}

namespace detail {

inline double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return out;
}

inline void check_bounded(const Instance& inst, const BoundedSpec& spec) {
  if (!inst.unit_cost()) throw ValidationError("bounded enumeration is defined for unit-cost instances only");
  check_window(spec.lower, spec.upper);
  if (spec.upper > inst.n()) throw ValidationError("window end a' exceeds n");
}

/// Truncates to `len` tests, or appends the smallest unused indices.
inline PartialPolicy fit_length(std::vector<Index> order, int n, int len) {
  if (static_cast<int>(order.size()) > len) order.resize(static_cast<std::size_t>(len));
  if (static_cast<int>(order.size()) < len) {
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Index i : order) used[static_cast<std::size_t>(i)] = true;
    for (Index i = 0; i < n && static_cast<int>(order.size()) < len; ++i) {
      if (!used[static_cast<std::size_t>(i)]) order.push_back(i);
    }
  }
  return PartialPolicy(std::move(order));
}

// Enumerates the milestone vectors compatible with a bucket of `size`
// elements: positions strictly increase with rank gaps respected and avoid
// milestones already claimed by earlier buckets.
class MilestoneEnumerator {
 public:
  MilestoneEnumerator(int n, Epsilon eps) : n_(n), eps_(eps), claimed_(static_cast<std::size_t>(n), false) {}

  void run(std::span<const int> sizes, const std::function<void(std::span<const MilestoneVector>)>& leaf) {
    sizes_ = sizes;
    chosen_.assign(sizes.size(), MilestoneVector{});
    leaf_ = &leaf;
    bucket(0);
  }

 private:
  void bucket(std::size_t b) {
    if (b == sizes_.size()) {
      (*leaf_)(chosen_);
      return;
    }
    chosen_[b] = MilestoneVector{eps_.inverse(), sizes_[b], {}};
    position(b, 1, 0);
  }

  void position(std::size_t b, int j, Index floor) {
    const int size = sizes_[b];
    if (j == eps_.inverse()) {
      bucket(b + 1);
      return;
    }
    const int rank = milestone_rank(j, size, eps_);
    Index lo = std::max<Index>(floor, rank - 1);
    const Index hi = n_ - 1 - (size - rank);
    for (Index pos = lo; pos <= hi; ++pos) {
      if (claimed_[static_cast<std::size_t>(pos)]) continue;
      claimed_[static_cast<std::size_t>(pos)] = true;
      chosen_[b].positions.push_back(pos);
      const int next_rank = j + 1 < eps_.inverse() ? milestone_rank(j + 1, size, eps_) : rank;
      position(b, j + 1, pos + (next_rank - rank));
      chosen_[b].positions.pop_back();
      claimed_[static_cast<std::size_t>(pos)] = false;
    }
  }

  int n_;
  Epsilon eps_;
  std::vector<bool> claimed_;
  std::span<const int> sizes_;
  std::vector<MilestoneVector> chosen_;
  const std::function<void(std::span<const MilestoneVector>)>* leaf_ = nullptr;
};

inline void for_each_combination(std::span<const Index> pool, int r, const std::function<void(std::span<const Index>)>& f) {
  std::vector<Index> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (static_cast<int>(pick.size()) == r) {
      f(pick);
      return;
    }
    const std::size_t missing = static_cast<std::size_t>(r) - pick.size();
    for (std::size_t i = from; i + missing <= pool.size(); ++i) {
      pick.push_back(pool[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace detail

/// Upper bound on the number of candidates enumerate_bounded emits.
inline double enumeration_estimate(const Instance& inst, const BoundedSpec& spec, const EnumerationOptions& opt = {}) {
  detail::check_bounded(inst, spec);
  const auto plan = plan_for(spec, opt);
  const int n = inst.n();
  if (plan.kind == BoundedCase::full_enumeration) {
    double count = 1.0;
    for (int i = 0; i < spec.upper; ++i) count *= static_cast<double>(n - i);
    return count;
  }
  const double per_bucket = detail::binomial(n, spec.eps.inverse() - 1);
  if (plan.kind == BoundedCase::single_tail) {
    return per_bucket * std::max(1.0, detail::binomial(n, plan.sizes[1]));
  }
  double count = 1.0;
  for (std::size_t b = 0; b < plan.sizes.size(); ++b) count *= per_bucket;
  return count;
}

/// Streams candidate partial policies of length exactly a' to `visit`.
/// Returns the number of candidates emitted.
inline std::size_t enumerate_bounded(const Instance& inst, const BoundedSpec& spec,
                                     const std::function<void(const PartialPolicy&)>& visit,
                                     const EnumerationOptions& opt = {}) {
  const double estimate = enumeration_estimate(inst, spec, opt);
  if (estimate > opt.budget) {
    throw BudgetExceeded("enumeration estimate " + std::to_string(estimate) + " exceeds budget " +
                             std::to_string(opt.budget),
                         estimate, opt.budget);
  }
  const auto plan = plan_for(spec, opt);
  const int n = inst.n();
  std::size_t emitted = 0;

  if (plan.kind == BoundedCase::full_enumeration) {
    std::vector<Index> order;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    auto rec = [&](auto&& self) -> void {
      if (static_cast<int>(order.size()) == spec.upper) {
        visit(PartialPolicy(order));
        ++emitted;
        return;
      }
      for (Index v = 0; v < n; ++v) {
        if (used[static_cast<std::size_t>(v)]) continue;
        used[static_cast<std::size_t>(v)] = true;
        order.push_back(v);
        self(self);
        order.pop_back();
        used[static_cast<std::size_t>(v)] = false;
      }
    };
    rec(rec);
    return emitted;
  }

  detail::MilestoneEnumerator milestones_of(n, spec.eps);
  if (plan.kind == BoundedCase::uniform_tail) {
    milestones_of.run(plan.sizes, [&](std::span<const MilestoneVector> mvs) {
      const auto tuple = build_buckets(n, plan.sizes, mvs, spec.eps);
      const auto joined = buckets_to_policy(tuple);
      visit(detail::fit_length({joined.begin(), joined.end()}, n, spec.upper));
      ++emitted;
    });
    return emitted;
  }

  // Single tail bucket: the head bucket is rebuilt from milestones, the tail
  // bucket is enumerated outright among the unused indices.
  const std::vector<int> head_size{plan.sizes[0]};
  const int tail_size = plan.sizes[1];
  milestones_of.run(head_size, [&](std::span<const MilestoneVector> mvs) {
    const auto tuple = build_buckets(n, head_size, mvs, spec.eps);
    const auto& head = tuple.buckets.front();
    std::vector<Index> pool;
    for (Index i = 0; i < n; ++i) {
      if (!head.contains(i)) pool.push_back(i);
    }
    const int r = std::min<int>(tail_size, static_cast<int>(pool.size()));
    detail::for_each_combination(pool, r, [&](std::span<const Index> tail) {
      std::vector<Index> order(head.begin(), head.end());
      order.insert(order.end(), tail.begin(), tail.end());
      visit(detail::fit_length(std::move(order), n, spec.upper));
      ++emitted;
    });
  });
  return emitted;
}

struct BoundedChoice {
  PartialPolicy policy;
  double score = std::numeric_limits<double>::infinity();
  std::size_t candidates = 0;
};

/// The enumerated candidate with the smallest bounded score; ties go to the
/// lexicographically smallest index sequence.
inline BoundedChoice best_bounded(const Instance& inst, const BoundedSpec& spec, const EnumerationOptions& opt = {}) {
  BoundedChoice best;
  bool have = false;
  best.candidates = enumerate_bounded(
      inst, spec,
      [&](const PartialPolicy& pi) {
        const double s = bounded_score(cost_tail(inst, pi), spec.lower, spec.upper);
        if (!have || s < best.score - kScoreTolerance ||
            (s <= best.score + kScoreTolerance && pi < best.policy)) {
          best.policy = pi;
          best.score = s;
          have = true;
        }
      },
      opt);
  return best;
}

// ---------------------------------------------------------------------------
// Guided certification

struct CertificationRow {
  int level = 0;
  double policy_tail = 0.0;     // Pr[cost(pi) >= level]
  double reference_tail = 0.0;  // Pr[(1+2eps)^3 cost(reference) >= level]
};

struct Certification {
  PartialPolicy policy;
  BucketPlan plan;
  std::vector<IndexSet> reference_buckets;
  std::vector<IndexSet> buckets;
  bool sizes_ok = true;
  bool dominance_ok = true;
  std::vector<CertificationRow> rows;
  bool pass = true;
};

namespace detail {

/// Smallest integer c with (1+2eps)^3 * c >= level.
inline Cost scaled_threshold(int level, Epsilon eps) {
  const std::int64_t e = eps.inverse();
  const std::int64_t num = static_cast<std::int64_t>(level) * e * e * e;
  const std::int64_t den = (e + 2) * (e + 2) * (e + 2);
  return (num + den - 1) / den;
}

inline void fill_rows(const Instance& inst, const PartialPolicy& pi, const PartialPolicy& reference,
                      const BoundedSpec& spec, Certification& cert) {
  const auto tail_pi = cost_tail(inst, pi);
  const auto tail_ref = cost_tail(inst, reference);
  cert.rows.clear();
  for (int level = spec.lower; level <= spec.upper; ++level) {
    CertificationRow row{level, tail_pi.at(level), tail_ref.at(scaled_threshold(level, spec.eps))};
    if (row.policy_tail > row.reference_tail + kScoreTolerance) cert.pass = false;
    cert.rows.push_back(row);
  }
}

}  // namespace detail

/// Builds the window policy from the reference's own bucket sizes and
/// milestones and checks Pr[cost(pi) >= l] <= Pr[(1+2eps)^3 cost(ref) >= l]
/// for every l in [a, a'].
inline Certification certify_bounded(const Instance& inst, const PartialPolicy& reference, const BoundedSpec& spec) {
  detail::check_bounded(inst, spec);
  require_fits(reference, inst);
  const std::int64_t e = spec.eps.inverse();
  if (static_cast<std::int64_t>(spec.lower) * e < 2 * (e + 1) * (e + 1)) {
    throw ValidationError("certification needs a >= 2(1+eps)^2/eps");
  }
  if (reference.size() < static_cast<std::size_t>(spec.upper)) {
    throw ValidationError("reference policy is shorter than a'");
  }
  const int n = inst.n();
  Certification cert;
  cert.plan = detail::bucket_cases_plan(spec.lower, spec.upper, spec.eps);
  if (cert.plan.sizes.front() < e) throw ValidationError("head bucket is smaller than 1/eps");

  std::size_t at = 0;
  for (int size : cert.plan.sizes) {
    std::vector<Index> members(reference.begin() + static_cast<std::ptrdiff_t>(at),
                               reference.begin() + static_cast<std::ptrdiff_t>(at + static_cast<std::size_t>(size)));
    cert.reference_buckets.emplace_back(std::move(members));
    at += static_cast<std::size_t>(size);
  }

  if (cert.plan.kind == BoundedCase::uniform_tail) {
    std::vector<MilestoneVector> mvs;
    for (const auto& b : cert.reference_buckets) mvs.push_back(milestones(b, spec.eps));
    cert.buckets = build_buckets(n, cert.plan.sizes, mvs, spec.eps).buckets;
  } else {
    const std::vector<int> head_size{cert.plan.sizes.front()};
    const std::vector<MilestoneVector> mvs{milestones(cert.reference_buckets.front(), spec.eps)};
    cert.buckets = build_buckets(n, head_size, mvs, spec.eps).buckets;
    std::vector<Index> tail;
    for (Index i : cert.reference_buckets[1]) {
      if (!cert.buckets.front().contains(i)) tail.push_back(i);
    }
    cert.buckets.emplace_back(std::move(tail));
  }

  IndexSet built, target;
  for (std::size_t b = 0; b < cert.buckets.size(); ++b) {
    if (e * static_cast<std::int64_t>(cert.buckets[b].size()) >
        (e + 2) * static_cast<std::int64_t>(cert.reference_buckets[b].size())) {
      cert.sizes_ok = false;
    }
    built = set_union(built, cert.buckets[b]);
    target = set_union(target, cert.reference_buckets[b]);
    if (!dominates(built, target)) cert.dominance_ok = false;
  }

  const auto joined = buckets_to_policy(BucketTuple{cert.buckets});
  cert.policy = detail::fit_length({joined.begin(), joined.end()}, n, spec.upper);
  detail::fill_rows(inst, cert.policy, reference, spec, cert);
  cert.pass = cert.pass && cert.sizes_ok && cert.dominance_ok;
  return cert;
}

// ---------------------------------------------------------------------------
// Shift schedule and composition

struct ShiftSchedule {
  int shift = 0;
  /// 1 = a_0 < a_1 < ... < a_{h+1}; the last entry is capped at n.
  std::vector<int> thresholds;

  int h() const noexcept { return static_cast<int>(thresholds.size()) - 2; }
};

inline ShiftSchedule make_shift_schedule(int n, Epsilon eps, int shift) {
  if (n < 2) throw ValidationError("shift schedule needs n >= 2");
  if (shift < 0 || shift >= eps.inverse()) throw ValidationError("shift must lie in [0, 1/eps)");
  ShiftSchedule s{shift, {1}};
  for (std::int64_t j = 1;; ++j) {
    const std::int64_t exponent = static_cast<std::int64_t>(eps.inverse()) * j + shift;
    const std::int64_t value = exponent >= 62 ? n : std::min<std::int64_t>(std::int64_t{1} << exponent, n);
    s.thresholds.push_back(static_cast<int>(value));
    if (value >= n) break;
  }
  return s;
}

/// sum_j a_j * Pr[(1+eps) cost >= a_j] over a_j = 2^(j/eps + shift), j >= 0.
/// Summed over all shifts this is below 2(1+eps) E[cost], so some shift
/// contributes at most 2 eps (1+eps) E[cost].
inline double shift_contribution(const TailDistribution& tail, Epsilon eps, int shift) {
  if (shift < 0 || shift >= eps.inverse()) throw ValidationError("shift must lie in [0, 1/eps)");
  const std::int64_t e = eps.inverse();
  const auto horizon = static_cast<std::int64_t>(tail.tail.size());
  double total = 0.0;
  for (std::int64_t j = 0;; ++j) {
    const std::int64_t exponent = e * j + shift;
    if (exponent >= 62) break;
    const std::int64_t a = std::int64_t{1} << exponent;
    // (1+eps) cost >= a  <=>  cost >= ceil(a e / (e+1))
    const std::int64_t level = (a / (e + 1)) * e + ((a % (e + 1)) * e + e) / (e + 1);
    if (level >= horizon) break;
    total += static_cast<double>(a) * tail.at(level);
  }
  return total;
}

struct LevelResult {
  int lower = 0;
  int upper = 0;
  BoundedCase kind = BoundedCase::full_enumeration;
  PartialPolicy policy;
  double score = 0.0;
  std::size_t candidates = 0;
  std::optional<Certification> certification;  // guided mode only
};

struct PtasOptions {
  Epsilon eps{56};
  EnumerationOptions enumeration{};
  /// Guided mode when set: windows are built from this complete policy.
  std::optional<PartialPolicy> reference;
};

struct PtasResult {
  PartialPolicy policy;
  double expected = 0.0;
  int shift = 0;
  Epsilon eps{1};
  std::vector<LevelResult> levels;
  /// Guided mode: every window of every shift certified.
  bool certified = true;
};

inline PtasOptions options_for_target(double eps_target) {
  PtasOptions o;
  o.eps = internal_epsilon(eps_target);
  return o;
}

namespace detail {

inline LevelResult solve_level(const Instance& inst, int lower, int upper, const PtasOptions& opt) {
  const BoundedSpec spec{lower, upper, opt.eps};
  LevelResult out;
  out.lower = lower;
  out.upper = upper;
  out.kind = plan_for(spec, opt.enumeration).kind;
  if (!opt.reference) {
    auto choice = best_bounded(inst, spec, opt.enumeration);
    out.policy = std::move(choice.policy);
    out.score = choice.score;
    out.candidates = choice.candidates;
    return out;
  }
  const auto& reference = *opt.reference;
  if (out.kind == BoundedCase::full_enumeration) {
    // The reference's own prefix is the enumerated candidate that matches it.
    Certification cert;
    cert.policy = reference.prefix(static_cast<std::size_t>(upper));
    fill_rows(inst, cert.policy, reference, spec, cert);
    out.policy = cert.policy;
    out.certification = std::move(cert);
  } else {
    auto cert = certify_bounded(inst, reference, spec);
    out.policy = cert.policy;
    out.certification = std::move(cert);
  }
  out.candidates = 1;
  out.score = bounded_score(cost_tail(inst, out.policy), lower, upper);
  return out;
}

}  // namespace detail

/// Runs every shift, composes the window policies, and returns the
/// cheapest complete policy.
inline PtasResult ptas(const Instance& inst, const PtasOptions& opt) {
  if (!inst.unit_cost()) throw ValidationError("the approximation scheme is defined for unit-cost instances only");
  const int n = inst.n();
  if (opt.reference && (opt.reference->size() != static_cast<std::size_t>(n) || !opt.reference->fits(n))) {
    throw ValidationError("guided mode needs a complete reference policy");
  }
  PtasResult best;
  best.eps = opt.eps;
  if (n == 1) {
    best.policy = PartialPolicy::identity(1);
    best.expected = expected_cost(inst, best.policy);
    return best;
  }

  std::vector<ShiftSchedule> schedules;
  for (int shift = 0; shift < opt.eps.inverse(); ++shift) {
    auto s = make_shift_schedule(n, opt.eps, shift);
    // Shifts whose capped schedules coincide yield identical policies.
    const bool duplicate = std::any_of(schedules.begin(), schedules.end(),
                                       [&](const ShiftSchedule& o) { return o.thresholds == s.thresholds; });
    if (!duplicate) schedules.push_back(std::move(s));
  }

  if (!opt.reference) {
    std::map<std::pair<int, int>, double> windows;
    for (const auto& s : schedules) {
      for (std::size_t j = 0; j + 1 < s.thresholds.size(); ++j) {
        const BoundedSpec spec{s.thresholds[j], s.thresholds[j + 1], opt.eps};
        windows[{spec.lower, spec.upper}] = enumeration_estimate(inst, spec, opt.enumeration);
      }
    }
    double total = 0.0;
    for (const auto& [key, estimate] : windows) total += estimate;
    if (total > opt.enumeration.budget) {
      throw BudgetExceeded("enumeration estimate " + std::to_string(total) + " exceeds budget " +
                               std::to_string(opt.enumeration.budget),
                           total, opt.enumeration.budget);
    }
  }

  std::map<std::pair<int, int>, LevelResult> solved;
  bool have = false;
  for (const auto& s : schedules) {
    std::vector<LevelResult> levels;
    PartialPolicy composed;
    for (std::size_t j = 0; j + 1 < s.thresholds.size(); ++j) {
      const std::pair<int, int> key{s.thresholds[j], s.thresholds[j + 1]};
      auto it = solved.find(key);
      if (it == solved.end()) it = solved.emplace(key, detail::solve_level(inst, key.first, key.second, opt)).first;
      composed = compose(composed, it->second.policy);
      levels.push_back(it->second);
    }
    auto complete = pad_complete(composed, n);
    const double cost = expected_cost(inst, complete);
    if (!have || cost < best.expected - kScoreTolerance) {
      best.policy = std::move(complete);
      best.expected = cost;
      best.shift = s.shift;
      best.levels = std::move(levels);
      have = true;
    }
  }
  best.certified = std::all_of(solved.begin(), solved.end(), [](const auto& kv) {
    return !kv.second.certification || kv.second.certification->pass;
  });
  return best;
}

inline PtasResult ptas(const Instance& inst, double eps_target) { return ptas(inst, options_for_target(eps_target)); }

/// (1 + 4 * ((1+2eps)^3 - 1)): the guaranteed factor against the reference
/// when every window certifies.
inline double guided_chain_factor(Epsilon eps) { return 1.0 + 4.0 * bucket_loss(eps); }

/// Orders variables by distance of p from 1/2, most extreme first; ties by index.
inline PartialPolicy extreme_first_policy(const Instance& inst) {
  auto order = PartialPolicy::identity(inst.n());
  std::vector<Index> v(order.begin(), order.end());
  std::stable_sort(v.begin(), v.end(), [&](Index a, Index b) {
    return std::abs(inst.p(a) - 0.5) > std::abs(inst.p(b) - 0.5);
  });
  return PartialPolicy(std::move(v));
}

}  // namespace sbfe::ptas
