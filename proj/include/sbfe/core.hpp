#pragma once

// Instance model for stochastic k-of-n evaluation: variables, outcome
// semantics, non-adaptive (partial) policies and their composition.
//
// Indices are 0-based inside the library. External formats (JSON, CLI)
// use 1-based indices; conversion happens in sbfe/io.hpp.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sbfe {

using Index = int;
using Cost = std::int64_t;

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a brute-force routine is asked to run above its size cap.
class CapExceeded : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Raised before any work is done when an enumeration would exceed its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double estimate, double budget)
      : std::runtime_error(what), estimate_(estimate), budget_(budget) {}

  double estimate() const noexcept { return estimate_; }
  double budget() const noexcept { return budget_; }

 private:
  double estimate_;
  double budget_;
};

/// Approximation parameter whose reciprocal is a positive integer.
class Epsilon {
 public:
  explicit Epsilon(int inverse) : inverse_(inverse) {
    if (inverse < 1) throw ValidationError("epsilon reciprocal must be a positive integer");
  }

  int inverse() const noexcept { return inverse_; }
  double value() const noexcept { return 1.0 / inverse_; }

  friend bool operator==(const Epsilon&, const Epsilon&) = default;

 private:
  int inverse_;
};

/// A k-of-n instance with probabilities sorted ascending.
class Instance {
 public:
  /// Empty `costs` means unit cost.
  Instance(int k, std::vector<double> probabilities, std::vector<Cost> costs = {})
      : k_(k), p_(std::move(probabilities)), c_(std::move(costs)) {
    const auto n = static_cast<int>(p_.size());
    if (c_.empty()) c_.assign(p_.size(), 1);
    if (n < 1) throw ValidationError("instance needs at least one variable");
    if (c_.size() != p_.size()) throw ValidationError("cost and probability vectors differ in length");
    if (k_ < 1 || k_ > n) throw ValidationError("k must lie in [1, n]");
    for (double q : p_) {
      if (!(q > 0.0 && q < 1.0)) throw ValidationError("probabilities must lie strictly between 0 and 1");
    }
    if (!std::is_sorted(p_.begin(), p_.end())) {
      throw ValidationError("probabilities must be nondecreasing (use normalize)");
    }
    for (Cost ci : c_) {
      if (ci < 0) throw ValidationError("costs must be nonnegative");
    }
  }

  int n() const noexcept { return static_cast<int>(p_.size()); }
  int k() const noexcept { return k_; }
  /// Number of zeros that certify value 0.
  int zeros_needed() const noexcept { return n() - k_ + 1; }

  double p(Index i) const { return p_.at(static_cast<std::size_t>(i)); }
  Cost c(Index i) const { return c_.at(static_cast<std::size_t>(i)); }
  std::span<const double> probabilities() const noexcept { return p_; }
  std::span<const Cost> costs() const noexcept { return c_; }

  bool unit_cost() const noexcept {
    return std::all_of(c_.begin(), c_.end(), [](Cost ci) { return ci == 1; });
  }

  /// Cost charged when a partial policy ends without determining f.
  Cost undetermined_cost() const noexcept { return std::accumulate(c_.begin(), c_.end(), Cost{0}); }

 private:
  int k_;
  std::vector<double> p_;
  std::vector<Cost> c_;
};

struct Normalized {
  Instance instance;
  /// index_map[sorted position] = original position.
  std::vector<Index> index_map;
};

/// Stable-sorts variables by probability.
inline Normalized normalize(std::span<const double> raw_p, std::span<const Cost> raw_c, int k) {
  if (!raw_c.empty() && raw_c.size() != raw_p.size()) {
    throw ValidationError("cost and probability vectors differ in length");
  }
  for (double q : raw_p) {
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("probabilities must lie strictly between 0 and 1");
  }
  std::vector<Index> order(raw_p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return raw_p[a] < raw_p[b]; });

  std::vector<double> p;
  std::vector<Cost> c;
  p.reserve(order.size());
  c.reserve(order.size());
  for (Index i : order) {
    p.push_back(raw_p[i]);
    c.push_back(raw_c.empty() ? Cost{1} : raw_c[i]);
  }
  return Normalized{Instance(k, std::move(p), std::move(c)), std::move(order)};
}

using Outcome = std::vector<std::uint8_t>;

/// Counts of observed ones and zeros; sufficient for k-of-n determination.
struct DeterminationState {
  int ones = 0;
  int zeros = 0;
};

enum class Verdict { undetermined, value0, value1 };

inline Verdict is_determined(DeterminationState s, const Instance& inst) noexcept {
  if (s.ones >= inst.k()) return Verdict::value1;
  if (s.zeros >= inst.zeros_needed()) return Verdict::value0;
  return Verdict::undetermined;
}

/// Ordered sequence of distinct variable indices.
class PartialPolicy {
 public:
  PartialPolicy() = default;

  explicit PartialPolicy(std::vector<Index> order) : order_(std::move(order)) {
    std::vector<Index> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    if (!sorted.empty() && sorted.front() < 0) throw ValidationError("policy index is negative");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("policy repeats an index");
    }
  }

  static PartialPolicy identity(int n) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    return PartialPolicy(std::move(order));
  }

  std::span<const Index> order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }
  bool empty() const noexcept { return order_.empty(); }
  Index operator[](std::size_t i) const { return order_[i]; }
  auto begin() const noexcept { return order_.begin(); }
  auto end() const noexcept { return order_.end(); }

  bool fits(int n) const noexcept {
    return std::all_of(order_.begin(), order_.end(), [n](Index i) { return i < n; });
  }

  /// First `len` tests (or all of them).
  PartialPolicy prefix(std::size_t len) const {
    PartialPolicy out;
    out.order_.assign(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(std::min(len, order_.size())));
    return out;
  }

  friend bool operator==(const PartialPolicy&, const PartialPolicy&) = default;
  friend auto operator<=>(const PartialPolicy& a, const PartialPolicy& b) { return a.order_ <=> b.order_; }

 private:
  std::vector<Index> order_;
};

inline void require_fits(const PartialPolicy& pi, const Instance& inst) {
  if (!pi.fits(inst.n())) throw ValidationError("policy index out of range for instance");
}

/// Tests `first`, then `second` skipping anything already tested.
inline PartialPolicy compose(const PartialPolicy& first, const PartialPolicy& second) {
  std::vector<Index> order(first.begin(), first.end());
  for (Index i : second) {
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
  }
  return PartialPolicy(std::move(order));
}

/// Appends every untested index in ascending order.
inline PartialPolicy pad_complete(const PartialPolicy& pi, int n) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Index i : pi) {
    if (i >= n) throw ValidationError("policy index out of range for instance");
    seen[static_cast<std::size_t>(i)] = true;
    order.push_back(i);
  }
  for (Index i = 0; i < n; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) order.push_back(i);
  }
  return PartialPolicy(std::move(order));
}

inline PartialPolicy pad_complete(const PartialPolicy& pi, const Instance& inst) { return pad_complete(pi, inst.n()); }

}  // namespace sbfe
