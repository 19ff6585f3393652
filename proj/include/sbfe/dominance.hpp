#pragma once

// Two-sided dominance between index sets, milestone extraction and the
// milestone-driven bucket construction.
//
// Indices are positions in the probability-sorted instance, so a smaller
// index never has a larger probability.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "sbfe/core.hpp"

namespace sbfe {

/// Sorted set of distinct indices.
class IndexSet {
 public:
  IndexSet() = default;

  explicit IndexSet(std::vector<Index> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (!members_.empty() && members_.front() < 0) throw ValidationError("index set member is negative");
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
      throw ValidationError("index set repeats a member");
    }
  }

  std::span<const Index> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  bool contains(Index i) const { return std::binary_search(members_.begin(), members_.end(), i); }

  /// The `rank`-th smallest member, 1-based.
  Index nth_smallest(std::size_t rank) const { return members_.at(rank - 1); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<Index> members_;
};

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

/// |V ∩ [0, h]| >= |V* ∩ [0, h]| for every h.
inline bool left_dominates(const IndexSet& v, const IndexSet& vstar) {
  auto it = v.begin();
  std::size_t count_v = 0;
  std::size_t count_star = 0;
  for (Index h : vstar) {
    while (it != v.end() && *it <= h) {
      ++it;
      ++count_v;
    }
    if (count_v < ++count_star) return false;
  }
  return true;
}

/// |V ∩ [h, ∞)| >= |V* ∩ [h, ∞)| for every h.
inline bool right_dominates(const IndexSet& v, const IndexSet& vstar) {
  auto members = v.members();
  auto it = members.rbegin();
  std::size_t count_v = 0;
  std::size_t count_star = 0;
  auto star = vstar.members();
  for (auto s = star.rbegin(); s != star.rend(); ++s) {
    while (it != members.rend() && *it >= *s) {
      ++it;
      ++count_v;
    }
    if (count_v < ++count_star) return false;
  }
  return true;
}

/// Two-sided dominance V ⪰ V*.
inline bool dominates(const IndexSet& v, const IndexSet& vstar) {
  return left_dominates(v, vstar) && right_dominates(v, vstar);
}

/// positions[j-1] is the floor(j * |V*| / E)-th smallest member of V*, j = 1..E-1.
struct MilestoneVector {
  int eps_inverse = 1;
  int size = 0;
  std::vector<Index> positions;
};

inline int milestone_rank(int j, int size, Epsilon eps) {
  return static_cast<int>((static_cast<std::int64_t>(j) * size) / eps.inverse());
}

inline MilestoneVector milestones(const IndexSet& vstar, Epsilon eps) {
  const int size = static_cast<int>(vstar.size());
  if (size < eps.inverse()) throw ValidationError("milestones need |V*| >= 1/eps");
  MilestoneVector mv{eps.inverse(), size, {}};
  mv.positions.reserve(static_cast<std::size_t>(eps.inverse() - 1));
  for (int j = 1; j < eps.inverse(); ++j) {
    mv.positions.push_back(vstar.nth_smallest(static_cast<std::size_t>(milestone_rank(j, size, eps))));
  }
  return mv;
}

struct BucketTuple {
  std::vector<IndexSet> buckets;

  std::size_t total_size() const {
    std::size_t s = 0;
    for (const auto& b : buckets) s += b.size();
    return s;
  }
};

/// Builds buckets V_1..V_b from the sizes and milestones of V*_1..V*_b.
///
/// Per bucket the counter starts at eps*|V*_i| and gains eps*|V*_i| at each
/// milestone; a forward sweep takes every unused index while the counter is
/// at least 1, then the counter gains ceil(eps*|V*_i|) and a backward sweep
/// does the same. The counter is kept as an exact multiple of eps.
inline BucketTuple build_buckets(int n, std::span<const int> sizes, std::span<const MilestoneVector> milestone_vectors,
                                 Epsilon eps) {
  if (sizes.size() != milestone_vectors.size()) throw ValidationError("one milestone vector is needed per bucket");
  const std::int64_t e = eps.inverse();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<bool> is_milestone(static_cast<std::size_t>(n), false);
  BucketTuple out;
  out.buckets.reserve(sizes.size());

  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const std::int64_t size = sizes[b];
    const auto& mv = milestone_vectors[b];
    if (size < e) throw ValidationError("bucket size below 1/eps");
    if (mv.eps_inverse != eps.inverse() || mv.size != size ||
        mv.positions.size() != static_cast<std::size_t>(e - 1)) {
      throw ValidationError("milestone vector is inconsistent with bucket size or eps");
    }
    std::fill(is_milestone.begin(), is_milestone.end(), false);
    for (std::size_t j = 0; j < mv.positions.size(); ++j) {
      const Index m = mv.positions[j];
      if (m < 0 || m >= n) throw ValidationError("milestone out of range");
      if (j > 0 && m < mv.positions[j - 1]) throw ValidationError("milestones must be nondecreasing");
      is_milestone[static_cast<std::size_t>(m)] = true;
    }

    // counter == numerator / e
    std::int64_t numerator = size;
    std::vector<Index> bucket;
    for (Index f = 0; f < n; ++f) {
      if (is_milestone[static_cast<std::size_t>(f)]) numerator += size;
      if (numerator >= e && !used[static_cast<std::size_t>(f)]) {
        bucket.push_back(f);
        used[static_cast<std::size_t>(f)] = true;
        numerator -= e;
      }
    }
    numerator += ((size + e - 1) / e) * e;
    for (Index f = n - 1; f >= 0; --f) {
      if (numerator >= e && !used[static_cast<std::size_t>(f)]) {
        bucket.push_back(f);
        used[static_cast<std::size_t>(f)] = true;
        numerator -= e;
      }
    }
    out.buckets.emplace_back(std::move(bucket));
  }
  return out;
}

/// Concatenates buckets, each in ascending index (ascending probability) order.
inline PartialPolicy buckets_to_policy(const BucketTuple& t) {
  std::vector<Index> order;
  order.reserve(t.total_size());
  for (const auto& b : t.buckets) order.insert(order.end(), b.begin(), b.end());
  return PartialPolicy(std::move(order));
}

}  // namespace sbfe
