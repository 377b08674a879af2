#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfishcc/fds.hpp"

namespace selfishcc {

/// An ordering of all K users. order[i] is the user at (0-based) position i.
struct UserPermutation {
  std::vector<int> order;

  UserPermutation() = default;
  explicit UserPermutation(std::vector<int> o) : order(std::move(o)) {}

  static UserPermutation identity(int user_count) {
    std::vector<int> o(static_cast<std::size_t>(user_count));
    std::iota(o.begin(), o.end(), 1);
    return UserPermutation(std::move(o));
  }

  [[nodiscard]] int size() const { return static_cast<int>(order.size()); }
  [[nodiscard]] int user_at(int position) const { return order.at(static_cast<std::size_t>(position - 1)); }
  /// 1-based position of a user.
  [[nodiscard]] int position_of(int user) const {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == user) return static_cast<int>(i) + 1;
    throw std::invalid_argument("user not present in permutation");
  }
  [[nodiscard]] bool is_permutation_of(int user_count) const {
    if (static_cast<int>(order.size()) != user_count) return false;
    UserSet seen;
    for (int u : order) {
      if (u < 1 || u > user_count || seen.contains(u)) return false;
      seen = seen.with(u);
    }
    return true;
  }
  /// Rotation starting at (0-based) offset.
  [[nodiscard]] UserPermutation rotated(int offset) const {
    const int n = size();
    std::vector<int> o(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) o[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>((i + offset) % n)];
    return UserPermutation(std::move(o));
  }
  [[nodiscard]] std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(order[i]);
    }
    return s + ")";
  }

  friend bool operator==(const UserPermutation&, const UserPermutation&) = default;
};

/// The K rotations of a permutation, starting from the permutation itself.
inline std::vector<UserPermutation> circular_shifts(const UserPermutation& u) {
  std::vector<UserPermutation> out;
  out.reserve(static_cast<std::size_t>(u.size()));
  for (int r = 0; r < u.size(); ++r) out.push_back(u.rotated(r));
  return out;
}

/// Closed-form count of rotations of `u` in which k1 precedes k2: with l the
/// cyclic step count from k1's slot to k2's slot, exactly K - l rotations
/// keep k1 in front.
inline int rotations_with_order(const UserPermutation& u, int k1, int k2) {
  if (k1 == k2) throw std::invalid_argument("need two distinct users");
  const int n = u.size();
  const int p1 = u.position_of(k1);
  const int p2 = u.position_of(k2);
  const int l = ((p2 - p1) % n + n) % n;  // in [1, n-1]
  return n - l;
}

/// Directed request graph on users: an edge k1 -> k2 says the file user k1
/// asked for also belongs to user k2's demand set.
struct FdsRequestGraph {
  int users = 0;
  std::vector<UserSet> out_edges;  // out_edges[k-1] = targets of user k

  [[nodiscard]] bool has_edge(int k1, int k2) const {
    return out_edges.at(static_cast<std::size_t>(k1 - 1)).contains(k2);
  }
  [[nodiscard]] int edge_count() const {
    int n = 0;
    for (const UserSet& e : out_edges) n += e.size();
    return n;
  }
  [[nodiscard]] int bidirectional_edge_count() const {
    int n = 0;
    for (int a = 1; a <= users; ++a)
      for (int b = a + 1; b <= users; ++b)
        if (has_edge(a, b) && has_edge(b, a)) ++n;
    return n;
  }
  [[nodiscard]] bool is_complete() const {
    for (int k = 1; k <= users; ++k)
      if (out_edges[static_cast<std::size_t>(k - 1)] != UserSet::all(users).without(k)) return false;
    return true;
  }

  friend bool operator==(const FdsRequestGraph&, const FdsRequestGraph&) = default;
};

inline FdsRequestGraph fds_request_graph(const FdsStructure& s, const Demand& dm) {
  require_valid_demand(s, dm);
  FdsRequestGraph g;
  g.users = s.users;
  g.out_edges.resize(static_cast<std::size_t>(s.users));
  for (int k = 1; k <= s.users; ++k)
    g.out_edges[static_cast<std::size_t>(k - 1)] = dm.class_of(k).without(k);
  return g;
}

/// Brute-force isomorphism, meant for the small structures where request
/// graphs are actually compared.
inline bool graphs_isomorphic(const FdsRequestGraph& a, const FdsRequestGraph& b) {
  if (a.users != b.users) return false;
  if (a.users > 8) throw std::domain_error("isomorphism check supported up to 8 users");
  std::vector<int> perm(static_cast<std::size_t>(a.users));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    bool match = true;
    for (int k1 = 1; k1 <= a.users && match; ++k1)
      for (int k2 = 1; k2 <= a.users && match; ++k2)
        if (k1 != k2 &&
            a.has_edge(k1, k2) != b.has_edge(perm[static_cast<std::size_t>(k1 - 1)],
                                             perm[static_cast<std::size_t>(k2 - 1)]))
          match = false;
    if (match) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// True when the demand's classes follow the cyclic window pattern of `u`:
/// each user's class is exactly itself plus the next alpha-1 users along u.
inline bool satisfies_circular_pattern(const FdsStructure& s, const Demand& dm,
                                       const UserPermutation& u) {
  if (!u.is_permutation_of(s.users)) return false;
  const int n = s.users;
  for (int p = 0; p < n; ++p) {
    UserSet window;
    for (int i = 0; i < s.audience_size; ++i)
      window = window.with(u.order[static_cast<std::size_t>((p + i) % n)]);
    if (dm.classes[static_cast<std::size_t>(u.order[static_cast<std::size_t>(p)] - 1)] != window)
      return false;
  }
  return true;
}

namespace detail {

// Depth-first witness search, position by position. A user placed at
// position p must belong to the class of every already-placed user whose
// window still covers p; this prunes almost everything. Wrap-around windows
// are settled by the final full check.
inline bool witness_search(const FdsStructure& s, const Demand& dm, std::vector<int>& order,
                           UserSet used) {
  const int n = s.users;
  const int p = static_cast<int>(order.size());
  if (p == n) return satisfies_circular_pattern(s, dm, UserPermutation(order));
  const int window_start = std::max(0, p - s.audience_size + 1);
  for (int candidate = 1; candidate <= n; ++candidate) {
    if (used.contains(candidate)) continue;
    bool admissible = true;
    for (int j = window_start; j < p && admissible; ++j)
      admissible = dm.class_of(order[static_cast<std::size_t>(j)]).contains(candidate);
    if (!admissible) continue;
    order.push_back(candidate);
    if (witness_search(s, dm, order, used.with(candidate))) return true;
    order.pop_back();
  }
  return false;
}

}  // namespace detail

/// Finds the user ordering witnessing that a demand is circular, canonically
/// rotated to start at user 1; absent when the demand is not circular. The
/// file-index vector plays no role here.
inline std::optional<UserPermutation> circular_witness(const FdsStructure& s, const Demand& dm) {
  require_valid_demand(s, dm);
  if (s.audience_size == 1 || s.audience_size == s.users) {
    // classes are forced in both degenerate regimes, so every valid demand
    // is circular under any ordering
    return UserPermutation::identity(s.users);
  }
  std::vector<int> order{1};
  if (detail::witness_search(s, dm, order, UserSet::of({1})))
    return UserPermutation(std::move(order));
  return std::nullopt;
}

struct CircularDemand {
  Demand demand;
  UserPermutation witness;
};

/// Random access over all circular demands, keyed by the canonical witness
/// (u1 = 1) and the file-index vector: f^K * (K-1)! entries in total. Only
/// defined for 2 <= alpha <= K-1, the regime where the witness rotation
/// class determines the demand one-to-one.
class CircularDemandSpace {
public:
  explicit CircularDemandSpace(const FdsStructure& s) : structure_(s) {
    if (s.audience_size < 2 || s.audience_size > s.users - 1)
      throw std::domain_error("circular enumeration needs 2 <= alpha <= K-1");
    perm_count_ = static_cast<std::uint64_t>(factorial(s.users - 1));
    file_count_ = checked_pow(static_cast<std::uint64_t>(s.files_per_class), s.users);
    unsigned __int128 total = static_cast<unsigned __int128>(perm_count_) * file_count_;
    if (total > UINT64_MAX) throw std::overflow_error("circular demand count overflows 64 bits");
    size_ = static_cast<std::uint64_t>(total);
    tail_.resize(static_cast<std::size_t>(s.users - 1));
    std::iota(tail_.begin(), tail_.end(), 2);
  }

  [[nodiscard]] std::uint64_t size() const { return size_; }

  [[nodiscard]] CircularDemand at(std::uint64_t index) const {
    if (index >= size_) throw std::out_of_range("circular demand index out of range");
    const std::uint64_t perm_rank = index / file_count_;
    std::uint64_t file_rank = index % file_count_;

    std::vector<int> order{1};
    for (int u : unrank_permutation(tail_, perm_rank)) order.push_back(u);
    UserPermutation witness(std::move(order));

    const int n = structure_.users;
    Demand dm;
    dm.classes.resize(static_cast<std::size_t>(n));
    dm.files.resize(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
      UserSet window;
      for (int i = 0; i < structure_.audience_size; ++i)
        window = window.with(witness.order[static_cast<std::size_t>((p + i) % n)]);
      dm.classes[static_cast<std::size_t>(witness.order[static_cast<std::size_t>(p)] - 1)] = window;
    }
    const auto f = static_cast<std::uint64_t>(structure_.files_per_class);
    for (int k = n; k >= 1; --k) {
      dm.files[static_cast<std::size_t>(k - 1)] = static_cast<int>(file_rank % f) + 1;
      file_rank /= f;
    }
    return {std::move(dm), std::move(witness)};
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t i = 0; i < size_; ++i) fn(at(i));
  }

private:
  FdsStructure structure_;
  std::vector<int> tail_;
  std::uint64_t perm_count_ = 0;
  std::uint64_t file_count_ = 0;
  std::uint64_t size_ = 0;
};

/// Closed-form circular demand count, f^K * (K-1)!.
inline std::uint64_t circular_demand_count(const FdsStructure& s) {
  if (s.audience_size < 2 || s.audience_size > s.users - 1)
    throw std::domain_error("circular demand count needs 2 <= alpha <= K-1");
  const auto perms = static_cast<std::uint64_t>(factorial(s.users - 1));
  const std::uint64_t files = checked_pow(static_cast<std::uint64_t>(s.files_per_class), s.users);
  unsigned __int128 total = static_cast<unsigned __int128>(perms) * files;
  if (total > UINT64_MAX) throw std::overflow_error("circular demand count overflows 64 bits");
  return static_cast<std::uint64_t>(total);
}

/// Finds a group of alpha users that all request the same class -- their own
/// group -- with pairwise distinct file indices. Smallest such group in
/// canonical set order wins; absent when none exists (always absent when
/// f < alpha and alpha >= 2, since distinct indices run out).
inline std::optional<UserSet> alpha_demand_witness(const FdsStructure& s, const Demand& dm) {
  require_valid_demand(s, dm);
  for (const UserSet& group : all_classes(s)) {
    bool ok = true;
    std::vector<int> seen_files;
    for (int k : group.members()) {
      if (dm.class_of(k) != group) {
        ok = false;
        break;
      }
      const int idx = dm.file_of(k);
      if (std::find(seen_files.begin(), seen_files.end(), idx) != seen_files.end()) {
        ok = false;
        break;
      }
      seen_files.push_back(idx);
    }
    if (ok) return group;
  }
  return std::nullopt;
}

}  // namespace selfishcc
