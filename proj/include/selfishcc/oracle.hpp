#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "selfishcc/bounds.hpp"
#include "selfishcc/demands.hpp"
#include "selfishcc/parallel.hpp"
#include "selfishcc/placement.hpp"

namespace selfishcc {

/// A desired subfile seen as an index-coding message: who wants it plus its
/// identity. Two users asking for the same file yield two distinct vertices.
struct SideInfoVertex {
  int owner = 0;
  SubfileId subfile;

  friend bool operator==(const SideInfoVertex&, const SideInfoVertex&) = default;
};

/// Edge rule of the side-information graph: v1 -> v2 when v1 is cached at
/// v2's owner, which under tag-style placement is owner(v2) in tag(v1).
inline bool side_info_edge(const SideInfoVertex& from, const SideInfoVertex& to) {
  return from.subfile.tag.contains(to.owner);
}

/// The index-coding side-information graph induced by a placement and a
/// demand: one vertex per (user, desired subfile) pair.
struct SideInfoGraph {
  std::vector<SideInfoVertex> vertices;

  [[nodiscard]] bool has_edge(std::size_t from, std::size_t to) const {
    return from != to && side_info_edge(vertices[from], vertices[to]);
  }
};

inline SideInfoGraph side_information_graph(const Placement& p, const Demand& dm) {
  require_valid_demand(p.structure(), dm);
  SideInfoGraph g;
  for (int k = 1; k <= p.structure().users; ++k)
    for (const SubfileId& sub : p.desired_subfiles(dm, k)) g.vertices.push_back({k, sub});
  return g;
}

/// Kahn-style acyclicity check on a vertex list under the side-information
/// edge rule. Vertices are eliminated in list order among the ready ones,
/// so failure reports are reproducible.
inline bool vertices_acyclic(const std::vector<SideInfoVertex>& vertices) {
  const std::size_t n = vertices.size();
  std::vector<int> in_degree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && side_info_edge(vertices[i], vertices[j])) ++in_degree[j];
  std::vector<std::size_t> ready;
  for (std::size_t j = 0; j < n; ++j)
    if (in_degree[j] == 0) ready.push_back(j);
  std::size_t removed = 0;
  while (!ready.empty()) {
    const std::size_t i = ready.back();
    ready.pop_back();
    ++removed;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && side_info_edge(vertices[i], vertices[j]) && --in_degree[j] == 0)
        ready.push_back(j);
  }
  return removed == n;
}

/// The standard acyclic vertex family for a user ordering u: user u_k
/// contributes its desired subfiles whose tags avoid everyone ordered up to
/// and including u_k. Tags of every cardinality are included; slices of a
/// fixed cardinality carry the actual sizes under an equal-split placement.
inline std::vector<SideInfoVertex> acyclic_vertex_set(const FdsStructure& s, const Demand& dm,
                                                      const UserPermutation& u) {
  require_valid_demand(s, dm);
  if (!u.is_permutation_of(s.users)) throw std::invalid_argument("not a user permutation");
  std::vector<SideInfoVertex> out;
  UserSet placed;
  for (int pos = 1; pos <= s.users; ++pos) {
    const int user = u.user_at(pos);
    placed = placed.with(user);
    const UserSet avail = dm.class_of(user).minus(placed);
    const FileRef file = dm.request_of(user);
    for (int r = 0; r <= avail.size(); ++r)
      for_each_subset_of_size(avail, r, [&](UserSet tag) { out.push_back({user, {file, tag}}); });
  }
  return out;
}

/// Index-coding lower bound from one (demand, ordering) pair under the
/// equal split with redundancy t: total size of the acyclic set, in file
/// units, counting only the tags of cardinality t (the others have size 0).
inline Rational single_demand_bound(const FdsStructure& s, int t, const Demand& dm,
                                    const UserPermutation& u) {
  if (t < 0 || t > s.audience_size) throw std::domain_error("redundancy must be in [0, alpha]");
  require_valid_demand(s, dm);
  if (!u.is_permutation_of(s.users)) throw std::invalid_argument("not a user permutation");
  std::int64_t vertices = 0;
  UserSet placed;
  for (int pos = 1; pos <= s.users; ++pos) {
    const int user = u.user_at(pos);
    placed = placed.with(user);
    vertices += binom(dm.class_of(user).minus(placed).size(), t);
  }
  return {vertices, binom(s.audience_size, t)};
}

struct SweepOptions {
  std::uint64_t cap = 10'000'000;  // (demand, rotation) pairs
  int threads = 0;                 // 0: default_worker_count()
  bool check_acyclicity = true;
};

/// Exhaustive aggregation over every circular demand and every rotation of
/// its witness: per-cardinality vertex totals, the number of bounds taken,
/// and how many vertex sets failed the acyclicity check (always 0 unless
/// something is deeply wrong).
struct SweepTotals {
  std::vector<std::uint64_t> slice_vertices;  // index: tag cardinality 0..alpha
  std::uint64_t pair_count = 0;
  std::uint64_t acyclic_failures = 0;

  /// Averaged bound for the equal split at redundancy t.
  [[nodiscard]] Rational average_bound(const FdsStructure& s, int t) const {
    if (t < 0 || t >= static_cast<int>(slice_vertices.size()))
      throw std::domain_error("redundancy outside the swept range");
    if (pair_count == 0) throw std::logic_error("empty sweep");
    return Rational(static_cast<std::int64_t>(slice_vertices[static_cast<std::size_t>(t)])) /
           (Rational(static_cast<std::int64_t>(pair_count)) * binom(s.audience_size, t));
  }
};

inline SweepTotals circular_demand_sweep(const FdsStructure& s, const SweepOptions& opts = {}) {
  const CircularDemandSpace space(s);
  const std::uint64_t pairs = space.size() * static_cast<std::uint64_t>(s.users);
  if (pairs > opts.cap)
    throw CapExceededError("circular sweep needs " + std::to_string(pairs) +
                               " bound evaluations, cap is " + std::to_string(opts.cap),
                           pairs, opts.cap);

  const auto alpha = static_cast<std::size_t>(s.audience_size);
  SweepTotals init;
  init.slice_vertices.assign(alpha + 1, 0);

  auto work = [&](std::uint64_t lo, std::uint64_t hi) {
    SweepTotals part;
    part.slice_vertices.assign(alpha + 1, 0);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const CircularDemand cd = space.at(i);
      for (int r = 0; r < s.users; ++r) {
        const UserPermutation u = cd.witness.rotated(r);
        UserSet placed;
        for (int pos = 1; pos <= s.users; ++pos) {
          const int user = u.user_at(pos);
          placed = placed.with(user);
          const int avail = cd.demand.class_of(user).minus(placed).size();
          for (std::size_t t = 0; t <= alpha; ++t)
            part.slice_vertices[t] +=
                static_cast<std::uint64_t>(binom(avail, static_cast<int>(t)));
        }
        ++part.pair_count;
        if (opts.check_acyclicity &&
            !vertices_acyclic(acyclic_vertex_set(s, cd.demand, u)))
          ++part.acyclic_failures;
      }
    }
    return part;
  };
  auto combine = [&](SweepTotals& total, const SweepTotals& part) {
    for (std::size_t t = 0; t <= alpha; ++t) total.slice_vertices[t] += part.slice_vertices[t];
    total.pair_count += part.pair_count;
    total.acyclic_failures += part.acyclic_failures;
  };
  return parallel_ranges(space.size(), opts.threads, std::move(init), work, combine);
}

/// Average of the single-demand bounds over all circular demands and all
/// K rotations each, for the equal split at redundancy t. Reproduces the
/// converse corner value exactly.
inline Rational averaged_circular_bound(const FdsStructure& s, int t,
                                        const SweepOptions& opts = {}) {
  if (t < 0 || t > s.audience_size) throw std::domain_error("redundancy must be in [0, alpha]");
  SweepOptions o = opts;
  o.check_acyclicity = false;  // the averaging itself does not need the sort
  return circular_demand_sweep(s, o).average_bound(s, t);
}

/// How often one fixed subfile lands in the acyclic sets across the whole
/// circular sweep, counted by direct enumeration.
inline std::uint64_t subfile_appearance_count(const FdsStructure& s, int t, const SubfileId& sub,
                                              const SweepOptions& opts = {}) {
  if (sub.tag.size() != t || !sub.tag.subset_of(sub.file.file_class))
    throw std::invalid_argument("witness subfile inconsistent with redundancy t");
  const CircularDemandSpace space(s);
  const std::uint64_t pairs = space.size() * static_cast<std::uint64_t>(s.users);
  if (pairs > opts.cap)
    throw CapExceededError("appearance count needs " + std::to_string(pairs) +
                               " bound evaluations, cap is " + std::to_string(opts.cap),
                           pairs, opts.cap);

  auto work = [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t count = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const CircularDemand cd = space.at(i);
      // at most one user requests this subfile's class in a circular demand
      int requester = 0;
      for (int k : sub.file.file_class.members())
        if (cd.demand.class_of(k) == sub.file.file_class && cd.demand.file_of(k) == sub.file.index)
          requester = k;
      if (requester == 0) continue;
      for (int r = 0; r < s.users; ++r) {
        const UserPermutation u = cd.witness.rotated(r);
        UserSet placed;
        for (int pos = 1; pos <= u.position_of(requester); ++pos)
          placed = placed.with(u.user_at(pos));
        if (!sub.tag.intersects(placed)) ++count;
      }
    }
    return count;
  };
  return parallel_ranges(space.size(), opts.threads, std::uint64_t{0}, work,
                         [](std::uint64_t& a, std::uint64_t b) { a += b; });
}

/// Closed-form appearance count: (alpha-t) * sum_l a_l (K-l), where a_l
/// counts the witness orderings putting the whole tag within l steps after
/// the requester. The t = 0 term degenerates to the single l = 0 case.
inline std::uint64_t subfile_appearance_formula(const FdsStructure& s, int t) {
  const int K = s.users;
  const int alpha = s.audience_size;
  if (t < 0 || t > alpha) throw std::domain_error("redundancy must be in [0, alpha]");
  if (alpha < 2 || alpha > K - 1)
    throw std::domain_error("appearance formula needs 2 <= alpha <= K-1");
  if (t == alpha) return 0;  // a full-class tag always contains the requester
  const std::uint64_t f_free =
      checked_pow(static_cast<std::uint64_t>(s.files_per_class), K - 1);
  const std::uint64_t base = static_cast<std::uint64_t>(factorial(t)) *
                             static_cast<std::uint64_t>(factorial(alpha - 1 - t)) *
                             static_cast<std::uint64_t>(factorial(K - alpha));
  unsigned __int128 sum = 0;
  if (t == 0) {
    sum = static_cast<unsigned __int128>(K);
  } else {
    for (int l = t; l <= alpha - 1; ++l)
      sum += static_cast<unsigned __int128>(binom(l - 1, t - 1)) *
             static_cast<unsigned __int128>(K - l);
  }
  unsigned __int128 total = static_cast<unsigned __int128>(alpha - t) * base * f_free * sum;
  if (total > UINT64_MAX) throw std::overflow_error("appearance count overflows 64 bits");
  return static_cast<std::uint64_t>(total);
}

/// Builds a distinct-file group demand whose outside part is provably
/// cycle-free: everyone in `group` requests its own class with file indices
/// 1..alpha, everyone outside requests anchor + {itself}, where anchor is
/// an (alpha-1)-subset of the group (default: the group minus its largest
/// member).
inline Demand make_alpha_converse_demand(const FdsStructure& s, UserSet group,
                                         std::optional<UserSet> anchor = std::nullopt) {
  if (group.size() != s.audience_size || !group.subset_of(UserSet::all(s.users)))
    throw std::invalid_argument("group must be a size-alpha user set");
  if (s.files_per_class < s.audience_size)
    throw std::invalid_argument("distinct in-group files need f >= alpha");
  UserSet a = anchor.value_or(group.without(group.members().back()));
  if (a.size() != s.audience_size - 1 || !a.subset_of(group))
    throw std::invalid_argument("anchor must be an (alpha-1)-subset of the group");
  Demand dm;
  dm.classes.resize(static_cast<std::size_t>(s.users));
  dm.files.assign(static_cast<std::size_t>(s.users), 1);
  int next_index = 1;
  for (int k = 1; k <= s.users; ++k) {
    if (group.contains(k)) {
      dm.classes[static_cast<std::size_t>(k - 1)] = group;
      dm.files[static_cast<std::size_t>(k - 1)] = next_index++;
    } else {
      dm.classes[static_cast<std::size_t>(k - 1)] = a.with(k);
    }
  }
  return dm;
}

/// Index-coding converse for a distinct-file group demand under the fixed
/// equal-split placement. Assembles the two-part acyclic witness set --
/// uncoded outside vertices plus the classical in-group cascade -- checks
/// it really is acyclic, and returns its total size in file units.
inline Rational alpha_demand_converse(const Placement& p, const Demand& dm) {
  if (p.kind() != PlacementKind::SelfishMan)
    throw std::invalid_argument("converse is defined over the selfish placement");
  const FdsStructure& s = p.structure();
  const auto group = alpha_demand_witness(s, dm);
  if (!group) throw std::invalid_argument("demand has no distinct-file group");
  const int t = p.redundancy();

  std::vector<SideInfoVertex> outside;
  for (int k = 1; k <= s.users; ++k) {
    if (group->contains(k)) continue;
    const FileRef file = dm.request_of(k);
    for_each_subset_of_size(dm.class_of(k).without(k), t,
                            [&](UserSet tag) { outside.push_back({k, {file, tag}}); });
  }

  std::vector<SideInfoVertex> cascade;
  UserSet placed;
  for (int k : group->members()) {
    placed = placed.with(k);
    const FileRef file = dm.request_of(k);
    for_each_subset_of_size(group->minus(placed), t,
                            [&](UserSet tag) { cascade.push_back({k, {file, tag}}); });
  }
  if (static_cast<std::int64_t>(cascade.size()) != binom(s.audience_size, t + 1))
    throw std::logic_error("in-group cascade has the wrong size");

  std::vector<SideInfoVertex> joint = outside;
  joint.insert(joint.end(), cascade.begin(), cascade.end());
  if (!vertices_acyclic(joint))
    throw std::logic_error("converse witness set has a cycle; outside classes unsuitable");

  return {static_cast<std::int64_t>(joint.size()), binom(s.audience_size, t)};
}

/// Aggregated placement profile: the total normalized mass cached at each
/// tag cardinality. The converse's optimization runs over these aggregates.
struct PlacementProfile {
  std::vector<Rational> mass;  // index: tag cardinality 0..alpha

  [[nodiscard]] bool well_formed() const {
    Rational total(0);
    for (const Rational& x : mass) {
      if (x < Rational(0)) return false;
      total += x;
    }
    return total == Rational(1);
  }
  [[nodiscard]] Rational mean_redundancy() const {
    Rational m(0);
    for (std::size_t t = 0; t < mass.size(); ++t)
      m += Rational(static_cast<std::int64_t>(t)) * mass[t];
    return m;
  }
  [[nodiscard]] Rational objective(const FdsStructure& s) const {
    Rational obj(0);
    for (std::size_t t = 0; t < mass.size(); ++t)
      obj += converse_load(s.users, s.audience_size, static_cast<int>(t)) * mass[t];
    return obj;
  }
};

/// Brute-force solve of the profile optimization by enumerating every basic
/// feasible point: all single-redundancy profiles plus all two-point
/// profiles that meet the memory constraint with equality. Independent
/// check of the interpolation shortcut.
inline Rational placement_profile_lower_bound_vertex(const FdsStructure& s,
                                                     const Rational& memory) {
  if (memory < Rational(0) || memory > Rational(s.fds_size()))
    throw std::domain_error("memory outside [0, |F|]");
  const Rational budget = memory * s.users / s.library_size();  // K*M/N
  const int alpha = s.audience_size;
  std::optional<Rational> best;
  const auto consider = [&](const Rational& value) {
    if (!best || value < *best) best = value;
  };
  for (int i = 0; i <= alpha; ++i)
    if (Rational(i) <= budget) consider(converse_load(s.users, alpha, i));
  for (int i = 0; i <= alpha; ++i)
    for (int j = i + 1; j <= alpha; ++j) {
      if (Rational(i) > budget || budget > Rational(j)) continue;
      const Rational span(j - i);
      const Rational xi = (Rational(j) - budget) / span;
      const Rational xj = (budget - Rational(i)) / span;
      consider(xi * converse_load(s.users, alpha, i) + xj * converse_load(s.users, alpha, j));
    }
  if (!best) throw std::logic_error("profile polytope unexpectedly empty");
  return *best;
}

}  // namespace selfishcc
