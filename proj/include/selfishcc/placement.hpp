#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfishcc/fds.hpp"

namespace selfishcc {

/// One piece of a file: the file plus the tag naming the users that cache
/// this piece. Under the selfish split the tag is always a subset of the
/// file's class; the unselfish baseline tags pieces with arbitrary user
/// subsets.
struct SubfileId {
  FileRef file;
  UserSet tag;

  friend bool operator==(const SubfileId&, const SubfileId&) = default;
  friend std::strong_ordering operator<=>(const SubfileId& a, const SubfileId& b) {
    if (auto c = a.file <=> b.file; c != 0) return c;
    return a.tag <=> b.tag;
  }

  [[nodiscard]] std::string to_string() const {
    return "W[" + std::to_string(file.index) + "," + file.file_class.to_string() + "," +
           (tag.empty() ? std::string() : tag.to_string()) + "]";
  }
};

enum class PlacementKind { SelfishMan, UnselfishMan };

/// An uncoded cache placement with redundancy t. Cache contents are defined
/// combinatorially (never materialized in full: N * binom(alpha, t) pieces
/// blow up fast); materialized per-user views exist for tests and reports.
class Placement {
public:
  static Placement selfish_man(const FdsStructure& s, int redundancy) {
    if (redundancy < 0 || redundancy > s.audience_size)
      throw std::domain_error("selfish placement needs t in [0, alpha]");
    return Placement(s, redundancy, PlacementKind::SelfishMan);
  }
  static Placement unselfish_man(const FdsStructure& s, int redundancy) {
    if (redundancy < 0 || redundancy > s.users)
      throw std::domain_error("unselfish placement needs t in [0, K]");
    return Placement(s, redundancy, PlacementKind::UnselfishMan);
  }

  [[nodiscard]] const FdsStructure& structure() const { return structure_; }
  [[nodiscard]] int redundancy() const { return redundancy_; }
  [[nodiscard]] PlacementKind kind() const { return kind_; }

  /// Equal pieces each file is split into.
  [[nodiscard]] std::int64_t subpacketization() const {
    return kind_ == PlacementKind::SelfishMan ? binom(structure_.audience_size, redundancy_)
                                              : binom(structure_.users, redundancy_);
  }

  /// Universe a tag may be drawn from for the given file.
  [[nodiscard]] UserSet tag_universe(const FileRef& file) const {
    return kind_ == PlacementKind::SelfishMan ? file.file_class : UserSet::all(structure_.users);
  }

  /// Tags of all pieces of one file; they partition the file.
  [[nodiscard]] std::vector<UserSet> file_tags(const FileRef& file) const {
    return subsets_of_size(tag_universe(file), redundancy_);
  }

  [[nodiscard]] bool is_piece(const SubfileId& sub) const {
    return sub.file.file_class.size() == structure_.audience_size &&
           sub.file.file_class.subset_of(UserSet::all(structure_.users)) && sub.file.index >= 1 &&
           sub.file.index <= structure_.files_per_class && sub.tag.size() == redundancy_ &&
           sub.tag.subset_of(tag_universe(sub.file));
  }
  void require_piece(const SubfileId& sub) const {
    if (!is_piece(sub))
      throw std::invalid_argument("subfile " + sub.to_string() +
                                  " is not a piece of this placement");
  }

  [[nodiscard]] bool caches(int user, const SubfileId& sub) const {
    require_piece(sub);
    if (!sub.tag.contains(user)) return false;
    return kind_ == PlacementKind::UnselfishMan || sub.file.file_class.contains(user);
  }

  /// Materialized cache view, canonical order.
  [[nodiscard]] std::vector<SubfileId> cached_subfiles(int user) const {
    std::vector<SubfileId> out;
    for (const UserSet& cls : all_classes(structure_)) {
      if (kind_ == PlacementKind::SelfishMan && !cls.contains(user)) continue;
      for (int i = 1; i <= structure_.files_per_class; ++i) {
        const FileRef file{cls, i};
        for_each_subset_of_size(tag_universe(file).without(user), redundancy_ - 1,
                                [&](UserSet rest) { out.push_back({file, rest.with(user)}); });
      }
    }
    return out;
  }

  [[nodiscard]] std::int64_t cached_subfile_count(int /*user*/) const {
    if (kind_ == PlacementKind::SelfishMan)
      return structure_.fds_size() * binom(structure_.audience_size - 1, redundancy_ - 1);
    return structure_.library_size() * binom(structure_.users - 1, redundancy_ - 1);
  }

  /// Cache size in file units; equals t*N/K for both placement kinds.
  [[nodiscard]] Rational memory() const {
    return {cached_subfile_count(1), subpacketization()};
  }

  /// The pieces of its requested file a user still needs: every tag not
  /// containing the user itself.
  [[nodiscard]] std::vector<SubfileId> desired_subfiles(const Demand& dm, int user) const {
    require_valid_demand(structure_, dm);
    const FileRef file = dm.request_of(user);
    std::vector<SubfileId> out;
    for_each_subset_of_size(tag_universe(file).without(user), redundancy_,
                            [&](UserSet tag) { out.push_back({file, tag}); });
    return out;
  }

  friend bool operator==(const Placement&, const Placement&) = default;

private:
  Placement(const FdsStructure& s, int redundancy, PlacementKind kind)
      : structure_(s), redundancy_(redundancy), kind_(kind) {}

  FdsStructure structure_;
  int redundancy_;
  PlacementKind kind_;
};

inline Placement selfish_man_placement(const FdsStructure& s, int t) {
  return Placement::selfish_man(s, t);
}
inline Placement unselfish_man_placement(const FdsStructure& s, int t) {
  return Placement::unselfish_man(s, t);
}

/// A placement is selfish when no user ever caches a piece of a file
/// outside its own demand set.
inline bool is_selfish(const Placement& p) {
  if (p.kind() == PlacementKind::SelfishMan) return true;  // tag containment forces it
  if (p.redundancy() == 0) return true;                    // empty caches, vacuously selfish
  for (int user = 1; user <= p.structure().users; ++user)
    for (const SubfileId& sub : p.cached_subfiles(user))
      if (!sub.file.file_class.contains(user)) return false;
  return true;
}

}  // namespace selfishcc
