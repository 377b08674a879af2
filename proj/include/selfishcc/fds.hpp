#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfishcc/combinatorics.hpp"
#include "selfishcc/rational.hpp"

namespace selfishcc {

/// Raised when an enumeration would exceed its configured cap. Carries the
/// count the enumeration would need so callers can report it.
class CapExceededError : public std::runtime_error {
public:
  CapExceededError(std::string what, std::uint64_t required, std::uint64_t cap)
      : std::runtime_error(std::move(what)), required_(required), cap_(cap) {}
  [[nodiscard]] std::uint64_t required() const { return required_; }
  [[nodiscard]] std::uint64_t cap() const { return cap_; }

private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

/// The symmetric file-demand-set structure: K users, file classes indexed
/// by the size-alpha subsets of users that are interested in them, and f
/// files per class. User k's demand set holds every class whose audience
/// contains k.
struct FdsStructure {
  int users = 0;            // K
  int audience_size = 0;    // alpha: users interested in each class
  int files_per_class = 1;  // f

  FdsStructure(int k, int alpha, int f) : users(k), audience_size(alpha), files_per_class(f) {
    if (k < 1 || k > kMaxUsers)
      throw std::domain_error("user count must be in [1, " + std::to_string(kMaxUsers) + "]");
    if (alpha < 1 || alpha > k) throw std::domain_error("audience size must be in [1, K]");
    if (f < 1) throw std::domain_error("files per class must be positive");
  }

  [[nodiscard]] std::int64_t class_count() const { return binom(users, audience_size); }
  [[nodiscard]] std::int64_t library_size() const { return files_per_class * class_count(); }
  /// Files in any one user's demand set.
  [[nodiscard]] std::int64_t fds_size() const {
    return files_per_class * binom(users - 1, audience_size - 1);
  }
  /// Fraction of users interested in any one file.
  [[nodiscard]] Rational delta() const { return {audience_size, users}; }
  /// Per-library cache fraction at redundancy t.
  [[nodiscard]] Rational gamma_at(int t) const { return {t, users}; }
  /// Per-demand-set cache fraction at redundancy t.
  [[nodiscard]] Rational gamma_fds_at(int t) const { return {t, audience_size}; }
  /// Memory (in file units) of the corner point with redundancy t.
  [[nodiscard]] Rational memory_at(int t) const { return Rational(t) * library_size() / users; }

  friend bool operator==(const FdsStructure&, const FdsStructure&) = default;
};

struct DerivedCounts {
  std::int64_t class_count;
  std::int64_t library_size;
  std::int64_t fds_size;
  Rational delta;
  Rational interest_fraction;
};

inline DerivedCounts derived_counts(const FdsStructure& s) {
  return {s.class_count(), s.library_size(), s.fds_size(), s.delta(),
          Rational(s.fds_size(), s.library_size())};
}

/// All classes of the structure, in canonical (increasing mask) order.
inline std::vector<UserSet> all_classes(const FdsStructure& s) {
  return subsets_of_size(UserSet::all(s.users), s.audience_size);
}

/// The classes user k may request: all size-alpha subsets containing k.
inline std::vector<UserSet> fds_of_user(const FdsStructure& s, int user) {
  if (user < 1 || user > s.users) throw std::domain_error("user out of range");
  std::vector<UserSet> out;
  out.reserve(static_cast<std::size_t>(binom(s.users - 1, s.audience_size - 1)));
  for_each_subset_of_size(UserSet::all(s.users).without(user), s.audience_size - 1,
                          [&](UserSet rest) { out.push_back(rest.with(user)); });
  return out;
}

/// One file: its class plus the index within the class, 1-based.
struct FileRef {
  UserSet file_class;
  int index = 1;

  friend bool operator==(const FileRef&, const FileRef&) = default;
  friend std::strong_ordering operator<=>(const FileRef& a, const FileRef& b) {
    if (auto c = a.file_class <=> b.file_class; c != 0) return c;
    return a.index <=> b.index;
  }
};

/// A demand: the class and the in-class file index requested by each user.
/// Entries are stored 0-based but addressed through 1-based accessors.
struct Demand {
  std::vector<UserSet> classes;
  std::vector<int> files;

  Demand() = default;
  Demand(std::vector<UserSet> d, std::vector<int> f) : classes(std::move(d)), files(std::move(f)) {}

  [[nodiscard]] UserSet class_of(int user) const { return classes.at(user - 1); }
  [[nodiscard]] int file_of(int user) const { return files.at(user - 1); }
  [[nodiscard]] FileRef request_of(int user) const { return {class_of(user), file_of(user)}; }

  friend bool operator==(const Demand&, const Demand&) = default;
};

/// Structural checks that make a demand well-formed at all (vector lengths,
/// class cardinalities, users in range). Distinct from validity.
inline void check_demand_shape(const FdsStructure& s, const Demand& dm) {
  const auto k = static_cast<std::size_t>(s.users);
  if (dm.classes.size() != k || dm.files.size() != k)
    throw std::invalid_argument("demand length does not match user count");
  for (const UserSet& c : dm.classes) {
    if (!c.subset_of(UserSet::all(s.users)))
      throw std::invalid_argument("demanded class uses out-of-range users");
    if (c.size() != s.audience_size)
      throw std::invalid_argument("demanded class has wrong cardinality");
  }
}

/// A demand is valid when every user requests a class it belongs to and an
/// existing file index.
inline bool is_valid_demand(const FdsStructure& s, const Demand& dm) {
  check_demand_shape(s, dm);
  for (int k = 1; k <= s.users; ++k) {
    if (!dm.class_of(k).contains(k)) return false;
    if (dm.file_of(k) < 1 || dm.file_of(k) > s.files_per_class) return false;
  }
  return true;
}

inline void require_valid_demand(const FdsStructure& s, const Demand& dm) {
  if (!is_valid_demand(s, dm)) throw std::invalid_argument("demand is not valid");
}

/// Random access over all valid demands in lexicographic order (user 1 the
/// most significant digit; per user, classes ascend before file indices).
/// Construction refuses instances whose demand count exceeds the cap.
class ValidDemandSpace {
public:
  explicit ValidDemandSpace(const FdsStructure& s, std::uint64_t cap = 10'000'000)
      : structure_(s) {
    for (int k = 1; k <= s.users; ++k) per_user_classes_.push_back(fds_of_user(s, k));
    const auto options =
        static_cast<std::uint64_t>(s.files_per_class) * per_user_classes_[0].size();
    unsigned __int128 count = 1;
    for (int k = 0; k < s.users; ++k) count *= options;
    if (count > cap) {
      const auto required = count > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(count);
      throw CapExceededError("valid-demand enumeration needs " + std::to_string(required) +
                                 " demands, cap is " + std::to_string(cap),
                             required, cap);
    }
    size_ = static_cast<std::uint64_t>(count);
  }

  [[nodiscard]] std::uint64_t size() const { return size_; }

  [[nodiscard]] Demand at(std::uint64_t index) const {
    if (index >= size_) throw std::out_of_range("demand index out of range");
    const auto f = static_cast<std::uint64_t>(structure_.files_per_class);
    const std::uint64_t base = f * per_user_classes_[0].size();
    Demand dm;
    dm.classes.resize(static_cast<std::size_t>(structure_.users));
    dm.files.resize(static_cast<std::size_t>(structure_.users));
    for (int k = structure_.users; k >= 1; --k) {
      const std::uint64_t digit = index % base;
      index /= base;
      dm.classes[static_cast<std::size_t>(k - 1)] =
          per_user_classes_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(digit / f)];
      dm.files[static_cast<std::size_t>(k - 1)] = static_cast<int>(digit % f) + 1;
    }
    return dm;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t i = 0; i < size_; ++i) fn(at(i));
  }

private:
  FdsStructure structure_;
  std::vector<std::vector<UserSet>> per_user_classes_;
  std::uint64_t size_ = 0;
};

}  // namespace selfishcc
