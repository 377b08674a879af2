#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfishcc {

/// Hard limit on the user count. Keeps every user subset in one machine
/// word and keeps all binomials comfortably inside 64 bits.
inline constexpr int kMaxUsers = 20;

/// Binomial coefficient with binom(n, k) = 0 whenever n < 0, k < 0 or n < k.
/// Exact; throws on 64-bit overflow (cannot happen for n <= kMaxUsers).
inline std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __int128 result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > INT64_MAX) throw std::overflow_error("binomial overflow");
  }
  return static_cast<std::int64_t>(result);
}

/// n! for n in [0, 20]; 20! is the largest factorial fitting in int64.
inline std::int64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::domain_error("factorial out of supported range");
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// base^exp in uint64 with overflow detection.
inline std::uint64_t checked_pow(std::uint64_t base, int exp) {
  unsigned __int128 r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > UINT64_MAX) throw std::overflow_error("power overflow");
  }
  return static_cast<std::uint64_t>(r);
}

/// A set of users drawn from [1, K], stored as a bitmask with user k on
/// bit k-1. Canonical ordering of sets is the integer ordering of masks.
struct UserSet {
  std::uint32_t mask{0};

  constexpr UserSet() = default;
  constexpr explicit UserSet(std::uint32_t m) : mask(m) {}

  static UserSet of(std::initializer_list<int> users) {
    UserSet s;
    for (int u : users) s = s.with(u);
    return s;
  }
  /// The full set [1, K].
  static UserSet all(int user_count) {
    check_user(user_count);
    return UserSet((user_count == 32 ? 0u : (1u << user_count)) - 1u);
  }

  [[nodiscard]] bool contains(int user) const {
    check_user(user);
    return (mask >> (user - 1)) & 1u;
  }
  [[nodiscard]] UserSet with(int user) const {
    check_user(user);
    return UserSet(mask | (1u << (user - 1)));
  }
  [[nodiscard]] UserSet without(int user) const {
    check_user(user);
    return UserSet(mask & ~(1u << (user - 1)));
  }

  [[nodiscard]] int size() const { return std::popcount(mask); }
  [[nodiscard]] bool empty() const { return mask == 0; }
  [[nodiscard]] bool subset_of(UserSet other) const { return (mask & ~other.mask) == 0; }
  [[nodiscard]] bool intersects(UserSet other) const { return (mask & other.mask) != 0; }

  friend UserSet operator&(UserSet a, UserSet b) { return UserSet(a.mask & b.mask); }
  friend UserSet operator|(UserSet a, UserSet b) { return UserSet(a.mask | b.mask); }
  [[nodiscard]] UserSet minus(UserSet other) const { return UserSet(mask & ~other.mask); }

  friend bool operator==(UserSet, UserSet) = default;
  friend std::strong_ordering operator<=>(UserSet a, UserSet b) { return a.mask <=> b.mask; }

  /// Members in increasing order.
  [[nodiscard]] std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint32_t m = mask; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
    return out;
  }
  [[nodiscard]] int lowest() const {
    if (mask == 0) throw std::logic_error("lowest() on empty user set");
    return std::countr_zero(mask) + 1;
  }

  /// Compact digit rendering, "1234"; only defined while all users are <= 9.
  [[nodiscard]] std::string digits() const {
    std::string s;
    for (int u : members()) {
      if (u > 9) throw std::domain_error("digit rendering needs users <= 9");
      s += char('0' + u);
    }
    return s;
  }
  /// Pretty rendering valid for any user count: "1234" or "{3,11,17}".
  [[nodiscard]] std::string to_string() const {
    if (mask == 0) return "{}";
    const auto m = members();
    if (m.back() <= 9) return digits();
    std::string s = "{";
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(m[i]);
    }
    return s + "}";
  }
  static UserSet from_digits(const std::string& text) {
    UserSet s;
    for (char c : text) {
      if (c < '1' || c > '9') throw std::invalid_argument("bad digit in user set literal");
      s = s.with(c - '0');
    }
    return s;
  }

private:
  static void check_user(int user) {
    if (user < 1 || user > kMaxUsers)
      throw std::domain_error("user index outside [1, " + std::to_string(kMaxUsers) + "]");
  }
};

/// Colexicographic rank of a set among all sets of the same cardinality;
/// gives every file class a stable integer id.
inline std::int64_t colex_rank(UserSet s) {
  std::int64_t rank = 0;
  int i = 1;
  for (int u : s.members()) rank += binom(u - 1, i++);
  return rank;
}

/// All size-r subsets of the given universe, in increasing mask order.
inline std::vector<UserSet> subsets_of_size(UserSet universe, int r) {
  std::vector<UserSet> out;
  const auto members = universe.members();
  const int m = static_cast<int>(members.size());
  if (r < 0 || r > m) return out;
  out.reserve(static_cast<std::size_t>(binom(m, r)));
  if (r == 0) {
    out.emplace_back();
    return out;
  }
  // Gosper's hack over the compressed m-bit universe; expansion through the
  // sorted member list preserves the increasing mask order.
  std::uint32_t v = (1u << r) - 1u;
  const std::uint32_t limit = (m == 32 ? 0u : (1u << m));
  while (limit == 0 || v < limit) {
    UserSet s;
    for (std::uint32_t bits = v; bits != 0; bits &= bits - 1)
      s = s.with(members[static_cast<std::size_t>(std::countr_zero(bits))]);
    out.push_back(s);
    const std::uint32_t c = v & (0u - v);
    const std::uint32_t rset = v + c;
    if (rset == 0) break;
    v = rset | (((v ^ rset) >> 2) / c);
  }
  return out;
}

template <typename Fn>
void for_each_subset_of_size(UserSet universe, int r, Fn&& fn) {
  for (const UserSet& s : subsets_of_size(universe, r)) fn(s);
}

/// The rank-th permutation of `elements` in lexicographic order.
inline std::vector<int> unrank_permutation(std::vector<int> elements, std::uint64_t rank) {
  const int n = static_cast<int>(elements.size());
  std::vector<int> out;
  out.reserve(n);
  std::uint64_t radix = static_cast<std::uint64_t>(factorial(n));
  if (rank >= radix) throw std::out_of_range("permutation rank out of range");
  for (int i = n; i >= 1; --i) {
    radix /= static_cast<std::uint64_t>(i);
    const auto pos = static_cast<std::size_t>(rank / radix);
    rank %= radix;
    out.push_back(elements[pos]);
    elements.erase(elements.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return out;
}

}  // namespace selfishcc
