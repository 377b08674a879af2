#include <doctest.h>

#include <set>

#include "selfishcc/combinatorics.hpp"

using namespace selfishcc;

TEST_CASE("binomials follow the zero-outside convention") {
  CHECK(binom(4, 2) == 6);
  CHECK(binom(20, 10) == 184756);
  CHECK(binom(5, 0) == 1);
  CHECK(binom(0, 0) == 1);
  CHECK(binom(3, 5) == 0);
  CHECK(binom(-1, 0) == 0);
  CHECK(binom(4, -1) == 0);
  CHECK(binom(-1, -1) == 0);
}

TEST_CASE("factorials and checked powers") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(20) == 2432902008176640000LL);
  CHECK_THROWS_AS(factorial(21), std::domain_error);
  CHECK(checked_pow(2, 10) == 1024);
  CHECK_THROWS_AS(checked_pow(UINT64_MAX, 2), std::overflow_error);
}

TEST_CASE("user sets behave like sets of 1-based users") {
  const UserSet s = UserSet::of({1, 2, 4});
  CHECK(s.size() == 3);
  CHECK(s.contains(1));
  CHECK(!s.contains(3));
  CHECK(s.with(3).size() == 4);
  CHECK(s.without(4) == UserSet::of({1, 2}));
  CHECK(s.members() == std::vector<int>{1, 2, 4});
  CHECK(UserSet::all(5) == UserSet::of({1, 2, 3, 4, 5}));
  CHECK(UserSet::of({1, 2}).subset_of(s));
  CHECK(s.minus(UserSet::of({2})) == UserSet::of({1, 4}));
  CHECK(s.digits() == "124");
  CHECK(UserSet::from_digits("124") == s);
  CHECK_THROWS_AS(static_cast<void>(s.contains(0)), std::domain_error);
  CHECK_THROWS_AS(static_cast<void>(s.with(21)), std::domain_error);
  CHECK(UserSet::of({1, 11}).to_string() == "{1,11}");
  CHECK_THROWS_AS(static_cast<void>(UserSet::of({1, 11}).digits()), std::domain_error);
}

TEST_CASE("subset enumeration is complete, duplicate-free and ordered") {
  const UserSet universe = UserSet::of({1, 3, 4, 6});
  const auto subs = subsets_of_size(universe, 2);
  CHECK(subs.size() == 6);
  std::set<std::uint32_t> seen;
  std::uint32_t prev = 0;
  for (const UserSet& s : subs) {
    CHECK(s.size() == 2);
    CHECK(s.subset_of(universe));
    CHECK(s.mask > prev);
    prev = s.mask;
    seen.insert(s.mask);
  }
  CHECK(seen.size() == subs.size());
  CHECK(subsets_of_size(universe, 0).size() == 1);
  CHECK(subsets_of_size(universe, 5).empty());
  CHECK(subsets_of_size(UserSet::all(20), 1).size() == 20);
}

TEST_CASE("colexicographic ranks are a bijection per cardinality") {
  const auto subs = subsets_of_size(UserSet::all(6), 3);
  std::set<std::int64_t> ranks;
  for (const UserSet& s : subs) {
    const auto r = colex_rank(s);
    CHECK(r >= 0);
    CHECK(r < binom(6, 3));
    ranks.insert(r);
  }
  CHECK(ranks.size() == subs.size());
  CHECK(colex_rank(UserSet::of({1, 2, 3})) == 0);
}

TEST_CASE("permutation unranking is lexicographic") {
  CHECK(unrank_permutation({1, 2, 3}, 0) == std::vector<int>{1, 2, 3});
  CHECK(unrank_permutation({1, 2, 3}, 1) == std::vector<int>{1, 3, 2});
  CHECK(unrank_permutation({1, 2, 3}, 5) == std::vector<int>{3, 2, 1});
  CHECK_THROWS_AS(unrank_permutation({1, 2, 3}, 6), std::out_of_range);
  std::set<std::vector<int>> all;
  for (std::uint64_t r = 0; r < 24; ++r) all.insert(unrank_permutation({2, 3, 4, 5}, r));
  CHECK(all.size() == 24);
}
