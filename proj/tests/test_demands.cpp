#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <utility>

#include "selfishcc/demands.hpp"

using namespace selfishcc;

namespace {

Demand demand_541_circular() {
  return Demand({UserSet::of({1, 2, 3, 4}), UserSet::of({2, 3, 4, 5}), UserSet::of({1, 3, 4, 5}),
                 UserSet::of({1, 2, 4, 5}), UserSet::of({1, 2, 3, 5})},
                {1, 1, 1, 1, 1});
}

Demand demand_541_noncircular() {
  return Demand({UserSet::of({1, 2, 3, 4}), UserSet::of({2, 3, 4, 5}), UserSet::of({1, 2, 3, 5}),
                 UserSet::of({1, 2, 4, 5}), UserSet::of({1, 3, 4, 5})},
                {1, 1, 1, 1, 1});
}

/// Exhaustive witness oracle: tries every one of the K! orderings.
bool circular_by_full_search(const FdsStructure& s, const Demand& dm) {
  std::vector<int> perm(static_cast<std::size_t>(s.users));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    if (satisfies_circular_pattern(s, dm, UserPermutation(perm))) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

TEST_CASE("request graphs of the two worked (5,4,1) demands") {
  const FdsStructure s(5, 4, 1);
  const FdsRequestGraph g1 = fds_request_graph(s, demand_541_circular());
  CHECK(g1.bidirectional_edge_count() == 5);
  const FdsRequestGraph g2 = fds_request_graph(s, demand_541_noncircular());
  CHECK(g2.bidirectional_edge_count() == 6);
  CHECK(!graphs_isomorphic(g1, g2));
  CHECK(graphs_isomorphic(g1, g1));
  CHECK(!g1.is_complete());
}

TEST_CASE("full-audience structures always give the complete graph") {
  const FdsStructure s(4, 4, 4);
  const ValidDemandSpace space(s);
  space.for_each([&](const Demand& dm) { CHECK(fds_request_graph(s, dm).is_complete()); });
}

TEST_CASE("circular witness on the worked demands") {
  const FdsStructure s(5, 4, 1);
  const auto w = circular_witness(s, demand_541_circular());
  REQUIRE(w.has_value());
  CHECK(w->order == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(satisfies_circular_pattern(s, demand_541_circular(), *w));

  CHECK(!circular_witness(s, demand_541_noncircular()).has_value());
  CHECK(!circular_by_full_search(s, demand_541_noncircular()));  // independent 5! sweep

  // the worked (6,4,1) demand
  const FdsStructure s641(6, 4, 1);
  const Demand d641({UserSet::of({1, 2, 3, 4}), UserSet::of({2, 3, 4, 5}), UserSet::of({3, 4, 5, 6}),
                     UserSet::of({1, 4, 5, 6}), UserSet::of({1, 2, 5, 6}), UserSet::of({1, 2, 3, 6})},
                    {1, 1, 1, 1, 1, 1});
  const auto w641 = circular_witness(s641, d641);
  REQUIRE(w641.has_value());
  CHECK(w641->order == std::vector<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("witness search agrees with the exhaustive oracle on small structures") {
  for (const auto& [users, alpha, f] : {std::tuple{4, 2, 1}, {4, 3, 1}, {5, 4, 1}, {3, 2, 2}}) {
    const FdsStructure s(users, alpha, f);
    const ValidDemandSpace space(s);
    std::uint64_t circular = 0;
    space.for_each([&](const Demand& dm) {
      const auto w = circular_witness(s, dm);
      CHECK(w.has_value() == circular_by_full_search(s, dm));
      if (w) {
        CHECK(w->order[0] == 1);
        CHECK(satisfies_circular_pattern(s, dm, *w));
        ++circular;
      }
    });
    CHECK(circular == circular_demand_count(s));
  }
}

TEST_CASE("degenerate audience sizes make every valid demand circular") {
  const FdsStructure skk(4, 4, 4);
  const Demand dm({UserSet::all(4), UserSet::all(4), UserSet::all(4), UserSet::all(4)},
                  {1, 3, 2, 4});
  const auto w = circular_witness(skk, dm);
  REQUIRE(w.has_value());
  CHECK(satisfies_circular_pattern(skk, dm, *w));

  const FdsStructure s1(3, 1, 2);
  const Demand dm1({UserSet::of({1}), UserSet::of({2}), UserSet::of({3})}, {2, 1, 2});
  CHECK(circular_witness(s1, dm1).has_value());
}

TEST_CASE("circular demand space: counts, validity and distinctness") {
  // (6,4,1) -> 120, (5,4,1) -> 24, (3,2,2) -> 16
  CHECK(circular_demand_count(FdsStructure(6, 4, 1)) == 120);
  CHECK(circular_demand_count(FdsStructure(5, 4, 1)) == 24);
  CHECK(circular_demand_count(FdsStructure(3, 2, 2)) == 16);
  CHECK_THROWS_AS(circular_demand_count(FdsStructure(4, 4, 1)), std::domain_error);
  CHECK_THROWS_AS(CircularDemandSpace(FdsStructure(4, 1, 1)), std::domain_error);

  for (const auto& [users, alpha, f] : {std::tuple{5, 4, 1}, {6, 4, 1}, {3, 2, 2}, {5, 3, 2}}) {
    const FdsStructure s(users, alpha, f);
    const CircularDemandSpace space(s);
    CHECK(space.size() == circular_demand_count(s));
    std::set<std::pair<std::vector<std::uint32_t>, std::vector<int>>> seen;
    space.for_each([&](const CircularDemand& cd) {
      CHECK(is_valid_demand(s, cd.demand));
      CHECK(cd.witness.order[0] == 1);
      // the pattern must hold for the witness and all of its rotations
      for (const UserPermutation& u : circular_shifts(cd.witness))
        CHECK(satisfies_circular_pattern(s, cd.demand, u));
      std::vector<std::uint32_t> masks;
      for (const UserSet& c : cd.demand.classes) masks.push_back(c.mask);
      seen.insert({masks, cd.demand.files});
    });
    CHECK(seen.size() == space.size());
  }
}

TEST_CASE("worked (6,4,1) example: 12 circular demands fix user 1's class") {
  const FdsStructure s(6, 4, 1);
  const CircularDemandSpace space(s);
  std::uint64_t with_first_window = 0;
  space.for_each([&](const CircularDemand& cd) {
    if (cd.demand.class_of(1) == UserSet::of({1, 2, 3, 4})) ++with_first_window;
  });
  CHECK(with_first_window == 12);  // (alpha-1)! (K-alpha)!
}

TEST_CASE("worked shift count: both tag members after the requester in 3 of 6 rotations") {
  const UserPermutation u({1, 4, 3, 2, 5, 6});
  int together = 0;
  for (const UserPermutation& r : circular_shifts(u))
    if (r.position_of(1) < r.position_of(2) && r.position_of(1) < r.position_of(4)) ++together;
  CHECK(together == 3);  // the farthest tag member decides: l = 3, K - l = 3
}

TEST_CASE("distinct-file group witness") {
  const FdsStructure s(5, 3, 3);
  const Demand dm({UserSet::of({1, 2, 3}), UserSet::of({1, 2, 3}), UserSet::of({1, 2, 3}),
                   UserSet::of({1, 2, 4}), UserSet::of({1, 2, 5})},
                  {1, 2, 3, 1, 1});
  const auto w = alpha_demand_witness(s, dm);
  REQUIRE(w.has_value());
  CHECK(*w == UserSet::of({1, 2, 3}));

  // same classes but a repeated file index inside the group: no witness
  Demand repeated = dm;
  repeated.files = {1, 1, 3, 1, 1};
  CHECK(!alpha_demand_witness(s, repeated).has_value());

  // f = 1 with alpha >= 2 can never host distinct in-group files
  const FdsStructure s541(5, 4, 1);
  const ValidDemandSpace space(s541);
  for (std::uint64_t i = 0; i < space.size(); i += 7)
    CHECK(!alpha_demand_witness(s541, space.at(i)).has_value());
}

TEST_CASE("circular shifts enumerate rotations in order") {
  const auto shifts = circular_shifts(UserPermutation({1, 2, 3}));
  REQUIRE(shifts.size() == 3);
  CHECK(shifts[0].order == std::vector<int>{1, 2, 3});
  CHECK(shifts[1].order == std::vector<int>{2, 3, 1});
  CHECK(shifts[2].order == std::vector<int>{3, 1, 2});

  const auto six = circular_shifts(UserPermutation({1, 2, 3, 4, 5, 6}));
  CHECK(std::count_if(six.begin(), six.end(), [](const UserPermutation& u) {
          return u.order == std::vector<int>{4, 5, 6, 1, 2, 3};
        }) == 1);
  std::set<std::vector<int>> distinct;
  for (const auto& u : six) {
    CHECK(u.is_permutation_of(6));
    distinct.insert(u.order);
  }
  CHECK(distinct.size() == 6);
}

TEST_CASE("rotation-order count: worked example and brute force") {
  const UserPermutation u({1, 4, 3, 2, 5, 6});
  CHECK(rotations_with_order(u, 1, 2) == 3);  // l = 3 steps from user 1 to user 2
  CHECK_THROWS_AS(rotations_with_order(u, 2, 2), std::invalid_argument);

  const auto brute = [](const UserPermutation& perm, int k1, int k2) {
    int n = 0;
    for (const UserPermutation& r : circular_shifts(perm))
      if (r.position_of(k1) < r.position_of(k2)) ++n;
    return n;
  };

  // adjacent successor: all but one rotation keep the order
  CHECK(rotations_with_order(u, 1, 4) == 5);

  // exhaustive over every permutation for small K
  for (int users = 2; users <= 5; ++users) {
    std::vector<int> base(static_cast<std::size_t>(users));
    std::iota(base.begin(), base.end(), 1);
    do {
      const UserPermutation perm(base);
      for (int k1 = 1; k1 <= users; ++k1)
        for (int k2 = 1; k2 <= users; ++k2)
          if (k1 != k2) REQUIRE(rotations_with_order(perm, k1, k2) == brute(perm, k1, k2));
    } while (std::next_permutation(base.begin(), base.end()));
  }
  // sampled beyond that
  std::mt19937 rng(7);
  for (int users = 6; users <= 8; ++users) {
    std::vector<int> base(static_cast<std::size_t>(users));
    std::iota(base.begin(), base.end(), 1);
    for (int trial = 0; trial < 120; ++trial) {
      std::shuffle(base.begin(), base.end(), rng);
      const UserPermutation perm(base);
      for (int k1 = 1; k1 <= users; ++k1)
        for (int k2 = 1; k2 <= users; ++k2)
          if (k1 != k2) REQUIRE(rotations_with_order(perm, k1, k2) == brute(perm, k1, k2));
    }
  }
}
