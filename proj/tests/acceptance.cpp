// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Every expected value is pinned here as an exact rational; runtime budgets
// are part of the pass condition.

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "selfishcc/report.hpp"
#include "selfishcc/selfishcc.hpp"

using namespace selfishcc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Harness {
  int failures = 0;

  template <typename Fn>
  void criterion(int id, const std::string& name, double budget_ms, Fn&& fn) {
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(outcome);
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    if (ms > budget_ms)
      outcome.require(false, "over time budget: " + std::to_string(ms) + " ms > " +
                                 std::to_string(budget_ms) + " ms");
    if (!outcome.pass) ++failures;
    std::ostringstream line;
    line << (outcome.pass ? "PASS" : "FAIL") << " criterion " << std::setw(2) << id << "  ["
         << std::fixed << std::setprecision(1) << std::setw(9) << ms << " ms]  " << name;
    if (!outcome.pass) line << "  -- " << outcome.detail;
    std::cout << line.str() << "\n" << std::flush;
  }
};

/// Criteria 1-3 share this: every circular demand of the structure must be
/// served at exactly the converse load with all users decoding.
void check_tight_circular_family(Outcome& o, const FdsStructure& s, int t,
                                 const Rational& expected_load, std::uint64_t expected_demands) {
  const Placement placement = selfish_man_placement(s, t);
  if (converse_load(s.users, s.audience_size, t) != expected_load) {
    o.require(false, "converse corner is not " + expected_load.to_string());
    return;
  }
  const CircularDemandSpace space(s);
  o.require(space.size() == expected_demands,
            "expected " + std::to_string(expected_demands) + " circular demands, got " +
                std::to_string(space.size()));
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    const CircularDemand cd = space.at(i);
    const DeliveryScheme scheme = s.users == 6
                                      ? circular_scheme_6_5_t3(placement, cd.demand, cd.witness)
                                      : circular_scheme_5_4(placement, cd.demand, cd.witness);
    o.require(scheme.load() == expected_load,
              "scheme load " + scheme.load().to_string() + " at demand " + std::to_string(i));
    o.require(verify_decodability(placement, cd.demand, scheme).all_decodable(),
              "undecodable user at demand " + std::to_string(i));
    if (!o.pass) return;
  }
}

struct FamilySweep {
  FdsStructure structure;
  SweepTotals totals;
};

/// The small-instance family behind criteria 5-7: K <= 6, 2 <= alpha <= K-1,
/// f in {1, 2}.
std::vector<FamilySweep> run_family_sweeps() {
  std::vector<FamilySweep> out;
  for (int users = 3; users <= 6; ++users)
    for (int alpha = 2; alpha <= users - 1; ++alpha)
      for (int f : {1, 2}) {
        const FdsStructure s(users, alpha, f);
        SweepOptions opts;
        opts.cap = 50'000'000;
        out.push_back({s, circular_demand_sweep(s, opts)});
      }
  return out;
}

}  // namespace

int main() {
  Harness h;
  std::cout << "acceptance suite: selfish coded caching workbench\n";

  h.criterion(1, "converse tightness (5,4,1) t=2: load 7/6 over all 24 circular demands", 1000,
              [](Outcome& o) {
                check_tight_circular_family(o, FdsStructure(5, 4, 1), 2, Rational(7, 6), 24);
              });

  h.criterion(2, "converse tightness (5,4,1) t=3: load 1/2 over all circular demands", 1000,
              [](Outcome& o) {
                check_tight_circular_family(o, FdsStructure(5, 4, 1), 3, Rational(1, 2), 24);
              });

  h.criterion(3, "converse tightness (6,5,1) t=3: load 9/10 over all 120 circular demands", 10000,
              [](Outcome& o) {
                check_tight_circular_family(o, FdsStructure(6, 5, 1), 3, Rational(9, 10), 120);
              });

  h.criterion(
      4, "group-demand tightness (5,3,3) t=2: scheme load 1 equals the vertex-set converse", 1000,
      [](Outcome& o) {
        const FdsStructure s(5, 3, 3);
        const Placement p = selfish_man_placement(s, 2);
        const Demand dm({UserSet::of({1, 2, 3}), UserSet::of({1, 2, 3}), UserSet::of({1, 2, 3}),
                         UserSet::of({1, 2, 4}), UserSet::of({1, 2, 5})},
                        {1, 2, 3, 1, 1});
        const DeliveryScheme scheme = alpha_demand_scheme(p, dm);       // counted messages
        const Rational converse = alpha_demand_converse(p, dm);         // acyclic vertex total
        o.require(scheme.load() == Rational(1), "scheme load " + scheme.load().to_string());
        o.require(converse == Rational(1), "converse " + converse.to_string());
        o.require(verify_decodability(p, dm, scheme).all_decodable(), "undecodable user");
      });

  // criteria 5-7 share one exhaustive sweep over the instance family
  std::vector<FamilySweep> sweeps;

  h.criterion(5,
              "averaged circular bound equals the converse corner on the K<=6 family; "
              "(6,4,1) aggregates 720 bounds",
              120000, [&sweeps](Outcome& o) {
                sweeps = run_family_sweeps();
                o.require(!sweeps.empty(), "family is empty");
                for (const FamilySweep& fs : sweeps) {
                  const FdsStructure& s = fs.structure;
                  for (int t = 0; t <= s.audience_size; ++t) {
                    const Rational avg = fs.totals.average_bound(s, t);
                    const Rational corner = converse_load(s.users, s.audience_size, t);
                    o.require(avg == corner, "average " + avg.to_string() + " vs corner " +
                                                 corner.to_string() + " at K=" +
                                                 std::to_string(s.users) + " alpha=" +
                                                 std::to_string(s.audience_size) + " f=" +
                                                 std::to_string(s.files_per_class) + " t=" +
                                                 std::to_string(t));
                  }
                  if (s.users == 6 && s.audience_size == 4 && s.files_per_class == 1)
                    o.require(fs.totals.pair_count == 720,
                              "(6,4,1) aggregated " + std::to_string(fs.totals.pair_count) +
                                  " bounds instead of 720");
                }
              });

  h.criterion(6, "circular demand enumeration matches f^K (K-1)! on the family; (6,4,1) gives 120",
              60000, [&sweeps](Outcome& o) {
                for (const FamilySweep& fs : sweeps) {
                  const FdsStructure& s = fs.structure;
                  const CircularDemandSpace space(s);
                  const std::uint64_t formula = circular_demand_count(s);
                  o.require(space.size() == formula, "space size mismatch");
                  std::set<std::pair<std::vector<std::uint32_t>, std::vector<int>>> seen;
                  for (std::uint64_t i = 0; i < space.size(); ++i) {
                    const CircularDemand cd = space.at(i);
                    bool circular = is_valid_demand(s, cd.demand);
                    for (const UserPermutation& u : circular_shifts(cd.witness))
                      circular = circular && satisfies_circular_pattern(s, cd.demand, u);
                    o.require(circular, "enumerated demand not circular");
                    std::vector<std::uint32_t> masks;
                    for (const UserSet& c : cd.demand.classes) masks.push_back(c.mask);
                    seen.insert({masks, cd.demand.files});
                  }
                  o.require(seen.size() == formula,
                            "duplicates: " + std::to_string(seen.size()) + " distinct of " +
                                std::to_string(formula));
                  if (s.users == 6 && s.audience_size == 4 && s.files_per_class == 1)
                    o.require(formula == 120, "(6,4,1) count is not 120");
                }
              });

  h.criterion(7, "every index-coding vertex set over the family passes topological sort", 60000,
              [&sweeps](Outcome& o) {
                std::uint64_t sets = 0;
                for (const FamilySweep& fs : sweeps) {
                  o.require(fs.totals.acyclic_failures == 0,
                            std::to_string(fs.totals.acyclic_failures) + " failures at K=" +
                                std::to_string(fs.structure.users));
                  sets += fs.totals.pair_count;
                }
                o.require(sets > 0, "no vertex sets checked");
              });

  h.criterion(8, "counting-sum form of the coefficient equals the closed form, K<=20", 5000,
              [](Outcome& o) {
                for (int users = 1; users <= 20; ++users)
                  for (int alpha = 1; alpha <= users; ++alpha)
                    for (int t = 0; t <= alpha; ++t)
                      o.require(converse_coefficient(users, alpha, t) ==
                                    converse_coefficient_sum_form(users, alpha, t),
                                "mismatch at K=" + std::to_string(users) + " alpha=" +
                                    std::to_string(alpha) + " t=" + std::to_string(t));
              });

  h.criterion(9,
              "load ratio >= 1 with equality exactly at the endpoints; full audience matches "
              "the classical load, K<=20",
              5000, [](Outcome& o) {
                for (int users = 2; users <= 20; ++users) {
                  for (int alpha = 1; alpha <= users - 1; ++alpha)
                    for (int t = 0; t <= alpha - 1; ++t) {
                      const Rational ratio = load_ratio_vs_man(users, alpha, t);
                      const bool boundary = t == 0 || t == alpha - 1;
                      o.require(ratio >= Rational(1), "ratio below 1");
                      o.require(boundary ? ratio == Rational(1) : ratio > Rational(1),
                                "wrong equality pattern at K=" + std::to_string(users) +
                                    " alpha=" + std::to_string(alpha) + " t=" + std::to_string(t));
                      o.require(ratio == converse_load(users, alpha, t) / man_load(users, t),
                                "closed form disagrees with the direct quotient");
                    }
                  for (int t = 0; t <= users; ++t)
                    o.require(converse_load(users, users, t) == man_load(users, t),
                              "full-audience mismatch at t=" + std::to_string(t));
                }
              });

  h.criterion(10,
              "gain bound stays below 1/(1-delta) on a dense grid; coefficient differences are "
              "strictly monotone and convex, K<=20",
              10000, [](Outcome& o) {
                for (int users = 2; users <= 20; ++users)
                  for (int alpha = 1; alpha <= users - 1; ++alpha)
                    for (int j = 1; j <= 40; ++j) {
                      const Rational gamma = Rational(j, 40) * Rational(alpha, users);
                      const GainSummary g = coding_gain_bound(users, alpha, gamma);
                      o.require(g.scale_limit && g.bound < *g.scale_limit,
                                "bound not below the ceiling at K=" + std::to_string(users));
                    }
                for (int users = 1; users <= 20; ++users)
                  for (int alpha = 1; alpha <= users; ++alpha) {
                    for (int t = 0; t < alpha; ++t)
                      o.require(converse_load(users, alpha, t + 1) - converse_load(users, alpha, t) <
                                    Rational(0),
                                "first difference not negative");
                    for (int t = 0; t + 2 <= alpha; ++t)
                      o.require(converse_load(users, alpha, t + 2) -
                                        Rational(2) * converse_load(users, alpha, t + 1) +
                                        converse_load(users, alpha, t) >
                                    Rational(0),
                                "second difference not positive");
                  }
              });

  h.criterion(11, "interpolated profile bound equals brute-force vertex enumeration, 100 draws",
              5000, [](Outcome& o) {
                std::mt19937 rng(987654321);
                for (int trial = 0; trial < 100; ++trial) {
                  const int users = std::uniform_int_distribution<int>(2, 20)(rng);
                  const int alpha = std::uniform_int_distribution<int>(1, users)(rng);
                  const FdsStructure s(users, alpha, 1);
                  const std::int64_t q = std::uniform_int_distribution<std::int64_t>(1, 60)(rng);
                  const std::int64_t p =
                      std::uniform_int_distribution<std::int64_t>(0, q * s.fds_size())(rng);
                  const Rational memory(p, q);
                  o.require(placement_profile_lower_bound(s, memory) ==
                                placement_profile_lower_bound_vertex(s, memory),
                            "solver disagreement at K=" + std::to_string(users) + " alpha=" +
                                std::to_string(alpha) + " M=" + memory.to_string());
                }
              });

  h.criterion(12, "trade-off table for (20,12): endpoints 20 and 0, converse column decreasing",
              5000, [](Outcome& o) {
                const Table t = tradeoff_table(FdsStructure(20, 12, 1));
                o.require(t.rows.size() == 21, "wrong row count");
                o.require(t.rows[0][2].value == Rational(20), "t=0 endpoint is not 20");
                o.require(t.rows[12][2].value == Rational(0), "t=12 endpoint is not 0");
                o.require(t.rows[1][2].value == Rational(77, 6), "t=1 value is not 77/6");
                for (int i = 0; i + 1 <= 12; ++i)
                  o.require(t.rows[static_cast<std::size_t>(i + 1)][2].value <
                                t.rows[static_cast<std::size_t>(i)][2].value,
                            "converse column not strictly decreasing");
                const std::string csv_a = render_csv(t, 12);
                const std::string csv_b = render_csv(t, 12);
                o.require(csv_a == csv_b, "rendering not deterministic");
              });

  if (h.failures == 0) {
    std::cout << "all criteria passed\n";
    return 0;
  }
  std::cout << h.failures << " criteria failed\n";
  return 1;
}
