#pragma once

// Tabular and textual reports behind the command-line front end. Everything
// here renders exact rationals computed by the core headers; decimals only
// appear at the output boundary.

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "selfishcc/bounds.hpp"
#include "selfishcc/delivery.hpp"
#include "selfishcc/oracle.hpp"

namespace selfishcc {

struct Cell {
  enum class Kind { Empty, Text, Value };
  Kind kind = Kind::Empty;
  std::string text;
  Rational value;

  Cell() = default;
  Cell(std::string t) : kind(Kind::Text), text(std::move(t)) {}
  Cell(const char* t) : kind(Kind::Text), text(t) {}
  Cell(const Rational& v) : kind(Kind::Value), value(v) {}
  Cell(std::int64_t v) : kind(Kind::Value), value(v) {}
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string render_csv(const Table& table, int precision) {
  const auto escape = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += escape(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      switch (row[c].kind) {
        case Cell::Kind::Empty: break;
        case Cell::Kind::Text: out += escape(row[c].text); break;
        case Cell::Kind::Value: out += row[c].value.to_decimal(precision); break;
      }
    }
    out += '\n';
  }
  return out;
}

/// Space-separated layout for gnuplot: '#'-prefixed header, '-' for
/// missing cells (pair with `set datafile missing "-"`).
inline std::string render_gnuplot(const Table& table, int precision) {
  std::string out = "#";
  for (const std::string& c : table.columns) {
    out += ' ';
    out += c;
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      switch (row[c].kind) {
        case Cell::Kind::Empty: out += '-'; break;
        case Cell::Kind::Text: out += row[c].text; break;
        case Cell::Kind::Value: out += row[c].value.to_decimal(precision); break;
      }
    }
    out += '\n';
  }
  return out;
}

inline std::string render_json(const Table& table, int precision) {
  nlohmann::ordered_json doc;
  doc["table"] = table.name;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
    for (const Cell& cell : row) {
      switch (cell.kind) {
        case Cell::Kind::Empty: jrow.push_back(nullptr); break;
        case Cell::Kind::Text: jrow.push_back(cell.text); break;
        case Cell::Kind::Value:
          jrow.push_back({{"num", cell.value.num()},
                          {"den", cell.value.den()},
                          {"dec", cell.value.to_decimal(precision)}});
          break;
      }
    }
    doc["rows"].push_back(std::move(jrow));
  }
  return doc.dump(2) + "\n";
}

/// Memory-load trade-off rows over the shared redundancy axis t in [0, K].
/// Selfish columns stop at t = alpha; cells beyond their range stay empty.
inline Table tradeoff_table(const FdsStructure& s) {
  Table t;
  t.name = "tradeoff";
  t.columns = {"t", "M", "R_lb", "R_man", "R_uncoded_selfish", "R_uncoded_unselfish"};
  for (int i = 0; i <= s.users; ++i) {
    std::vector<Cell> row;
    row.emplace_back(std::int64_t{i});
    row.emplace_back(s.memory_at(i));
    if (i <= s.audience_size) {
      row.emplace_back(converse_load(s.users, s.audience_size, i));
    } else {
      row.emplace_back();
    }
    row.emplace_back(man_load(s.users, i));
    if (i <= s.audience_size) {
      row.emplace_back(uncoded_load_selfish(s.users, s.audience_size, i));
    } else {
      row.emplace_back();
    }
    row.emplace_back(uncoded_load_unselfish(s.users, i));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Coding-gain comparison across K for the three audience growth rules
/// K/2, 4K/5 and 19K/20 at a fixed cache fraction gamma, plus the
/// K-independent ceilings the bounds approach.
inline Table gains_table(const Rational& gamma, int k_min = 20, int k_max = 400, int k_step = 20) {
  if (gamma < Rational(0) || gamma > Rational(1)) throw std::domain_error("gamma must be in [0, 1]");
  if (k_min < 1 || k_step < 1 || k_max < k_min) throw std::domain_error("bad K grid");
  Table t;
  t.name = "gains";
  t.columns = {"K",           "unselfish_gain", "bound_alpha_K2", "bound_alpha_4K5",
               "bound_alpha_19K20", "limit_alpha_K2", "limit_alpha_4K5", "limit_alpha_19K20"};
  const std::vector<Rational> rules = {{1, 2}, {4, 5}, {19, 20}};
  for (int k = k_min; k <= k_max; k += k_step) {
    std::vector<Cell> row;
    row.emplace_back(std::int64_t{k});
    row.emplace_back(Rational(k) * gamma + 1);
    for (const Rational& rule : rules) {
      const Rational audience = rule * k;
      row.emplace_back((Rational(k) * gamma + 1) / ((Rational(k) - audience) * gamma + 1));
    }
    for (const Rational& rule : rules) row.emplace_back(Rational(1) / (Rational(1) - rule));
    t.rows.push_back(std::move(row));
  }
  return t;
}

enum class DemoScenario { Circular541T2, Circular541T3, Circular651T3, AlphaDemand533T2 };

inline std::optional<DemoScenario> demo_scenario_from_name(const std::string& name) {
  if (name == "5-4-1-t2") return DemoScenario::Circular541T2;
  if (name == "5-4-1-t3") return DemoScenario::Circular541T3;
  if (name == "6-5-1-t3") return DemoScenario::Circular651T3;
  if (name == "5-3-3-t2") return DemoScenario::AlphaDemand533T2;
  return std::nullopt;
}

struct DemoResult {
  Rational load;
  Rational bound;
  bool all_decodable = false;
  std::string rendered;
  DeliveryScheme scheme;

  [[nodiscard]] bool tight() const { return all_decodable && load == bound; }
};

/// Runs one of the built-in worked scenarios end to end: place, build the
/// scheme, verify decodability and confront the load with the matching
/// converse value (computed independently).
inline DemoResult run_demo(DemoScenario scenario, int precision = 12) {
  FdsStructure s = scenario == DemoScenario::Circular651T3  ? FdsStructure(6, 5, 1)
                   : scenario == DemoScenario::AlphaDemand533T2 ? FdsStructure(5, 3, 3)
                                                                : FdsStructure(5, 4, 1);
  const int t = scenario == DemoScenario::Circular541T3 || scenario == DemoScenario::Circular651T3
                    ? 3
                    : 2;
  const Placement placement = selfish_man_placement(s, t);

  Demand dm;
  DeliveryScheme scheme;
  Rational bound;
  std::string family;
  if (scenario == DemoScenario::AlphaDemand533T2) {
    dm = Demand({UserSet::of({1, 2, 3}), UserSet::of({1, 2, 3}), UserSet::of({1, 2, 3}),
                 UserSet::of({1, 2, 4}), UserSet::of({1, 2, 5})},
                {1, 2, 3, 1, 1});
    scheme = alpha_demand_scheme(placement, dm);
    bound = alpha_demand_converse(placement, dm);
    family = "distinct-file group demand";
  } else {
    const auto witness = UserPermutation::identity(s.users);
    dm = CircularDemandSpace(s).at(0).demand;
    scheme = s.users == 6 ? circular_scheme_6_5_t3(placement, dm, witness)
                          : circular_scheme_5_4(placement, dm, witness);
    bound = converse_load(s.users, s.audience_size, t);
    family = "circular demand";
  }

  const DecodeReport report = verify_decodability(placement, dm, scheme);

  std::ostringstream out;
  out << "structure: K=" << s.users << " alpha=" << s.audience_size
      << " f=" << s.files_per_class << ", " << family << ", t=" << t << "\n";
  out << "placement: selfish equal split, subpacketization " << placement.subpacketization()
      << ", per-user cache " << placement.cached_subfile_count(1)
      << " subfiles (M = " << placement.memory().to_decimal(precision) << ")\n";
  out << "demand: d = (";
  for (int k = 1; k <= s.users; ++k) out << (k > 1 ? "," : "") << dm.class_of(k).to_string();
  out << "), f = (";
  for (int k = 1; k <= s.users; ++k) out << (k > 1 ? "," : "") << dm.file_of(k);
  out << ")\n";
  out << "messages:\n";
  for (std::size_t i = 0; i < scheme.messages.size(); ++i) {
    out << "  X" << i + 1 << " = ";
    const auto& parts = scheme.messages[i].parts;
    for (std::size_t j = 0; j < parts.size(); ++j)
      out << (j ? " + " : "") << parts[j].to_string();
    out << "\n";
  }
  for (const auto& ur : report.users) {
    out << "user " << ur.user << ": " << (ur.decodable ? "decodes" : "FAILS");
    if (ur.decodable) {
      for (const auto& cert : ur.certificates) {
        out << "  " << cert.subfile.to_string() << "<=";
        for (std::size_t j = 0; j < cert.messages.size(); ++j)
          out << (j ? "^" : "") << "X" << cert.messages[j] + 1;
      }
    }
    out << "\n";
  }
  out << "load  = " << scheme.load().to_string() << " (" << scheme.load().to_decimal(precision)
      << ")\n";
  out << "bound = " << bound.to_string() << " (" << bound.to_decimal(precision) << ")\n";

  DemoResult result{scheme.load(), bound, report.all_decodable(), {}, scheme};
  out << "tight and decodable: " << (result.tight() ? "yes" : "NO") << "\n";
  result.rendered = out.str();
  return result;
}

enum class PropertyStatus { Pass, Fail, Capped, Skipped };

inline const char* to_string(PropertyStatus s) {
  switch (s) {
    case PropertyStatus::Pass: return "pass";
    case PropertyStatus::Fail: return "fail";
    case PropertyStatus::Capped: return "cap-exceeded";
    case PropertyStatus::Skipped: return "skipped";
  }
  return "?";
}

struct PropertyOutcome {
  std::string name;
  PropertyStatus status;
  std::string detail;
};

struct VerifyOutcome {
  std::vector<PropertyOutcome> properties;

  [[nodiscard]] bool any(PropertyStatus s) const {
    for (const auto& p : properties)
      if (p.status == s) return true;
    return false;
  }
  [[nodiscard]] Table table() const {
    Table t;
    t.name = "verify";
    t.columns = {"property", "status", "detail"};
    for (const auto& p : t_rows()) t.rows.push_back(p);
    return t;
  }

private:
  [[nodiscard]] std::vector<std::vector<Cell>> t_rows() const {
    std::vector<std::vector<Cell>> rows;
    for (const auto& p : properties)
      rows.push_back({Cell(p.name), Cell(std::string(to_string(p.status))), Cell(p.detail)});
    return rows;
  }
};

/// The full verification sweep for one structure: enumeration counts,
/// acyclicity of every index-coding witness set, averaged-bound equality at
/// every redundancy, appearance-count equality, profile-bound agreement and
/// the tight schemes where one is known. Cap overruns mark the affected
/// property and the rest still run.
inline VerifyOutcome run_verify(const FdsStructure& s, std::optional<int> only_t,
                                std::uint64_t cap, int threads, std::uint64_t seed = 0) {
  VerifyOutcome out;
  const auto push = [&](std::string name, PropertyStatus st, std::string detail) {
    out.properties.push_back({std::move(name), st, std::move(detail)});
  };
  const int alpha = s.audience_size;
  std::vector<int> t_values;
  if (only_t) {
    if (*only_t < 0 || *only_t > alpha) throw std::domain_error("t outside [0, alpha]");
    t_values.push_back(*only_t);
  } else {
    for (int t = 0; t <= alpha; ++t) t_values.push_back(t);
  }

  if (alpha < 2 || alpha > s.users - 1) {
    push("circular-count", PropertyStatus::Skipped, "degenerate audience size");
    push("acyclicity", PropertyStatus::Skipped, "degenerate audience size");
    for (int t : t_values)
      push("averaged-bound[t=" + std::to_string(t) + "]", PropertyStatus::Skipped,
           "degenerate audience size");
  } else {
    try {
      const CircularDemandSpace space(s);
      const std::uint64_t expected = circular_demand_count(s);
      bool all_circular = true;
      if (space.size() * static_cast<std::uint64_t>(s.users) <= cap) {
        for (std::uint64_t i = 0; i < space.size() && all_circular; ++i) {
          const CircularDemand cd = space.at(i);
          all_circular = is_valid_demand(s, cd.demand) &&
                         satisfies_circular_pattern(s, cd.demand, cd.witness);
        }
        push("circular-count",
             space.size() == expected && all_circular ? PropertyStatus::Pass
                                                      : PropertyStatus::Fail,
             std::to_string(space.size()) + " demands, formula " + std::to_string(expected));
      } else {
        push("circular-count", PropertyStatus::Capped,
             "needs " + std::to_string(space.size()) + " demands");
      }

      SweepOptions opts;
      opts.cap = cap;
      opts.threads = threads;
      const SweepTotals totals = circular_demand_sweep(s, opts);
      push("acyclicity",
           totals.acyclic_failures == 0 ? PropertyStatus::Pass : PropertyStatus::Fail,
           std::to_string(totals.pair_count) + " vertex sets, " +
               std::to_string(totals.acyclic_failures) + " failures");
      for (int t : t_values) {
        const Rational avg = totals.average_bound(s, t);
        const Rational expect = converse_load(s.users, alpha, t);
        push("averaged-bound[t=" + std::to_string(t) + "]",
             avg == expect ? PropertyStatus::Pass : PropertyStatus::Fail,
             avg.to_string() + " vs " + expect.to_string() + " over " +
                 std::to_string(totals.pair_count) + " bounds");
      }
      for (int t : t_values) {
        const UserSet cls = all_classes(s).front();
        const UserSet tag = subsets_of_size(cls, t).front();
        const std::uint64_t counted =
            subfile_appearance_count(s, t, {{cls, 1}, tag}, opts);
        const std::uint64_t formula = subfile_appearance_formula(s, t);
        push("appearance-count[t=" + std::to_string(t) + "]",
             counted == formula ? PropertyStatus::Pass : PropertyStatus::Fail,
             std::to_string(counted) + " vs formula " + std::to_string(formula));
      }
    } catch (const CapExceededError& e) {
      push("circular-sweep", PropertyStatus::Capped, e.what());
    }
  }

  for (int t : t_values) {
    const Rational m = s.memory_at(t);
    const Rational jensen = placement_profile_lower_bound(s, m);
    const Rational vertex = placement_profile_lower_bound_vertex(s, m);
    const Rational corner = converse_load(s.users, alpha, t);
    push("profile-bound[t=" + std::to_string(t) + "]",
         jensen == vertex && jensen == corner ? PropertyStatus::Pass : PropertyStatus::Fail,
         jensen.to_string() + " / " + vertex.to_string() + " / " + corner.to_string());
  }

  {
    std::mt19937_64 rng(seed);
    bool ok = true;
    std::string first_bad;
    for (int trial = 0; trial < 25; ++trial) {
      const std::int64_t q = static_cast<std::int64_t>(rng() % 60) + 1;
      const std::int64_t p = static_cast<std::int64_t>(
          rng() % static_cast<std::uint64_t>(q * s.fds_size() + 1));
      const Rational memory(p, q);
      if (placement_profile_lower_bound(s, memory) !=
          placement_profile_lower_bound_vertex(s, memory)) {
        ok = false;
        first_bad = memory.to_string();
        break;
      }
    }
    push("profile-bound-random", ok ? PropertyStatus::Pass : PropertyStatus::Fail,
         ok ? "25 sampled memory points, seed " + std::to_string(seed)
            : "solver disagreement at M = " + first_bad);
  }

  for (int t : t_values) {
    const bool known_5_4 = s.users == 5 && alpha == 4 && (t == 2 || t == 3);
    const bool known_6_5 = s.users == 6 && alpha == 5 && t == 3;
    if (known_5_4 || known_6_5) {
      try {
        const CircularDemandSpace space(s);
        if (space.size() > cap) throw CapExceededError("scheme sweep over cap", space.size(), cap);
        const Placement placement = selfish_man_placement(s, t);
        const Rational expect = converse_load(s.users, alpha, t);
        std::uint64_t checked = 0;
        bool ok = true;
        for (std::uint64_t i = 0; i < space.size() && ok; ++i) {
          const CircularDemand cd = space.at(i);
          const DeliveryScheme scheme =
              known_6_5 ? circular_scheme_6_5_t3(placement, cd.demand, cd.witness)
                        : circular_scheme_5_4(placement, cd.demand, cd.witness);
          ok = scheme.load() == expect &&
               verify_decodability(placement, cd.demand, scheme).all_decodable();
          ++checked;
        }
        push("tight-scheme[t=" + std::to_string(t) + "]",
             ok ? PropertyStatus::Pass : PropertyStatus::Fail,
             std::to_string(checked) + " circular demands at load " + expect.to_string());
      } catch (const CapExceededError& e) {
        push("tight-scheme[t=" + std::to_string(t) + "]", PropertyStatus::Capped, e.what());
      }
    } else if (s.files_per_class >= alpha) {
      const Placement placement = selfish_man_placement(s, t);
      const Demand dm = make_alpha_converse_demand(s, all_classes(s).front());
      const DeliveryScheme scheme = alpha_demand_scheme(placement, dm);
      const Rational converse = alpha_demand_converse(placement, dm);
      const bool ok = scheme.load() == converse &&
                      scheme.load() == converse_load(s.users, alpha, t) &&
                      verify_decodability(placement, dm, scheme).all_decodable();
      push("tight-scheme[t=" + std::to_string(t) + "]",
           ok ? PropertyStatus::Pass : PropertyStatus::Fail,
           "group demand, load " + scheme.load().to_string() + " vs converse " +
               converse.to_string());
    } else {
      push("tight-scheme[t=" + std::to_string(t) + "]", PropertyStatus::Skipped,
           "no scheme known for this structure");
    }
  }
  return out;
}

/// Closed-form and (cap permitting) enumerated demand counts.
struct CountReport {
  Table table;
  bool cap_exceeded = false;
};

inline CountReport count_report(const FdsStructure& s, std::uint64_t cap, bool enumerate) {
  CountReport report;
  report.table.name = "count";
  report.table.columns = {"quantity", "closed_form", "enumerated"};

  const auto per_user =
      static_cast<std::uint64_t>(s.files_per_class) * static_cast<std::uint64_t>(binom(s.users - 1, s.audience_size - 1));
  unsigned __int128 valid_formula = 1;
  for (int k = 0; k < s.users; ++k) valid_formula *= per_user;

  std::vector<Cell> valid_row{Cell("valid_demands")};
  if (valid_formula <= static_cast<unsigned __int128>(INT64_MAX))
    valid_row.emplace_back(Rational(static_cast<std::int64_t>(valid_formula)));
  else
    valid_row.emplace_back("overflow");
  if (enumerate) {
    try {
      const ValidDemandSpace space(s, cap);
      std::uint64_t n = 0;
      space.for_each([&](const Demand& dm) {
        if (is_valid_demand(s, dm)) ++n;
      });
      valid_row.emplace_back(Rational(static_cast<std::int64_t>(n)));
    } catch (const CapExceededError&) {
      valid_row.emplace_back();
      report.cap_exceeded = true;
    }
  } else {
    valid_row.emplace_back();
  }
  report.table.rows.push_back(std::move(valid_row));

  std::vector<Cell> circ_row{Cell("circular_demands")};
  if (s.audience_size >= 2 && s.audience_size <= s.users - 1) {
    try {
      const std::uint64_t n = circular_demand_count(s);
      if (n > static_cast<std::uint64_t>(INT64_MAX)) throw std::overflow_error("count");
      circ_row.emplace_back(Rational(static_cast<std::int64_t>(n)));
    } catch (const std::overflow_error&) {
      circ_row.emplace_back("overflow");
    }
    if (enumerate) {
      try {
        const CircularDemandSpace space(s);
        if (space.size() > cap)
          throw CapExceededError("circular enumeration over cap", space.size(), cap);
        std::uint64_t n = 0;
        space.for_each([&](const CircularDemand& cd) {
          if (satisfies_circular_pattern(s, cd.demand, cd.witness)) ++n;
        });
        circ_row.emplace_back(Rational(static_cast<std::int64_t>(n)));
      } catch (const CapExceededError&) {
        circ_row.emplace_back();
        report.cap_exceeded = true;
      }
    } else {
      circ_row.emplace_back();
    }
  } else {
    circ_row.emplace_back("n/a");
    circ_row.emplace_back();
  }
  report.table.rows.push_back(std::move(circ_row));
  return report;
}

}  // namespace selfishcc
