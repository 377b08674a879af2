// Batch front end for the selfish coded caching workbench: reproduces the
// trade-off and gain curves as CSV/JSON data, runs the worked demo
// scenarios, and drives the verification sweeps.
//
// Exit codes: 0 success / all-pass, 1 verification failure, 2 invalid
// configuration, 3 enumeration cap exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "selfishcc/report.hpp"
#include "selfishcc/selfishcc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitCapExceeded = 3;

struct CommonOpts {
  std::string format = "csv";
  bool gnuplot = false;
  int precision = 12;
  std::string out_path;
  std::uint64_t cap = 10'000'000;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_flag("--gnuplot", opts.gnuplot, "Space-separated column layout for gnuplot");
  cmd->add_option("--precision", opts.precision, "Significant digits for decimals")
      ->check(CLI::Range(1, 30))
      ->capture_default_str();
  cmd->add_option("--out", opts.out_path, "Write output to a file instead of stdout");
  cmd->add_option("--cap", opts.cap, "Enumeration cap (bound evaluations)")
      ->capture_default_str();
}

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opts.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + opts.out_path);
  file << text;
}

void emit_table(const CommonOpts& opts, const selfishcc::Table& table) {
  std::string text;
  if (opts.gnuplot)
    text = selfishcc::render_gnuplot(table, opts.precision);
  else if (opts.format == "json")
    text = selfishcc::render_json(table, opts.precision);
  else
    text = selfishcc::render_csv(table, opts.precision);
  emit(opts, text);
}

int thread_count() {
  return selfishcc::default_worker_count();  // honours SELFISH_CC_THREADS
}

// with alpha = K the worst case needs at least K files in the single class,
// otherwise distinct demands are impossible and the corner values read as
// optimistic
void warn_degenerate(const selfishcc::FdsStructure& s) {
  if (s.audience_size == s.users && s.files_per_class < s.users)
    std::cerr << "warning: alpha = K with f < K cannot realize worst-case demands; "
                 "loads are lower bounds only\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace selfishcc;

  CLI::App app{"selfish coded caching workbench"};
  app.require_subcommand(1);

  // --- tradeoff ---------------------------------------------------------
  CommonOpts tradeoff_opts;
  int tr_users = 0, tr_alpha = 0, tr_files = 1;
  auto* tradeoff = app.add_subcommand("tradeoff", "Memory-load trade-off table");
  tradeoff->add_option("--K", tr_users, "User count")->required();
  tradeoff->add_option("--alpha", tr_alpha, "Audience size per file class")->required();
  tradeoff->add_option("--f", tr_files, "Files per class")->capture_default_str();
  add_common(tradeoff, tradeoff_opts);

  // --- gains ------------------------------------------------------------
  CommonOpts gains_opts;
  std::string gains_gamma = "1/20";
  int gains_kmin = 20, gains_kmax = 400, gains_kstep = 20;
  auto* gains = app.add_subcommand("gains", "Coding-gain comparison across K");
  gains->add_option("--gamma", gains_gamma, "Cache fraction, e.g. 1/20")->capture_default_str();
  gains->add_option("--K-min", gains_kmin)->capture_default_str();
  gains->add_option("--K-max", gains_kmax)->capture_default_str();
  gains->add_option("--K-step", gains_kstep)->capture_default_str();
  add_common(gains, gains_opts);

  // --- demo -------------------------------------------------------------
  CommonOpts demo_opts;
  std::string scenario_name;
  auto* demo = app.add_subcommand("demo", "Worked scheme-vs-converse scenarios");
  demo->add_option("--scenario", scenario_name,
                   "One of: 5-4-1-t2, 5-4-1-t3, 6-5-1-t3, 5-3-3-t2")
      ->required();
  std::string emit_scheme_path;
  demo->add_option("--emit-scheme", emit_scheme_path,
                   "Also write the scheme in its line-oriented text format");
  add_common(demo, demo_opts);

  // --- verify -----------------------------------------------------------
  CommonOpts verify_opts;
  int ve_users = 0, ve_alpha = 0, ve_files = 1;
  int ve_t = -1;
  auto* verify = app.add_subcommand("verify", "Run the full property suite on one structure");
  verify->add_option("--K", ve_users, "User count")->required();
  verify->add_option("--alpha", ve_alpha, "Audience size per file class")->required();
  verify->add_option("--f", ve_files, "Files per class")->capture_default_str();
  verify->add_option("--t", ve_t, "Restrict to one redundancy value");
  std::uint64_t ve_seed = 0;
  verify->add_option("--seed", ve_seed, "Seed for the sampled profile-bound checks")
      ->capture_default_str();
  add_common(verify, verify_opts);

  // --- count ------------------------------------------------------------
  CommonOpts count_opts;
  int co_users = 0, co_alpha = 0, co_files = 1;
  bool co_formula_only = false;
  auto* count = app.add_subcommand("count", "Valid and circular demand counts");
  count->add_option("--K", co_users, "User count")->required();
  count->add_option("--alpha", co_alpha, "Audience size per file class")->required();
  count->add_option("--f", co_files, "Files per class")->capture_default_str();
  count->add_flag("--formula-only", co_formula_only, "Skip the enumeration cross-check");
  add_common(count, count_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  try {
    if (tradeoff->parsed()) {
      const FdsStructure s(tr_users, tr_alpha, tr_files);
      warn_degenerate(s);
      emit_table(tradeoff_opts, tradeoff_table(s));
      return kExitOk;
    }

    if (gains->parsed()) {
      const Rational gamma = Rational::parse(gains_gamma);
      emit_table(gains_opts, gains_table(gamma, gains_kmin, gains_kmax, gains_kstep));
      return kExitOk;
    }

    if (demo->parsed()) {
      const auto scenario = demo_scenario_from_name(scenario_name);
      if (!scenario) {
        std::cerr << "unknown scenario " << scenario_name << "\n";
        return kExitBadConfig;
      }
      const DemoResult result = run_demo(*scenario, demo_opts.precision);
      emit(demo_opts, result.rendered);
      if (!emit_scheme_path.empty()) {
        std::ofstream file(emit_scheme_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + emit_scheme_path);
        file << serialize_scheme(result.scheme);
      }
      return result.tight() ? kExitOk : kExitVerificationFailure;
    }

    if (verify->parsed()) {
      const FdsStructure s(ve_users, ve_alpha, ve_files);
      warn_degenerate(s);
      std::optional<int> only_t;
      if (verify->count("--t") > 0) only_t = ve_t;
      const VerifyOutcome outcome = run_verify(s, only_t, verify_opts.cap, thread_count(), ve_seed);
      emit_table(verify_opts, outcome.table());
      if (outcome.any(PropertyStatus::Fail)) return kExitVerificationFailure;
      if (outcome.any(PropertyStatus::Capped)) return kExitCapExceeded;
      return kExitOk;
    }

    if (count->parsed()) {
      const FdsStructure s(co_users, co_alpha, co_files);
      warn_degenerate(s);
      const CountReport report = count_report(s, count_opts.cap, !co_formula_only);
      emit_table(count_opts, report.table);
      return report.cap_exceeded ? kExitCapExceeded : kExitOk;
    }
  } catch (const CapExceededError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
  return kExitBadConfig;
}
