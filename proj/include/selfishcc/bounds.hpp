#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "selfishcc/fds.hpp"

namespace selfishcc {

namespace detail {
inline void check_corner_range(int users, int audience, int t) {
  if (audience < 1 || audience > users) throw std::domain_error("audience size must be in [1, K]");
  if (t < 0 || t > audience) throw std::domain_error("redundancy must be in [0, alpha]");
}
}  // namespace detail

/// Converse corner value at integer redundancy t: the least worst-case load
/// any selfish uncoded placement can hope for. Equals
/// (binom(a,t+1) + (K-a)*binom(a-1,t)) / binom(a,t).
inline Rational converse_load(int users, int audience, int t) {
  detail::check_corner_range(users, audience, t);
  return {binom(audience, t + 1) + (users - audience) * binom(audience - 1, t),
          binom(audience, t)};
}

/// Same value through the factored form K(1-t/a) * ((K-a)*t/K + 1) / (t+1);
/// kept as a distinct evaluation route so the algebraic identity is testable.
inline Rational converse_load_factored(int users, int audience, int t) {
  detail::check_corner_range(users, audience, t);
  const Rational gamma(t, users);
  const Rational gamma_fds(t, audience);
  return Rational(users) * (Rational(1) - gamma_fds) / (Rational(users) * gamma + 1) *
         ((Rational(users - audience) * gamma) + 1);
}

/// Load of the classical unselfish scheme, binom(K,t+1)/binom(K,t).
inline Rational man_load(int users, int t) {
  if (t < 0 || t > users) throw std::domain_error("redundancy must be in [0, K]");
  return {users - t, t + 1};
}

/// Uncoded delivery load when caches are filled selfishly: K(1 - t/alpha).
inline Rational uncoded_load_selfish(int users, int audience, int t) {
  detail::check_corner_range(users, audience, t);
  return Rational(users) * (Rational(1) - Rational(t, audience));
}

/// Uncoded delivery load with unselfish caches: K(1 - t/K) = K - t.
inline Rational uncoded_load_unselfish(int users, int t) {
  if (t < 0 || t > users) throw std::domain_error("redundancy must be in [0, K]");
  return {users - t, 1};
}

struct UncodedLoads {
  Rational unselfish;
  Rational selfish;
};

inline UncodedLoads uncoded_loads(int users, int audience, int t) {
  return {uncoded_load_unselfish(users, t), uncoded_load_selfish(users, audience, t)};
}

/// Converse-to-unselfish load ratio, 1 + t(K-a)(a-1-t) / (a(K-t)). Always
/// >= 1 on t in [0, alpha-1], equal to 1 exactly at the two endpoints.
inline Rational load_ratio_vs_man(int users, int audience, int t) {
  if (audience < 1 || audience > users - 1)
    throw std::domain_error("ratio defined for audience size in [1, K-1]");
  if (t < 0 || t > audience - 1) throw std::domain_error("redundancy must be in [0, alpha-1]");
  return Rational(1) + Rational(static_cast<std::int64_t>(t) * (users - audience) *
                                    (audience - 1 - t),
                                static_cast<std::int64_t>(audience) * (users - t));
}

/// What the converse says about the multicast speedup of selfish caching.
struct GainSummary {
  Rational bound;                       // best possible selfish coding gain
  Rational deterioration;               // unselfish gain / selfish bound
  std::optional<Rational> scale_limit;  // 1/(1-delta); absent when alpha = K
};

/// Gain bound (K*gamma+1) / ((K-alpha)*gamma+1), its deterioration factor
/// and the K-independent ceiling 1/(1-delta).
inline GainSummary coding_gain_bound(int users, int audience, const Rational& gamma) {
  if (audience < 1 || audience > users) throw std::domain_error("audience size must be in [1, K]");
  if (gamma < Rational(0) || gamma > Rational(audience, users))
    throw std::domain_error("cache fraction must be in [0, alpha/K]");
  const Rational deterioration = Rational(users - audience) * gamma + 1;
  GainSummary g;
  g.bound = (Rational(users) * gamma + 1) / deterioration;
  g.deterioration = deterioration;
  if (audience < users) g.scale_limit = Rational(users, users - audience);
  return g;
}

/// The per-redundancy coefficient of the averaged index-coding bound; equal
/// to the converse corner load.
inline Rational converse_coefficient(int users, int audience, int t) {
  return converse_load(users, audience, t);
}

/// The same coefficient evaluated as the subfile-counting sum
/// (1/binom(a,t)) * sum_{l=t}^{a-1} binom(l-1,t-1) (K-l) before the
/// hockey-stick collapse. The t = 0 case is the degenerate empty-tag count,
/// where the only l = 0 term fires once per rotation.
inline Rational converse_coefficient_sum_form(int users, int audience, int t) {
  detail::check_corner_range(users, audience, t);
  std::int64_t sum = 0;
  if (t == 0) {
    sum = users;
  } else {
    for (int l = t; l <= audience - 1; ++l) sum += binom(l - 1, t - 1) * (users - l);
  }
  return {sum, binom(audience, t)};
}

/// Coefficient normalized per library file, f(t)/N.
inline Rational converse_coefficient_normalized(const FdsStructure& s, int t) {
  return converse_load(s.users, s.audience_size, t) / Rational(s.library_size());
}

/// One corner of the memory-load trade-off.
struct TradeoffPoint {
  int t = 0;
  Rational memory;
  Rational load;

  friend bool operator==(const TradeoffPoint&, const TradeoffPoint&) = default;
};

/// The alpha+1 corner points of the converse curve.
inline std::vector<TradeoffPoint> converse_curve(const FdsStructure& s) {
  std::vector<TradeoffPoint> pts;
  pts.reserve(static_cast<std::size_t>(s.audience_size) + 1);
  for (int t = 0; t <= s.audience_size; ++t)
    pts.push_back({t, s.memory_at(t), converse_load(s.users, s.audience_size, t)});
  return pts;
}

/// Piecewise-linear interpolation of the converse curve at memory M (file
/// units); memory sharing between adjacent corners. M must lie in
/// [0, fds_size], beyond which the load is identically zero anyway.
inline Rational converse_load_at_memory(const FdsStructure& s, const Rational& memory) {
  if (memory < Rational(0) || memory > Rational(s.fds_size()))
    throw std::domain_error("memory outside [0, |F|]");
  const Rational redundancy = memory * s.users / s.library_size();  // K*M/N in [0, alpha]
  const std::int64_t lo = redundancy.floor();
  const Rational lambda = redundancy - lo;
  const Rational f_lo = converse_load(s.users, s.audience_size, static_cast<int>(lo));
  if (lambda.is_zero()) return f_lo;
  const Rational f_hi = converse_load(s.users, s.audience_size, static_cast<int>(lo) + 1);
  return (Rational(1) - lambda) * f_lo + lambda * f_hi;
}

/// Minimum of sum f(t) x_t over placement profiles x >= 0 with sum x_t = 1
/// and sum t x_t <= K*M/N. Solved in closed form: f is strictly decreasing
/// and convex, so the optimum is the linear interpolation of f at K*M/N --
/// exactly the converse curve value.
inline Rational placement_profile_lower_bound(const FdsStructure& s, const Rational& memory) {
  return converse_load_at_memory(s, memory);
}

}  // namespace selfishcc
