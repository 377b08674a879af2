#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace selfishcc {

/// Exact rational arithmetic on a 64-bit numerator/denominator pair.
///
/// All loads, memory sizes and bound values in this library are exact
/// rationals; nothing in a correctness path ever goes through floating
/// point. Intermediate products are taken in 128 bits and any result that
/// no longer fits in 64 bits after reduction throws std::overflow_error.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // implicit: 3 + Rational(1,2) must work
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }

  [[nodiscard]] bool is_zero() const { return num_ == 0; }
  [[nodiscard]] bool is_integer() const { return den_ == 1; }

  /// Largest integer <= value. Safe for negative values.
  [[nodiscard]] std::int64_t floor() const {
    if (num_ >= 0) return num_ / den_;
    return -((-num_ + den_ - 1) / den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(w(a.num_) * b.den_ + w(b.num_) * a.den_, w(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(w(a.num_) * b.den_ - w(b.num_) * a.den_, w(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(w(a.num_) * b.num_, w(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(w(a.num_) * b.den_, w(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;  // canonical form makes this exact
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const w lhs = w(a.num_) * b.den_;
    const w rhs = w(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "p/q", or just "p" for integers.
  [[nodiscard]] std::string to_string() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }

  /// Exact decimal rendering with the given number of significant digits,
  /// produced by long division (never via double). Rounds half away from
  /// zero on the digit after the last kept one; trailing fractional zeros
  /// are trimmed so terminating values print exactly ("3/2" -> "1.5").
  [[nodiscard]] std::string to_decimal(int significant_digits = 12) const;

  /// Accepts "p", "p/q" and plain decimal literals such as "0.05".
  static Rational parse(std::string_view text);

private:
  using w = __int128;

  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = make(num, den);
  }

  static Rational make(w num, w den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const w g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr w kMin = INT64_MIN;
    constexpr w kMax = INT64_MAX;
    if (num < kMin || num > kMax || den > kMax)
      throw std::overflow_error("rational overflow: value does not fit in 64-bit num/den");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  static w gcd128(w a, w b) {
    while (b != 0) {
      const w t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  std::int64_t num_{0};
  std::int64_t den_{1};
};

inline std::string Rational::to_decimal(int significant_digits) const {
  if (significant_digits < 1) throw std::domain_error("need at least one significant digit");
  if (num_ == 0) return "0";

  using u128 = unsigned __int128;
  const bool negative = num_ < 0;
  u128 p = negative ? u128(-(w(num_))) : u128(num_);
  const u128 q = u128(den_);

  std::string int_part;
  u128 whole = p / q;
  u128 rem = p % q;
  if (whole == 0) {
    int_part = "0";
  } else {
    while (whole > 0) {
      int_part.insert(int_part.begin(), char('0' + int(whole % 10)));
      whole /= 10;
    }
  }

  int significant = 0;
  if (int_part != "0") significant = static_cast<int>(int_part.size());

  std::string frac_part;
  bool saw_nonzero = significant > 0;
  int round_up = 0;
  while (rem != 0) {
    if (significant >= significant_digits) {
      // one digit past the last kept one decides the rounding direction
      rem *= 10;
      round_up = int(rem / q) >= 5 ? 1 : 0;
      break;
    }
    rem *= 10;
    const int digit = int(rem / q);
    rem %= q;
    frac_part += char('0' + digit);
    if (digit != 0) saw_nonzero = true;
    if (saw_nonzero) ++significant;
  }

  if (round_up) {
    std::string all = int_part + frac_part;
    int i = static_cast<int>(all.size()) - 1;
    for (; i >= 0; --i) {
      if (all[i] == '9') {
        all[i] = '0';
      } else {
        ++all[i];
        break;
      }
    }
    if (i < 0) all.insert(all.begin(), '1');
    const auto frac_len = frac_part.size();
    frac_part = all.substr(all.size() - frac_len);
    int_part = all.substr(0, all.size() - frac_len);
  }

  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();

  std::string out;
  if (negative) out += '-';
  out += int_part;
  if (!frac_part.empty()) {
    out += '.';
    out += frac_part;
  }
  return out;
}

inline Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const std::string n(text.substr(0, slash));
    const std::string d(text.substr(slash + 1));
    if (n.empty() || d.empty()) throw std::invalid_argument("malformed rational literal");
    return Rational(std::stoll(n), std::stoll(d));
  }
  const auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    const std::string whole(text.substr(0, dot));
    const std::string frac(text.substr(dot + 1));
    if (frac.empty()) throw std::invalid_argument("malformed decimal literal");
    const bool negative = !whole.empty() && whole[0] == '-';
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) {
      if (frac[i] < '0' || frac[i] > '9') throw std::invalid_argument("malformed decimal literal");
      if (scale > INT64_MAX / 10) throw std::overflow_error("decimal literal too long");
      scale *= 10;
    }
    const std::int64_t w_part = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    const std::int64_t f_part = std::stoll(frac);
    Rational r = Rational(w_part < 0 ? -w_part : w_part) + Rational(f_part, scale);
    return negative || w_part < 0 ? -r : r;
  }
  return Rational(std::stoll(std::string(text)));
}

}  // namespace selfishcc
