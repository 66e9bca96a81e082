#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "msk/errors.hpp"

namespace msk {

/// Exact nonnegative rational scalar. All masses, integrals and bound
/// constants in the library are values of this type; there is no floating
/// point anywhere. Always held in lowest terms with positive denominator.
///
/// The type is a cone, not a field: subtraction is deliberately absent.
class Rational {
public:
  Rational() = default; // zero

  Rational(unsigned long long n) : v_(n) {}

  Rational(int n) : v_(check_nonneg(n)) {}

  Rational(unsigned long long num, unsigned long long den) {
    if (den == 0) throw InputError("rational with zero denominator");
    v_ = Int(num);
    v_ /= Int(den);
  }

  /// Strict wire-format parser. Grammar: (0|[1-9][0-9]*)(/([1-9][0-9]*))?
  /// Rejects signs, whitespace, leading zeros, floats. "2/4" normalizes to 1/2.
  static std::optional<Rational> try_parse(std::string_view s) {
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    if (!valid_digits(num)) return std::nullopt;
    Rational r;
    if (slash == std::string_view::npos) {
      r.v_ = Int(std::string(num));
      return r;
    }
    std::string_view den = s.substr(slash + 1);
    if (!valid_digits(den) || den == "0") return std::nullopt;
    r.v_ = Int(std::string(num));
    r.v_ /= Int(std::string(den));
    return r;
  }

  static Rational parse(std::string_view s) {
    auto r = try_parse(s);
    if (!r) throw InputError("malformed rational '" + std::string(s) + "'");
    return *r;
  }

  /// Canonical form: "n" when the denominator is 1, else "n/d".
  std::string str() const {
    std::string n = numerator(v_).str();
    if (denominator(v_) == 1) return n;
    return n + "/" + denominator(v_).str();
  }

  bool is_zero() const { return v_.is_zero(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw InputError("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

private:
  using Int = boost::multiprecision::cpp_int;
  using Rep = boost::multiprecision::cpp_rational;

  static unsigned long long check_nonneg(int n) {
    if (n < 0) throw InputError("negative rational");
    return static_cast<unsigned long long>(n);
  }

  static bool valid_digits(std::string_view d) {
    if (d.empty()) return false;
    if (d.size() > 1 && d[0] == '0') return false;
    for (char c : d)
      if (c < '0' || c > '9') return false;
    return true;
  }

  Rep v_;
};

inline const Rational& max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

} // namespace msk
