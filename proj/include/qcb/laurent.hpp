#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "qcb/integer.hpp"

namespace qcb {

// Element of Z[v, v^-1], stored densely from the lowest exponent.  The first
// and last stored coefficients are nonzero; zero has no coefficients.
class LaurentPoly {
 public:
  using Coeffs = boost::container::small_vector<Integer, 4>;

  LaurentPoly() = default;
  LaurentPoly(long long c) { if (c) c_.emplace_back(c); }  // NOLINT
  LaurentPoly(int c) : LaurentPoly(static_cast<long long>(c)) {}  // NOLINT
  LaurentPoly(const Integer& c) { if (!c.is_zero()) c_.push_back(c); }  // NOLINT

  static LaurentPoly monomial(const Integer& c, int e);
  static LaurentPoly v(int e = 1) { return monomial(1, e); }
  static LaurentPoly from_terms(const std::vector<std::pair<int, Integer>>& terms);
  static LaurentPoly parse(const std::string& text);

  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && low_ == 0 && c_[0].is_one(); }
  bool is_constant() const { return is_zero() || (c_.size() == 1 && low_ == 0); }
  bool is_monomial() const { return c_.size() == 1; }
  bool is_unit() const { return c_.size() == 1 && abs(c_[0]).is_one(); }

  // Only meaningful when nonzero.
  int low() const { return low_; }
  int high() const { return low_ + static_cast<int>(c_.size()) - 1; }
  const Integer& lead() const { return c_.back(); }
  const Integer& trail() const { return c_.front(); }
  Integer coeff(int e) const;
  int nterms() const;
  std::vector<std::pair<int, Integer>> terms() const;
  const Coeffs& dense() const { return c_; }

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  LaurentPoly& operator*=(const Integer& k);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.low_ == b.low_ && a.c_ == b.c_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  // Multiplication by v^k.
  LaurentPoly shifted(int k) const;
  LaurentPoly bar() const;
  bool is_bar_invariant() const { return *this == bar(); }

  Integer content() const;
  LaurentPoly divexact(const Integer& k) const;
  // Part with exponents in [lo, hi].
  LaurentPoly slice(int lo, int hi) const;

  std::string str() const;
  size_t hash() const;

 private:
  void trim();

  int low_ = 0;
  Coeffs c_;
};

// Exact quotient a / b in Z[v, v^-1], or nullopt when b does not divide a.
std::optional<LaurentPoly> exact_quotient(const LaurentPoly& a, const LaurentPoly& b);

// Greatest common divisor as an ordinary polynomial (low() == 0), primitive
// up to the integer gcd of the contents, with positive leading coefficient.
LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b);

inline std::string to_string(const LaurentPoly& p) { return p.str(); }

}  // namespace qcb
