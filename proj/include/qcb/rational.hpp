#pragma once

#include <string>

#include "qcb/laurent.hpp"

namespace qcb {

// Element of Q(v) as num/den.  Normal form: den is an ordinary polynomial
// with den(0) != 0 and positive leading coefficient, gcd(num, den) = 1 in
// Q[v], and the integer contents of num and den are coprime.
class RationalFn {
 public:
  RationalFn() = default;
  RationalFn(long long c) : num_(c), den_(1) {}  // NOLINT
  RationalFn(int c) : num_(c), den_(1) {}        // NOLINT
  RationalFn(const Integer& c) : num_(c), den_(1) {}    // NOLINT
  RationalFn(const LaurentPoly& p) : num_(p), den_(1) {}  // NOLINT
  RationalFn(const LaurentPoly& num, const LaurentPoly& den);

  static RationalFn parse(const std::string& text);

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_laurent() const { return den_.is_one(); }
  // The Laurent polynomial value; throws unless is_laurent().
  const LaurentPoly& laurent() const;

  RationalFn operator-() const;
  RationalFn& operator+=(const RationalFn& o);
  RationalFn& operator-=(const RationalFn& o);
  RationalFn& operator*=(const RationalFn& o);
  RationalFn& operator/=(const RationalFn& o);
  friend RationalFn operator+(RationalFn a, const RationalFn& b) { return a += b; }
  friend RationalFn operator-(RationalFn a, const RationalFn& b) { return a -= b; }
  friend RationalFn operator*(RationalFn a, const RationalFn& b) { return a *= b; }
  friend RationalFn operator/(RationalFn a, const RationalFn& b) { return a /= b; }
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFn& a, const RationalFn& b) { return !(a == b); }

  RationalFn inverse() const;
  RationalFn bar() const;
  RationalFn shifted(int k) const { return RationalFn(num_.shifted(k), den_, true); }

  // Order of the expansion at v = infinity: deg num - deg den (zero: INT_MIN).
  int degree() const;

  std::string str() const;
  size_t hash() const { return num_.hash() * 31u ^ den_.hash(); }

 private:
  RationalFn(LaurentPoly num, LaurentPoly den, bool) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  LaurentPoly num_;
  LaurentPoly den_ = LaurentPoly(1);
};

RationalFn bar(const RationalFn& x);
inline LaurentPoly bar(const LaurentPoly& x) { return x.bar(); }
inline std::string to_string(const RationalFn& x) { return x.str(); }

// Coefficients of the expansion of x in powers of v^-1, from exponent `top`
// down to exponent `bottom`, or nullopt if some coefficient is not an
// integer.  Entry k holds the coefficient of v^(top - k).
std::optional<std::vector<Integer>> expansion_at_infinity(const RationalFn& x, int top, int bottom);

// The unique bar-invariant c with x - c of strictly negative order at
// infinity (requires integral expansion); throws otherwise.
LaurentPoly bar_invariant_head(const RationalFn& x);

}  // namespace qcb
