#include "qcb/rational.hpp"

#include <climits>
#include <stdexcept>

namespace qcb {

RationalFn::RationalFn(const LaurentPoly& num, const LaurentPoly& den) : num_(num), den_(den) {
  normalize();
}

void RationalFn::normalize() {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = LaurentPoly(1);
    return;
  }
  int s = den_.low();
  if (s) {
    den_ = den_.shifted(-s);
    num_ = num_.shifted(-s);
  }
  if (!den_.is_constant()) {
    LaurentPoly g = poly_gcd(num_, den_);
    if (!g.is_one()) {
      num_ = *exact_quotient(num_, g);
      den_ = *exact_quotient(den_, g);
    }
  }
  Integer c = gcd(num_.content(), den_.content());
  if (!c.is_one()) {
    num_ = num_.divexact(c);
    den_ = den_.divexact(c);
  }
  if (den_.lead().sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

const LaurentPoly& RationalFn::laurent() const {
  if (!is_laurent()) throw std::domain_error("not a Laurent polynomial: " + str());
  return num_;
}

RationalFn RationalFn::operator-() const { return RationalFn(-num_, den_, true); }

RationalFn& RationalFn::operator+=(const RationalFn& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  if (o.den_.is_one()) {
    num_ += o.num_ * den_;
    normalize();
    return *this;
  }
  if (den_.is_one()) {
    num_ = num_ * o.den_ + o.num_;
    den_ = o.den_;
    normalize();
    return *this;
  }
  LaurentPoly g = poly_gcd(den_, o.den_);
  LaurentPoly a = *exact_quotient(den_, g), b = *exact_quotient(o.den_, g);
  num_ = num_ * b + o.num_ * a;
  den_ = den_ * b;
  normalize();
  return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& o) { return *this += -o; }

RationalFn& RationalFn::operator*=(const RationalFn& o) {
  if (is_zero() || o.is_zero()) return *this = RationalFn();
  if (den_.is_one() && o.den_.is_one()) {
    num_ = num_ * o.num_;
    return *this;
  }
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RationalFn RationalFn::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero rational function");
  return RationalFn(den_, num_);
}

RationalFn& RationalFn::operator/=(const RationalFn& o) {
  if (o.den_.is_one() && o.num_.is_unit()) {
    const Integer& c = o.num_.lead();
    num_ = num_.shifted(-o.num_.low());
    if (c.sign() < 0) num_ = -num_;
    return *this;
  }
  return *this *= o.inverse();
}

RationalFn RationalFn::bar() const {
  if (den_.is_one()) return RationalFn(num_.bar(), den_, true);
  return RationalFn(num_.bar(), den_.bar());
}

RationalFn bar(const RationalFn& x) { return x.bar(); }

int RationalFn::degree() const {
  if (is_zero()) return INT_MIN;
  return num_.high() - den_.high();
}

std::string RationalFn::str() const {
  if (den_.is_one()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

RationalFn RationalFn::parse(const std::string& text) {
  auto slash = text.find(")/(");
  if (slash == std::string::npos) return RationalFn(LaurentPoly::parse(text));
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || open > slash)
    throw std::invalid_argument("cannot parse rational function: " + text);
  LaurentPoly n = LaurentPoly::parse(text.substr(open + 1, slash - open - 1));
  LaurentPoly d = LaurentPoly::parse(text.substr(slash + 3, close - slash - 3));
  return RationalFn(n, d);
}

std::optional<std::vector<Integer>> expansion_at_infinity(const RationalFn& x, int top, int bottom) {
  std::vector<Integer> out;
  if (top < bottom) return out;
  out.assign(static_cast<size_t>(top - bottom + 1), Integer());
  if (x.is_zero()) return out;
  const LaurentPoly& num = x.num();
  const LaurentPoly& den = x.den();
  int D = den.high();
  int deg = x.degree();
  int start = std::max(deg, top);
  // c[t] for t in [bottom, start], stored at index start - t.
  std::vector<Integer> c(static_cast<size_t>(start - bottom + 1));
  const Integer& lead = den.lead();
  for (int t = start; t >= bottom; --t) {
    if (t > deg) continue;
    Integer acc = num.coeff(t + D);
    for (int j = 0; j < D; ++j) {
      int u = t + D - j;
      if (u > start || u > deg) continue;
      const Integer& dj = den.coeff(j);
      if (!dj.is_zero()) acc -= dj * c[start - u];
    }
    if (!divides(lead, acc)) return std::nullopt;
    c[start - t] = divexact(acc, lead);
  }
  for (int t = top; t >= bottom; --t) out[top - t] = c[start - t];
  return out;
}

LaurentPoly bar_invariant_head(const RationalFn& x) {
  int deg = x.degree();
  if (x.is_zero() || deg < 0) return LaurentPoly();
  auto e = expansion_at_infinity(x, deg, 0);
  if (!e) throw std::domain_error("non-integral expansion at infinity: " + x.str());
  LaurentPoly out;
  for (int k = deg; k >= 0; --k) {
    const Integer& c = (*e)[deg - k];
    if (c.is_zero()) continue;
    out += LaurentPoly::monomial(c, k);
    if (k) out += LaurentPoly::monomial(c, -k);
  }
  return out;
}

}  // namespace qcb
