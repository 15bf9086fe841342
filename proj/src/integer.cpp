#include "qcb/integer.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace qcb {

void Integer::assign(const mpz_class& z) {
  if (z.fits_slong_p()) {
    small_ = z.get_si();
    big_.reset();
  } else {
    small_ = 0;
    if (big_)
      *big_ = z;
    else
      big_ = std::make_unique<mpz_class>(z);
  }
}

Integer Integer::parse(const std::string& s) {
  mpz_class z;
  if (s.empty() || z.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0)
    throw std::invalid_argument("bad integer literal: " + s);
  return Integer(z);
}

bool operator<(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ < b.small_;
  return cmp(a.to_mpz(), b.to_mpz()) < 0;
}

Integer divexact(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_ && !(a.small_ == INT64_MIN && b.small_ == -1))
    return Integer(static_cast<long long>(a.small_ / b.small_));
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

void divmod(const Integer& a, const Integer& b, Integer& q, Integer& r) {
  mpz_class qq, rr;
  mpz_fdiv_qr(qq.get_mpz_t(), rr.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  q = Integer(qq);
  r = Integer(rr);
}

bool divides(const Integer& b, const Integer& a) {
  if (b.is_zero()) return a.is_zero();
  if (!a.big_ && !b.big_) {
    if (b.small_ == -1) return true;
    return a.small_ % b.small_ == 0;
  }
  return mpz_divisible_p(a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t()) != 0;
}

Integer gcd(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_ && a.small_ != INT64_MIN && b.small_ != INT64_MIN)
    return Integer(static_cast<long long>(std::gcd(a.small_, b.small_)));
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(g);
}

uint64_t Integer::mod(uint64_t p) const {
  if (!big_) {
    __int128 r = static_cast<__int128>(small_) % static_cast<__int128>(p);
    if (r < 0) r += p;
    return static_cast<uint64_t>(r);
  }
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), big_->get_mpz_t(), mpz_class(static_cast<unsigned long>(p)).get_mpz_t());
  return r.get_ui();
}

std::string Integer::str() const { return big_ ? big_->get_str() : std::to_string(small_); }

size_t Integer::hash() const {
  if (!big_) return std::hash<int64_t>{}(small_);
  return std::hash<std::string>{}(big_->get_str());
}

}  // namespace qcb
