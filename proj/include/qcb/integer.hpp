#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <type_traits>

#include <gmpxx.h>

namespace qcb {

// Machine integer that spills into GMP on overflow.  Values that fit in
// int64 are always stored small, so equality can compare the small field.
class Integer {
 public:
  Integer() = default;
  template <class T, class = std::enable_if_t<std::is_integral_v<T>>>
  Integer(T v) : small_(static_cast<int64_t>(v)) {}  // NOLINT: implicit by design
  explicit Integer(const mpz_class& z) { assign(z); }

  Integer(const Integer& o) : small_(o.small_) {
    if (o.big_) big_ = std::make_unique<mpz_class>(*o.big_);
  }
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      small_ = o.small_;
      big_ = o.big_ ? std::make_unique<mpz_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;

  static Integer parse(const std::string& s);

  bool is_small() const { return !big_; }
  int64_t small() const { return small_; }
  mpz_class to_mpz() const { return big_ ? *big_ : mpz_class(static_cast<long>(small_)); }

  bool is_zero() const { return !big_ && small_ == 0; }
  bool is_one() const { return !big_ && small_ == 1; }
  int sign() const {
    if (big_) return sgn(*big_);
    return (small_ > 0) - (small_ < 0);
  }

  Integer operator-() const;
  Integer& operator+=(const Integer& o);
  Integer& operator-=(const Integer& o);
  Integer& operator*=(const Integer& o);

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }

  friend bool operator==(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;
  }
  friend bool operator!=(const Integer& a, const Integer& b) { return !(a == b); }
  friend bool operator<(const Integer& a, const Integer& b);
  friend bool operator>(const Integer& a, const Integer& b) { return b < a; }
  friend bool operator<=(const Integer& a, const Integer& b) { return !(b < a); }
  friend bool operator>=(const Integer& a, const Integer& b) { return !(a < b); }

  // Exact quotient; the caller guarantees b divides a.
  friend Integer divexact(const Integer& a, const Integer& b);
  // Floor division and remainder (remainder has the sign of b).
  friend void divmod(const Integer& a, const Integer& b, Integer& q, Integer& r);
  friend bool divides(const Integer& b, const Integer& a);
  friend Integer gcd(const Integer& a, const Integer& b);
  friend Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

  // Residue in [0, p).
  uint64_t mod(uint64_t p) const;
  std::string str() const;
  size_t hash() const;

 private:
  void assign(const mpz_class& z);

  int64_t small_ = 0;
  std::unique_ptr<mpz_class> big_;
};

inline Integer Integer::operator-() const {
  if (!big_ && small_ != INT64_MIN) return Integer(static_cast<long long>(-small_));
  return Integer(mpz_class(-to_mpz()));
}

inline Integer& Integer::operator+=(const Integer& o) {
  long long r;
  if (!big_ && !o.big_ && !__builtin_add_overflow(small_, o.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpz() + o.to_mpz());
  return *this;
}

inline Integer& Integer::operator-=(const Integer& o) {
  long long r;
  if (!big_ && !o.big_ && !__builtin_sub_overflow(small_, o.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpz() - o.to_mpz());
  return *this;
}

inline Integer& Integer::operator*=(const Integer& o) {
  long long r;
  if (!big_ && !o.big_ && !__builtin_mul_overflow(small_, o.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpz() * o.to_mpz());
  return *this;
}

Integer divexact(const Integer& a, const Integer& b);
void divmod(const Integer& a, const Integer& b, Integer& q, Integer& r);
bool divides(const Integer& b, const Integer& a);
Integer gcd(const Integer& a, const Integer& b);

inline std::string to_string(const Integer& a) { return a.str(); }

}  // namespace qcb
