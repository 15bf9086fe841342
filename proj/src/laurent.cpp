#include "qcb/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace qcb {

void LaurentPoly::trim() {
  size_t first = 0;
  while (first < c_.size() && c_[first].is_zero()) ++first;
  if (first == c_.size()) {
    c_.clear();
    low_ = 0;
    return;
  }
  while (c_.back().is_zero()) c_.pop_back();
  if (first) {
    c_.erase(c_.begin(), c_.begin() + first);
    low_ += static_cast<int>(first);
  }
}

LaurentPoly LaurentPoly::monomial(const Integer& c, int e) {
  LaurentPoly p;
  if (!c.is_zero()) {
    p.c_.push_back(c);
    p.low_ = e;
  }
  return p;
}

LaurentPoly LaurentPoly::from_terms(const std::vector<std::pair<int, Integer>>& terms) {
  LaurentPoly p;
  for (const auto& [e, c] : terms) p += monomial(c, e);
  return p;
}

Integer LaurentPoly::coeff(int e) const {
  if (c_.empty() || e < low_ || e > high()) return 0;
  return c_[e - low_];
}

int LaurentPoly::nterms() const {
  return static_cast<int>(std::count_if(c_.begin(), c_.end(), [](const Integer& x) { return !x.is_zero(); }));
}

std::vector<std::pair<int, Integer>> LaurentPoly::terms() const {
  std::vector<std::pair<int, Integer>> out;
  for (size_t k = 0; k < c_.size(); ++k)
    if (!c_[k].is_zero()) out.emplace_back(low_ + static_cast<int>(k), c_[k]);
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(*this);
  for (auto& x : r.c_) x = -x;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  int lo = std::min(low_, o.low_), hi = std::max(high(), o.high());
  if (lo < low_) {
    c_.insert(c_.begin(), static_cast<size_t>(low_ - lo), Integer());
    low_ = lo;
  }
  if (hi > high()) c_.resize(static_cast<size_t>(hi - low_ + 1));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[o.low_ - low_ + k] += o.c_[k];
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = -o;
  int lo = std::min(low_, o.low_), hi = std::max(high(), o.high());
  if (lo < low_) {
    c_.insert(c_.begin(), static_cast<size_t>(low_ - lo), Integer());
    low_ = lo;
  }
  if (hi > high()) c_.resize(static_cast<size_t>(hi - low_ + 1));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[o.low_ - low_ + k] -= o.c_[k];
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Integer& k) {
  if (k.is_zero()) {
    c_.clear();
    low_ = 0;
    return *this;
  }
  for (auto& x : c_) x *= k;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  size_t n = a.c_.size(), m = b.c_.size();
  r.low_ = a.low_ + b.low_;
  r.c_.resize(n + m - 1);

  bool small = std::all_of(a.c_.begin(), a.c_.end(), [](const Integer& x) {
    return x.is_small() && x.small() < (1LL << 40) && x.small() > -(1LL << 40);
  }) && std::all_of(b.c_.begin(), b.c_.end(), [](const Integer& x) {
    return x.is_small() && x.small() < (1LL << 40) && x.small() > -(1LL << 40);
  });
  if (small) {
    boost::container::small_vector<__int128, 8> acc(n + m - 1, 0);
    for (size_t i = 0; i < n; ++i) {
      __int128 x = a.c_[i].small();
      if (!x) continue;
      for (size_t j = 0; j < m; ++j) acc[i + j] += x * b.c_[j].small();
    }
    for (size_t k = 0; k < acc.size(); ++k) {
      if (acc[k] >= INT64_MIN && acc[k] <= INT64_MAX) {
        r.c_[k] = Integer(static_cast<long long>(acc[k]));
      } else {
        __int128 v = acc[k];
        bool neg = v < 0;
        unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
        mpz_class z(static_cast<unsigned long>(u >> 64));
        z <<= 64;
        z += static_cast<unsigned long>(u & ~0ULL);
        if (neg) z = -z;
        r.c_[k] = Integer(z);
      }
    }
  } else {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < m; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  r.trim();
  return r;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r(*this);
  if (!r.is_zero()) r.low_ += k;
  return r;
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly r;
  if (is_zero()) return r;
  r.c_.assign(c_.rbegin(), c_.rend());
  r.low_ = -high();
  return r;
}

Integer LaurentPoly::content() const {
  Integer g;
  for (const auto& x : c_) {
    g = gcd(g, x);
    if (g.is_one()) break;
  }
  return g;
}

LaurentPoly LaurentPoly::divexact(const Integer& k) const {
  LaurentPoly r(*this);
  for (auto& x : r.c_) x = qcb::divexact(x, k);
  return r;
}

LaurentPoly LaurentPoly::slice(int lo, int hi) const {
  LaurentPoly r;
  if (is_zero()) return r;
  lo = std::max(lo, low_);
  hi = std::min(hi, high());
  if (lo > hi) return r;
  r.low_ = lo;
  r.c_.assign(c_.begin() + (lo - low_), c_.begin() + (hi - low_ + 1));
  r.trim();
  return r;
}

std::string LaurentPoly::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (int e = high(); e >= low_; --e) {
    const Integer& c = c_[e - low_];
    if (c.is_zero()) continue;
    Integer a = abs(c);
    if (out.empty())
      out += c.sign() < 0 ? "-" : "";
    else
      out += c.sign() < 0 ? " - " : " + ";
    if (e == 0) {
      out += a.str();
      continue;
    }
    if (!a.is_one()) out += a.str();
    out += "v";
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

size_t LaurentPoly::hash() const {
  size_t h = std::hash<int>{}(low_);
  for (const auto& x : c_) h = h * 1000003u ^ x.hash();
  return h;
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
  std::string s;
  bool gap = false;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      gap = true;
      continue;
    }
    if (gap && !s.empty() && std::isalnum(static_cast<unsigned char>(ch)) &&
        std::isalnum(static_cast<unsigned char>(s.back())))
      throw std::invalid_argument("cannot parse Laurent polynomial: " + text);
    gap = false;
    s += ch;
  }
  if (s.empty()) throw std::invalid_argument("empty Laurent polynomial");
  size_t pos = 0;
  auto fail = [&]() { throw std::invalid_argument("cannot parse Laurent polynomial: " + text); };
  auto read_int = [&](std::string& digits) {
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) digits += s[pos++];
  };
  LaurentPoly out;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      fail();
    }
    first = false;
    std::string digits;
    read_int(digits);
    if (pos < s.size() && s[pos] == '*') {
      if (digits.empty()) fail();
      ++pos;
    }
    int e = 0;
    bool has_v = false;
    if (pos < s.size() && s[pos] == 'v') {
      has_v = true;
      ++pos;
      e = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        std::string ed;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ed += s[pos++];
        read_int(ed);
        if (ed.empty() || ed == "-" || ed == "+") fail();
        e = std::stoi(ed);
      }
    }
    if (digits.empty() && !has_v) fail();
    Integer c = digits.empty() ? Integer(1) : Integer::parse(digits);
    if (sign < 0) c = -c;
    out += monomial(c, e);
  }
  return out;
}

namespace {

// Polynomial view: coefficients from degree 0 upward, after removing v^low.
std::vector<Integer> as_poly(const LaurentPoly& p) {
  return std::vector<Integer>(p.dense().begin(), p.dense().end());
}

LaurentPoly from_poly(const std::vector<Integer>& c, int shift) {
  std::vector<std::pair<int, Integer>> t;
  for (size_t k = 0; k < c.size(); ++k)
    if (!c[k].is_zero()) t.emplace_back(static_cast<int>(k) + shift, c[k]);
  return LaurentPoly::from_terms(t);
}

void strip(std::vector<Integer>& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

// Pseudo-remainder of a by b (both nonzero, as coefficient vectors).
std::vector<Integer> prem(std::vector<Integer> a, const std::vector<Integer>& b) {
  const Integer& lb = b.back();
  size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    Integer la = a.back();
    size_t shift = a.size() - 1 - db;
    for (auto& x : a) x *= lb;
    for (size_t k = 0; k <= db; ++k) a[k + shift] -= la * b[k];
    strip(a);
  }
  return a;
}

std::vector<Integer> primitive(std::vector<Integer> a) {
  Integer g;
  for (const auto& x : a) g = gcd(g, x);
  if (!g.is_zero() && !g.is_one())
    for (auto& x : a) x = divexact(x, g);
  return a;
}

}  // namespace

std::optional<LaurentPoly> exact_quotient(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero Laurent polynomial");
  if (a.is_zero()) return LaurentPoly();
  if (b.is_monomial()) {
    const Integer& c = b.lead();
    for (const auto& x : a.dense())
      if (!divides(c, x)) return std::nullopt;
    return a.divexact(c).shifted(-b.low());
  }
  std::vector<Integer> r = as_poly(a);
  const auto bb = as_poly(b);
  if (r.size() < bb.size()) return std::nullopt;
  std::vector<Integer> q(r.size() - bb.size() + 1);
  for (size_t k = q.size(); k-- > 0;) {
    const Integer& top = r[k + bb.size() - 1];
    if (top.is_zero()) continue;
    if (!divides(bb.back(), top)) return std::nullopt;
    Integer t = divexact(top, bb.back());
    for (size_t j = 0; j < bb.size(); ++j) r[k + j] -= t * bb[j];
    q[k] = t;
  }
  for (const auto& x : r)
    if (!x.is_zero()) return std::nullopt;
  return from_poly(q, a.low() - b.low());
}

LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() && b.is_zero()) return LaurentPoly();
  if (a.is_zero() || b.is_zero()) {
    const LaurentPoly& x = a.is_zero() ? b : a;
    LaurentPoly g = x.shifted(-x.low());
    return g.lead().sign() < 0 ? -g : g;
  }
  Integer cg = gcd(a.content(), b.content());
  std::vector<Integer> p = primitive(as_poly(a)), q = primitive(as_poly(b));
  if (p.size() < q.size()) std::swap(p, q);
  while (!q.empty()) {
    auto r = prem(p, q);
    p = std::move(q);
    q = primitive(std::move(r));
  }
  p = primitive(std::move(p));
  if (p.back().sign() < 0)
    for (auto& x : p) x = -x;
  for (auto& x : p) x *= cg;
  return from_poly(p, 0);
}

}  // namespace qcb
