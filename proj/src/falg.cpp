#include "qcb/falg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "qcb/coeff.hpp"

namespace qcb {

Deg DividedWord::weight(int rank) const {
  Deg d(static_cast<size_t>(rank), 0);
  for (auto [i, a] : blocks) d[i] += a;
  return d;
}

Word DividedWord::letters() const {
  Word w;
  for (auto [i, a] : blocks) w.append(static_cast<size_t>(a), static_cast<char>(i));
  return w;
}

LaurentPoly DividedWord::factorial() const {
  LaurentPoly f(1);
  for (auto [i, a] : blocks) f *= quantum_factorial(a);
  return f;
}

std::string DividedWord::str(const CartanDatum& c) const {
  if (blocks.empty()) return "1";
  std::string s;
  for (auto [i, a] : blocks) {
    if (!s.empty()) s += " ";
    s += "t" + c.gens[i];
    if (a != 1) s += "^(" + std::to_string(a) + ")";
  }
  return s;
}

std::vector<DividedWord> divided_words(const Deg& nu) {
  std::vector<DividedWord> out;
  DividedWord cur;
  Deg left = nu;
  std::function<void(int)> rec = [&](int last) {
    if (std::all_of(left.begin(), left.end(), [](int x) { return x == 0; })) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < static_cast<int>(left.size()); ++i) {
      if (i == last) continue;
      for (int a = 1; a <= left[i]; ++a) {
        cur.blocks.emplace_back(i, a);
        left[i] -= a;
        rec(i);
        left[i] += a;
        cur.blocks.pop_back();
      }
    }
  };
  rec(-1);
  std::stable_sort(out.begin(), out.end(), [](const DividedWord& a, const DividedWord& b) {
    if (a.nblocks() != b.nblocks()) return a.nblocks() < b.nblocks();
    return a.blocks < b.blocks;
  });
  return out;
}

Deg word_weight(const Word& w, int rank) {
  Deg d(static_cast<size_t>(rank), 0);
  for (char c : w) ++d[static_cast<size_t>(c)];
  return d;
}

bool FVector::is_zero() const {
  for (int k = 0; k < s.size(); ++k)
    if (!s(k).is_zero()) return false;
  return true;
}

FVector& FVector::operator+=(const FVector& o) {
  if (nu != o.nu) throw std::invalid_argument("adding elements of different weights");
  s += o.s;
  return *this;
}

FVector& FVector::operator-=(const FVector& o) {
  if (nu != o.nu) throw std::invalid_argument("subtracting elements of different weights");
  s -= o.s;
  return *this;
}

FVector operator*(const RationalFn& c, const FVector& x) {
  FVector y = x;
  if (c.is_one()) return y;
  for (int k = 0; k < y.s.size(); ++k)
    if (!y.s(k).is_zero()) y.s(k) *= c;
  return y;
}

size_t FVector::hash() const {
  size_t h = 0;
  for (int x : nu) h = h * 1000003u + static_cast<size_t>(x);
  for (int k = 0; k < s.size(); ++k) h = h * 31u ^ s(k).hash();
  return h;
}

namespace {

std::vector<Word> words_of(const Deg& nu) {
  std::vector<Word> out;
  Word cur;
  Deg left = nu;
  int total = trace(nu);
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == total) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < static_cast<int>(left.size()); ++i) {
      if (!left[i]) continue;
      --left[i];
      cur.push_back(static_cast<char>(i));
      rec();
      cur.pop_back();
      ++left[i];
    }
  };
  rec();
  return out;
}

}  // namespace

FAlgebra::FAlgebra(std::shared_ptr<const RootDatum> d, int degree_bound) : datum_(std::move(d)), bound_(degree_bound) {
  std::vector<int> all(static_cast<size_t>(rank()));
  std::iota(all.begin(), all.end(), 0);
  finite_ = is_spherical(all, datum_->cartan);
  point_ = Evaluator(evaluation_point(0)).point();
  if (finite_) {
    std::set<Deg> seen;
    std::vector<Deg> todo;
    for (int i = 0; i < rank(); ++i) todo.push_back(unit_deg(rank(), i));
    while (!todo.empty()) {
      Deg b = todo.back();
      todo.pop_back();
      if (!seen.insert(b).second) continue;
      for (int i = 0; i < rank(); ++i) {
        Deg r = reflect(datum_->cartan, i, b);
        if (nonneg(r) && !seen.count(r)) todo.push_back(r);
      }
    }
    positive_roots_.assign(seen.begin(), seen.end());
  }
}

std::shared_ptr<FAlgebra> make_falgebra(const RootDatum& d, int degree_bound) {
  return std::make_shared<FAlgebra>(std::make_shared<const RootDatum>(d), degree_bound);
}

void FAlgebra::check_bound(const Deg& nu) const {
  if (static_cast<int>(nu.size()) != rank() || !nonneg(nu)) throw std::invalid_argument("bad weight " + deg_str(nu));
  if (trace(nu) > bound_)
    throw DegreeBoundExceeded("weight " + deg_str(nu) + " exceeds the degree bound " + std::to_string(bound_));
}

int FAlgebra::kostant_count(const Deg& nu) const {
  std::map<std::pair<size_t, Deg>, int> memo;
  std::function<int(size_t, const Deg&)> rec = [&](size_t r, const Deg& left) -> int {
    if (std::all_of(left.begin(), left.end(), [](int x) { return x == 0; })) return 1;
    if (r == positive_roots_.size()) return 0;
    auto key = std::make_pair(r, left);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int total = 0;
    Deg cur = left;
    while (nonneg(cur)) {
      total += rec(r + 1, cur);
      cur = cur - positive_roots_[r];
    }
    return memo[key] = total;
  };
  return rec(0, nu);
}

std::unique_ptr<WeightSpace> FAlgebra::build(const Deg& nu) const {
  auto ws = std::make_unique<WeightSpace>();
  ws->nu = nu;
  ws->trace = trace(nu);
  ws->words = words_of(nu);
  const int n = ws->nwords();
  for (int k = 0; k < n; ++k) ws->index.emplace(ws->words[k], k);
  ws->rev.resize(static_cast<size_t>(n));
  ws->bar_exp.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Word& u = ws->words[k];
    ws->rev[k] = ws->index.at(Word(u.rbegin(), u.rend()));
    int e = 0;
    Deg seen(static_cast<size_t>(rank()), 0);
    for (char c : u) {
      for (int l = 0; l < rank(); ++l) e += seen[l] * dot(l, c);
      ++seen[static_cast<size_t>(c)];
    }
    ws->bar_exp[k] = e;
  }
  return ws;
}

const WeightSpace& FAlgebra::word_list(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  check_bound(nu);
  auto it = spaces_.find(nu);
  if (it == spaces_.end()) it = spaces_.emplace(nu, build(nu)).first;
  return *it->second;
}

const WeightSpace& FAlgebra::space(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  WeightSpace& ws = const_cast<WeightSpace&>(word_list(nu));
  if (!ws.pivots.empty()) return ws;

  const int n = ws.nwords();
  if (ws.trace == 0) {
    ws.pivots = {0};
    ws.gram = RatMat::Constant(1, 1, RationalFn(1));
    ws.gram_inv = ws.gram;
    return ws;
  }
  ModMat m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = modp_word(ws.words[r]);
    for (int c = 0; c < n; ++c) m(r, c) = row[c];
  }
  std::vector<int> piv = independent_rows(m);
  if (finite_) {
    int expect = kostant_count(nu);
    if (expect != static_cast<int>(piv.size()))
      throw std::logic_error("dim f" + deg_str(nu) + " = " + std::to_string(piv.size()) +
                             " disagrees with the partition count " + std::to_string(expect));
  }
  const int d = static_cast<int>(piv.size());
  RatMat g(d, d);
  for (int a = 0; a < d; ++a) {
    const RatVec& row = exact_word(ws.words[piv[a]]);
    for (int b = 0; b < d; ++b) g(a, b) = row(piv[b]);
  }
  auto inv = inverse(g);
  if (!inv) throw std::logic_error("pivot gram block is singular at " + deg_str(nu));
  ws.gram = g;
  ws.gram_inv = *inv;
  ws.pivots = piv;
  return ws;
}


const std::vector<ModP>& FAlgebra::modp_word(const Word& w) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = modp_words_.find(w); it != modp_words_.end()) return it->second;
  std::vector<ModP> out;
  if (w.empty()) {
    out = {ModP(1)};
  } else {
    const int i = w[0];
    const std::vector<ModP> tail = modp_word(w.substr(1));
    Deg nu = word_weight(w, rank());
    Deg below = word_weight(w.substr(1), rank());
    const WeightSpace& ws = word_list(nu);
    const WeightSpace& wb = word_list(below);
    out.assign(static_cast<size_t>(ws.nwords()), ModP());
    ModP rinv = point_.inverse();
    for (int k = 0; k < ws.nwords(); ++k) {
      const Word& u = ws.words[k];
      ModP acc;
      int e = 0;
      for (size_t p = 0; p < u.size(); ++p) {
        if (u[p] == i) {
          Word rest = u;
          rest.erase(p, 1);
          ModP t = tail[wb.index.at(rest)];
          acc += t * (e >= 0 ? point_.pow(static_cast<uint64_t>(e)) : rinv.pow(static_cast<uint64_t>(-e)));
        }
        e += dot(u[p], i);
      }
      out[k] = acc;
    }
  }
  return modp_words_.emplace(w, std::move(out)).first->second;
}

const RatVec& FAlgebra::exact_word(const Word& w) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = exact_words_.find(w); it != exact_words_.end()) return it->second;
  RatVec out;
  if (w.empty()) {
    out = RatVec::Constant(1, RationalFn(1));
  } else {
    FVector tail{word_weight(w.substr(1), rank()), exact_word(w.substr(1))};
    out = theta_left(w[0], tail).s;
  }
  return exact_words_.emplace(w, std::move(out)).first->second;
}

FVector FAlgebra::zero(const Deg& nu) const {
  const WeightSpace& ws = word_list(nu);
  return FVector{nu, RatVec::Zero(ws.nwords())};
}

FVector FAlgebra::one() const { return FVector{Deg(static_cast<size_t>(rank()), 0), RatVec::Constant(1, RationalFn(1))}; }

FVector FAlgebra::word(const Word& w) const {
  Deg nu = word_weight(w, rank());
  check_bound(nu);
  return FVector{nu, exact_word(w)};
}

FVector FAlgebra::divided(const DividedWord& w) const {
  FVector x = word(w.letters());
  LaurentPoly f = w.factorial();
  if (f.is_one()) return x;
  for (int k = 0; k < x.s.size(); ++k)
    if (!x.s(k).is_zero()) x.s(k) = RationalFn(*exact_quotient(x.s(k).laurent(), f));
  return x;
}

FVector FAlgebra::from_coords(const Deg& nu, const RatVec& c) const {
  const WeightSpace& ws = space(nu);
  FVector x = zero(nu);
  for (int p = 0; p < ws.dim(); ++p)
    if (!c(p).is_zero()) x.s += exact_word(ws.words[ws.pivots[p]]) * c(p);
  return x;
}

RatVec FAlgebra::pivot_values(const FVector& x) const {
  const WeightSpace& ws = space(x.nu);
  RatVec out(ws.dim());
  for (int p = 0; p < ws.dim(); ++p) out(p) = x.s(ws.pivots[p]);
  return out;
}

RatVec FAlgebra::coords(const FVector& x) const { return space(x.nu).gram_inv * pivot_values(x); }

FVector FAlgebra::theta_left(int i, const FVector& x) const {
  Deg nu = x.nu + unit_deg(rank(), i);
  const WeightSpace& ws = word_list(nu);
  const WeightSpace& wb = word_list(x.nu);
  FVector out{nu, RatVec::Zero(ws.nwords())};
  for (int k = 0; k < ws.nwords(); ++k) {
    const Word& u = ws.words[k];
    int e = 0;
    for (size_t p = 0; p < u.size(); ++p) {
      if (u[p] == i) {
        Word rest = u;
        rest.erase(p, 1);
        const RationalFn& t = x.s(wb.index.at(rest));
        if (!t.is_zero()) out.s(k) += t.shifted(e);
      }
      e += dot(u[p], i);
    }
  }
  return out;
}

FVector FAlgebra::theta_right(const FVector& x, int i) const {
  Deg nu = x.nu + unit_deg(rank(), i);
  const WeightSpace& ws = word_list(nu);
  const WeightSpace& wb = word_list(x.nu);
  FVector out{nu, RatVec::Zero(ws.nwords())};
  for (int k = 0; k < ws.nwords(); ++k) {
    const Word& u = ws.words[k];
    int e = 0;
    for (size_t p = u.size(); p-- > 0;) {
      if (u[p] == i) {
        Word rest = u;
        rest.erase(p, 1);
        const RationalFn& t = x.s(wb.index.at(rest));
        if (!t.is_zero()) out.s(k) += t.shifted(e);
      }
      e += dot(u[p], i);
    }
  }
  return out;
}

namespace {

FVector divide_by_factorial(FVector x, int n) {
  if (n <= 1) return x;
  RationalFn f(quantum_factorial(n));
  for (int k = 0; k < x.s.size(); ++k)
    if (!x.s(k).is_zero()) x.s(k) /= f;
  return x;
}

}  // namespace

FVector FAlgebra::divided_left(int i, int n, const FVector& x) const {
  FVector y = x;
  for (int k = 0; k < n; ++k) y = theta_left(i, y);
  return divide_by_factorial(std::move(y), n);
}

FVector FAlgebra::divided_right(const FVector& x, int i, int n) const {
  FVector y = x;
  for (int k = 0; k < n; ++k) y = theta_right(y, i);
  return divide_by_factorial(std::move(y), n);
}

const FAlgebra::Shuffle& FAlgebra::shuffle(const Deg& a, const Deg& b) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_pair(a, b);
  if (auto it = shuffles_.find(key); it != shuffles_.end()) return *it->second;
  const WeightSpace& wc = word_list(a + b);
  const WeightSpace& wa = word_list(a);
  const WeightSpace& wb = word_list(b);
  auto sh = std::make_unique<Shuffle>();
  sh->terms.resize(static_cast<size_t>(wc.nwords()));
  const int na = trace(a);
  for (int k = 0; k < wc.nwords(); ++k) {
    const Word& u = wc.words[k];
    const int n = static_cast<int>(u.size());
    Deg left = a;
    Deg outside(static_cast<size_t>(rank()), 0);
    Word ua, ub;
    std::function<void(int, int)> rec = [&](int p, int e) {
      if (p == n) {
        if (static_cast<int>(ua.size()) == na) sh->terms[k].emplace_back(wa.index.at(ua), wb.index.at(ub), e);
        return;
      }
      const int c = u[p];
      if (left[c] > 0) {
        int add = 0;
        for (int l = 0; l < rank(); ++l) add += outside[l] * dot(l, c);
        --left[c];
        ua.push_back(static_cast<char>(c));
        rec(p + 1, e + add);
        ua.pop_back();
        ++left[c];
      }
      if (static_cast<int>(ub.size()) < n - na) {
        ++outside[c];
        ub.push_back(static_cast<char>(c));
        rec(p + 1, e);
        ub.pop_back();
        --outside[c];
      }
    };
    rec(0, 0);
  }
  return *shuffles_.emplace(key, std::move(sh)).first->second;
}

RatVec FAlgebra::multiply_at(const FVector& x, const FVector& y, const std::vector<int>& cols) const {
  const Shuffle& sh = shuffle(x.nu, y.nu);
  RatVec out = RatVec::Zero(static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) {
    RationalFn acc;
    for (auto [a, b, e] : sh.terms[cols[c]]) {
      const RationalFn& xa = x.s(a);
      if (xa.is_zero()) continue;
      const RationalFn& yb = y.s(b);
      if (yb.is_zero()) continue;
      acc += (xa * yb).shifted(e);
    }
    out(static_cast<int>(c)) = acc;
  }
  return out;
}

FVector FAlgebra::multiply(const FVector& x, const FVector& y) const {
  Deg nu = x.nu + y.nu;
  const WeightSpace& ws = word_list(nu);
  std::vector<int> all(static_cast<size_t>(ws.nwords()));
  std::iota(all.begin(), all.end(), 0);
  return FVector{nu, multiply_at(x, y, all)};
}

FVector FAlgebra::ir(int i, const FVector& x) const {
  if (x.nu[i] == 0) return FVector{x.nu - unit_deg(rank(), i), RatVec()};
  Deg nu = x.nu - unit_deg(rank(), i);
  const WeightSpace& ws = word_list(nu);
  const WeightSpace& wx = word_list(x.nu);
  FVector out{nu, RatVec(ws.nwords())};
  for (int k = 0; k < ws.nwords(); ++k) out.s(k) = x.s(wx.index.at(static_cast<char>(i) + ws.words[k]));
  return out;
}

FVector FAlgebra::ri(int i, const FVector& x) const {
  if (x.nu[i] == 0) return FVector{x.nu - unit_deg(rank(), i), RatVec()};
  Deg nu = x.nu - unit_deg(rank(), i);
  const WeightSpace& ws = word_list(nu);
  const WeightSpace& wx = word_list(x.nu);
  FVector out{nu, RatVec(ws.nwords())};
  for (int k = 0; k < ws.nwords(); ++k) out.s(k) = x.s(wx.index.at(ws.words[k] + static_cast<char>(i)));
  return out;
}

FVector FAlgebra::bar(const FVector& x) const {
  const WeightSpace& ws = word_list(x.nu);
  FVector out{x.nu, RatVec(ws.nwords())};
  for (int k = 0; k < ws.nwords(); ++k) out.s(k) = x.s(ws.rev[k]).bar().shifted(ws.bar_exp[k]);
  return out;
}

FVector FAlgebra::sigma(const FVector& x) const {
  const WeightSpace& ws = word_list(x.nu);
  FVector out{x.nu, RatVec(ws.nwords())};
  for (int k = 0; k < ws.nwords(); ++k) out.s(k) = x.s(ws.rev[k]);
  return out;
}

RationalFn FAlgebra::scale(int n) const {
  static const RationalFn one_minus = RationalFn(1) - RationalFn(LaurentPoly::v(-2));
  RationalFn s(1);
  for (int k = 0; k < n; ++k) s /= one_minus;
  return s;
}

RationalFn FAlgebra::gram_form(const FVector& x, const FVector& y) const {
  if (x.nu != y.nu) return RationalFn(0);
  const WeightSpace& ws = space(x.nu);
  RatVec px = pivot_values(x), py = pivot_values(y);
  RatVec t = ws.gram_inv * py;
  RationalFn acc;
  for (int k = 0; k < ws.dim(); ++k)
    if (!px(k).is_zero() && !t(k).is_zero()) acc += px(k) * t(k);
  return acc * scale(ws.trace);
}

RatMat FAlgebra::split_values(const FVector& x, const Deg& nu1, const std::vector<int>& rows,
                             const std::vector<int>& cols) const {
  Deg nu2 = x.nu - nu1;
  const WeightSpace& w1 = word_list(nu1);
  const WeightSpace& w2 = word_list(nu2);
  const WeightSpace& wx = word_list(x.nu);
  RatMat m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (size_t a = 0; a < rows.size(); ++a)
    for (size_t b = 0; b < cols.size(); ++b)
      m(static_cast<int>(a), static_cast<int>(b)) = x.s(wx.index.at(w1.words[rows[a]] + w2.words[cols[b]]));
  return m;
}

RatMat FAlgebra::comultiply(const FVector& x, const Deg& nu1) const {
  Deg nu2 = x.nu - nu1;
  if (!nonneg(nu2)) return RatMat();
  const WeightSpace& w1 = space(nu1);
  const WeightSpace& w2 = space(nu2);
  RatMat m = split_values(x, nu1, w1.pivots, w2.pivots);
  return w1.gram_inv * m * w2.gram_inv;
}

std::vector<FVector> FAlgebra::dual_basis(const std::vector<FVector>& basis) const {
  const int d = static_cast<int>(basis.size());
  if (d == 0) return {};
  RatMat g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) g(a, b) = g(b, a) = gram_form(basis[a], basis[b]);
  auto inv = inverse(g);
  if (!inv) throw std::logic_error("gram matrix of a basis is singular");
  std::vector<FVector> out;
  for (int k = 0; k < d; ++k) {
    FVector y = zero(basis[0].nu);
    for (int l = 0; l < d; ++l)
      if (!(*inv)(l, k).is_zero()) y += (*inv)(l, k) * basis[l];
    out.push_back(std::move(y));
  }
  return out;
}

FVector FAlgebra::serre(int i, int j) const {
  const int m = 1 - dot(i, j);
  Deg nu = unit_deg(rank(), i, m) + unit_deg(rank(), j);
  FVector acc = zero(nu);
  for (int n = 0; n <= m; ++n) {
    FVector t = divided_left(i, n, divided_right(theta_left(j, one()), i, m - n));
    acc = (n % 2) ? acc - t : acc + t;
  }
  return acc;
}

std::vector<Deg> FAlgebra::weights_of_trace(int t) const {
  std::vector<Deg> out;
  Deg cur(static_cast<size_t>(rank()), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == rank() - 1) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[i] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, t);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Deg> FAlgebra::weights_upto(int t) const {
  std::vector<Deg> out;
  for (int k = 0; k <= t; ++k) {
    auto w = weights_of_trace(k);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

std::string FAlgebra::word_str(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (char c : w) s += (s.empty() ? "" : " ") + datum_->cartan.gens[static_cast<size_t>(c)];
  return s;
}

std::string FAlgebra::vector_str(const FVector& x) const {
  const WeightSpace& ws = space(x.nu);
  RatVec c = coords(x);
  std::string s;
  for (int p = 0; p < ws.dim(); ++p) {
    if (c(p).is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c(p).str() + ")*[" + word_str(ws.words[ws.pivots[p]]) + "]";
  }
  return s.empty() ? "0" : s;
}

}  // namespace qcb
