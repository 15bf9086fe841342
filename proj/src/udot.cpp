#include "qcb/udot.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "qcb/coeff.hpp"

namespace qcb {

namespace {

bool zero_mat(const RatMat& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero()) return false;
  return true;
}

bool zero_col(const RatMat& m, int c) {
  for (int r = 0; r < m.rows(); ++r)
    if (!m(r, c).is_zero()) return false;
  return true;
}

bool zero_row(const RatMat& m, int r) {
  for (int c = 0; c < m.cols(); ++c)
    if (!m(r, c).is_zero()) return false;
  return true;
}

RatMat zero_matrix(int r, int c) { return RatMat::Constant(r, c, RationalFn(0)); }

IntVec from_key(const Key& k) {
  IntVec x(static_cast<int>(k.size()));
  for (size_t a = 0; a < k.size(); ++a) x(static_cast<int>(a)) = k[a];
  return x;
}

RatMat outer(const RatVec& a, const RatVec& b) {
  RatMat m(a.size(), b.size());
  for (int r = 0; r < a.size(); ++r)
    for (int c = 0; c < b.size(); ++c) m(r, c) = a(r) * b(c);
  return m;
}

// Homogeneous component of x of the given weight.
template <class Weight>
BVec weight_part(const BVec& x, const IntVec& w, Weight weight) {
  BVec out;
  for (const auto& [k, c] : x.parts)
    if (weight(k) == w) out.parts.emplace(k, c);
  return out;
}

std::vector<Deg> below(const Deg& a, const Deg& b) {
  std::vector<Deg> out{Deg(a.size(), 0)};
  for (size_t i = 0; i < a.size(); ++i) {
    std::vector<Deg> next;
    for (const Deg& d : out)
      for (int k = 0; k <= std::min(a[i], b[i]); ++k) {
        Deg e = d;
        e[i] = k;
        next.push_back(e);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

void UdotElement::add(const UdotKey& k, const RatMat& c) {
  auto it = terms.find(k);
  if (it == terms.end()) {
    if (!zero_mat(c)) terms.emplace(k, c);
    return;
  }
  it->second += c;
  if (zero_mat(it->second)) terms.erase(it);
}

void UdotElement::prune() {
  for (auto it = terms.begin(); it != terms.end();) it = zero_mat(it->second) ? terms.erase(it) : std::next(it);
}

UdotElement& UdotElement::operator+=(const UdotElement& o) {
  for (const auto& [k, c] : o.terms) add(k, c);
  return *this;
}

UdotElement& UdotElement::operator-=(const UdotElement& o) {
  for (const auto& [k, c] : o.terms) add(k, RatMat(-c));
  return *this;
}

UdotElement operator*(const RationalFn& s, UdotElement u) {
  if (s.is_zero()) return {};
  for (auto& [k, c] : u.terms) c *= s;
  return u;
}

bool operator==(const UdotElement& a, const UdotElement& b) { return (a - b).is_zero(); }

Letter E_(int i) { return {true, i}; }
Letter F_(int i) { return {false, i}; }

Udot::Udot(std::shared_ptr<const CanonicalBasis> cb) : cb_(std::move(cb)) {}

const Word& Udot::pivot_word(const Deg& nu, int p) const {
  const WeightSpace& ws = algebra().space(nu);
  return ws.words[static_cast<size_t>(ws.pivots[static_cast<size_t>(p)])];
}

IntVec Udot::source(const UdotKey& k) const { return from_key(k.zeta) + datum().to_X(k.y); }
IntVec Udot::target(const UdotKey& k) const { return from_key(k.zeta) + datum().to_X(k.x); }

UdotElement Udot::idempotent(const IntVec& zeta) const {
  const FVector one = algebra().one();
  return monomial(one, zeta, one);
}

UdotElement Udot::monomial(const FVector& x, const IntVec& zeta, const FVector& y, const RationalFn& c) const {
  UdotElement u;
  u.add({weight_key(zeta), x.nu, y.nu}, RatMat(c * outer(algebra().coords(x), algebra().coords(y))));
  return u;
}

LaurentPoly Udot::commutator(int i, const IntVec& w) const {
  const int n = datum().pair_i(i, w);
  const int di = datum().cartan.form(i, i) / 2;
  LaurentPoly out;
  for (int k = 0; k < std::abs(n); ++k) out += LaurentPoly::v(di * (std::abs(n) - 1 - 2 * k));
  return n < 0 ? -out : out;
}

Udot::Normal Udot::reduce(std::vector<Letter> word, const IntVec& zeta, Reduction order, unsigned& state) const {
  std::vector<size_t> inv;
  for (size_t k = 0; k + 1 < word.size(); ++k)
    if (!word[k].e && word[k + 1].e) inv.push_back(k);
  if (inv.empty()) {
    Word a, b;
    for (const Letter& l : word) (l.e ? a : b).push_back(static_cast<char>(l.i));
    IntVec mid = zeta - datum().to_X(word_weight(b, datum().rank()));
    return {{{a, b, weight_key(mid)}, LaurentPoly(1)}};
  }
  size_t k = inv.front();
  if (order == Reduction::Rightmost) k = inv.back();
  if (order == Reduction::Random) {
    state = state * 1103515245u + 12345u;
    k = inv[(state >> 8) % inv.size()];
  }
  // Weight of the vector the pair F_j E_i is applied to.
  IntVec w = zeta;
  for (size_t j = k + 2; j < word.size(); ++j) w += (word[j].e ? 1 : -1) * datum().root(word[j].i);

  const int i = word[k + 1].i, j = word[k].i;
  std::vector<Letter> swapped = word;
  std::swap(swapped[k], swapped[k + 1]);
  Normal out = order == Reduction::Leftmost ? normal(swapped, zeta) : reduce(swapped, zeta, order, state);
  if (i == j) {
    std::vector<Letter> shorter = word;
    shorter.erase(shorter.begin() + static_cast<long>(k), shorter.begin() + static_cast<long>(k) + 2);
    const LaurentPoly c = commutator(i, w);
    if (!c.is_zero()) {
      Normal rest = order == Reduction::Leftmost ? normal(shorter, zeta) : reduce(shorter, zeta, order, state);
      for (const auto& [key, x] : rest) out[key] -= c * x;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

const Udot::Normal& Udot::normal(const std::vector<Letter>& word, const IntVec& zeta) const {
  std::vector<std::pair<bool, int>> key;
  for (const Letter& l : word) key.emplace_back(l.e, l.i);
  auto mk = std::make_pair(key, weight_key(zeta));
  {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = normal_.find(mk);
    if (it != normal_.end()) return it->second;
  }
  unsigned state = 0;
  Normal n = reduce(word, zeta, Reduction::Leftmost, state);
  std::lock_guard<std::recursive_mutex> lock(mu_);
  return normal_.emplace(mk, std::move(n)).first->second;
}

UdotElement Udot::straighten(const std::vector<Letter>& word, const IntVec& zeta, Reduction order,
                             unsigned seed) const {
  if (zeta.size() != datum().rankX) throw std::invalid_argument("straighten: idempotent weight has the wrong rank");
  for (const Letter& l : word)
    if (l.i < 0 || l.i >= datum().rank()) throw std::invalid_argument("straighten: malformed word");
  unsigned state = seed;
  Normal n = order == Reduction::Leftmost ? normal(word, zeta) : reduce(word, zeta, order, state);
  UdotElement u;
  for (const auto& [key, c] : n) {
    const auto& [a, b, mid] = key;
    u += monomial(algebra().word(a), from_key(mid), algebra().word(b), RationalFn(c));
  }
  return u;
}

UdotElement Udot::multiply(const UdotElement& a, const UdotElement& b) const {
  const FAlgebra& f = algebra();
  UdotElement out;
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      if (source(ka) != target(kb)) continue;
      for (int q = 0; q < ca.cols(); ++q) {
        if (zero_col(ca, q)) continue;
        const FVector left = f.from_coords(ka.x, ca.col(q));
        for (int p = 0; p < cb.rows(); ++p) {
          if (zero_row(cb, p)) continue;
          const FVector right = f.from_coords(kb.y, cb.row(p).transpose());
          std::vector<Letter> w;
          for (char c : pivot_word(ka.y, q)) w.push_back(F_(c));
          for (char c : pivot_word(kb.x, p)) w.push_back(E_(c));
          for (const auto& [key, c] : normal(w, from_key(kb.zeta))) {
            const auto& [wa, wb, mid] = key;
            const FVector x = f.multiply(left, f.word(wa));
            const FVector y = f.multiply(f.word(wb), right);
            out.add({mid, x.nu, y.nu}, RatMat(RationalFn(c) * outer(f.coords(x), f.coords(y))));
          }
        }
      }
    }
  return out;
}

UdotElement Udot::sigma(const UdotElement& u) const {
  UdotElement out;
  for (const auto& [k, c] : u.terms) {
    // sigma(x^+ 1_z y^-) = sigma(y)^- 1_-z sigma(x)^+, which eats -z - |x|.
    const IntVec src = -from_key(k.zeta) - datum().to_X(k.x);
    for (int p = 0; p < c.rows(); ++p)
      for (int q = 0; q < c.cols(); ++q) {
        if (c(p, q).is_zero()) continue;
        std::vector<Letter> w;
        const Word& wy = pivot_word(k.y, q);
        const Word& wx = pivot_word(k.x, p);
        for (auto it = wy.rbegin(); it != wy.rend(); ++it) w.push_back(F_(*it));
        for (auto it = wx.rbegin(); it != wx.rend(); ++it) w.push_back(E_(*it));
        out += c(p, q) * straighten(w, src);
      }
  }
  return out;
}

template <class Raise, class Lower, class Weight>
BVec Udot::act_generic(const UdotElement& u, const BVec& x, Raise raise, Lower lower, Weight weight) const {
  BVec out;
  for (const auto& [k, c] : u.terms) {
    const BVec xs = weight_part(x, source(k), weight);
    if (xs.is_zero()) continue;
    for (int q = 0; q < c.cols(); ++q) {
      if (zero_col(c, q)) continue;
      const BVec yq = lower(pivot_word(k.y, q), xs);
      if (yq.is_zero()) continue;
      for (int p = 0; p < c.rows(); ++p)
        if (!c(p, q).is_zero()) out += c(p, q) * raise(pivot_word(k.x, p), yq);
    }
  }
  out.prune();
  return out;
}

BVec Udot::act(const UdotElement& u, const BasedModule& m, const BVec& x) const {
  return act_generic(
      u, x, [&](const Word& w, const BVec& y) { return m.word_plus(w, y); },
      [&](const Word& w, const BVec& y) { return m.word_minus(w, y); }, [&](const Key& k) { return m.weight(k); });
}

BVec Udot::act_word(const std::vector<Letter>& word, const BasedModule& m, const BVec& x) const {
  BVec y = x;
  for (auto it = word.rbegin(); it != word.rend() && !y.is_zero(); ++it) y = it->e ? m.E(it->i, y) : m.F(it->i, y);
  return y;
}

BVec Udot::act_pure(const UdotElement& u, const TensorProduct& t, const BVec& x) const {
  auto raise = [&](const Word& w, const BVec& y) {
    BVec z = y;
    for (auto it = w.rbegin(); it != w.rend() && !z.is_zero(); ++it) z = t.pure_E(*it, z);
    return z;
  };
  auto lower = [&](const Word& w, const BVec& y) {
    BVec z = y;
    for (auto it = w.rbegin(); it != w.rend() && !z.is_zero(); ++it) z = t.pure_F(*it, z);
    return z;
  };
  return act_generic(u, x, raise, lower, [&](const Key& k) { return t.block(k).weight; });
}

std::pair<IntVec, IntVec> Udot::dominant_pair(const IntVec& zeta, int bound) const {
  const RootDatum& d = datum();
  std::vector<int> k(static_cast<size_t>(d.rank()));
  for (int i = 0; i < d.rank(); ++i) k[static_cast<size_t>(i)] = bound + std::max(0, -d.pair_i(i, zeta));
  IntVec l1 = d.weight_with_pairings(k);
  IntVec l2 = l1 + zeta;
  for (int i = 0; i < d.rank(); ++i)
    if (d.pair_i(i, l1) < bound || d.pair_i(i, l2) < bound)
      throw LiftError("no dominant pair with the required pairings");
  return {l1, l2};
}

UdotElement Udot::lift_at(const FLabel& b1, const IntVec& zeta, const FLabel& b2, int margin) const {
  if (margin < 1) throw std::invalid_argument("lift margin must be at least 1");
  const RootDatum& d = datum();
  const int t1 = trace(b1.nu), t2 = trace(b2.nu);
  const auto [l1, l2] = dominant_pair(zeta, t1 + t2 + margin);
  auto first = atomic(cb_, ModuleKind::SimpleLW, l1, t1);
  auto second = atomic(cb_, ModuleKind::SimpleHW, l2, t2);
  TensorProduct t(first, second);

  auto position = [](const WeightModule& m, const FLabel& b) {
    const auto& basis = m.basis(b.nu);
    auto it = std::find(basis.begin(), basis.end(), b.index);
    if (it == basis.end()) throw LiftError("canonical basis element vanishes on the extremal vector");
    return static_cast<int>(it - basis.begin());
  };
  const BVec goal = t.diamond(b1.nu, position(first->module(), b1), b2.nu, position(second->module(), b2)).pure;
  const Key out_key = weight_key(zeta + d.to_X(b1.nu) - d.to_X(b2.nu));
  const Deg zero(static_cast<size_t>(d.rank()), 0);
  const BVec start = t.pure(zero, 0, zero, 0);

  struct Candidate {
    UdotKey key;
    int p, q;
  };
  std::vector<Candidate> cands;
  std::vector<RatVec> cols;
  const int dim = t.dim(out_key);
  for (const Deg& s : below(b1.nu, b2.nu)) {
    const Deg kx = b1.nu - s, ky = b2.nu - s;
    const IntVec mid = zeta - d.to_X(ky);
    const int dx = algebra().dim(kx), dy = algebra().dim(ky);
    for (int q = 0; q < dy; ++q) {
      BVec y = start;
      const Word& wq = pivot_word(ky, q);
      for (auto it = wq.rbegin(); it != wq.rend() && !y.is_zero(); ++it) y = t.pure_F(*it, y);
      for (int p = 0; p < dx; ++p) {
        BVec z = y;
        const Word& wp = pivot_word(kx, p);
        for (auto it = wp.rbegin(); it != wp.rend() && !z.is_zero(); ++it) z = t.pure_E(*it, z);
        RatVec col = RatVec::Constant(dim, RationalFn(0));
        auto f = z.parts.find(out_key);
        if (f != z.parts.end()) col = f->second;
        cands.push_back({{weight_key(mid), kx, ky}, p, q});
        cols.push_back(col);
      }
    }
  }
  const int n = static_cast<int>(cands.size());
  RatMat rows(n, dim);
  for (int c = 0; c < n; ++c) rows.row(c) = cols[static_cast<size_t>(c)].transpose();
  SpanSolver s(rows);
  if (s.rank() != n)
    throw LiftError("non-unique lift: the " + std::to_string(n) + " candidate monomials act with rank " +
                    std::to_string(s.rank()));
  RatVec g = RatVec::Constant(dim, RationalFn(0));
  auto gi = goal.parts.find(out_key);
  if (gi != goal.parts.end()) g = gi->second;
  auto sol = s.solve(g);
  if (!sol) throw LiftError("diamond element is not reached by any lift");

  UdotElement u;
  for (int k = 0; k < s.rank(); ++k) {
    const Candidate& c = cands[static_cast<size_t>(s.rows()[static_cast<size_t>(k)])];
    RatMat m = zero_matrix(algebra().dim(c.key.x), algebra().dim(c.key.y));
    m(c.p, c.q) = (*sol)(k);
    u.add(c.key, m);
  }
  return u;
}

DotCB Udot::diamond_lift(const FLabel& b1, const IntVec& zeta, const FLabel& b2, int margin) const {
  UdotElement a = lift_at(b1, zeta, b2, margin);
  UdotElement b = lift_at(b1, zeta, b2, margin + 1);
  if (a != b) throw LiftError("unstable lift: " + str(a) + " at margin " + std::to_string(margin) + " but " + str(b));
  return {{b1, weight_key(zeta), b2}, std::move(a), margin};
}

DotExpansion Udot::expand(const UdotElement& u, int margin) const {
  if (u.is_zero()) return {};
  const RootDatum& d = datum();
  IntVec src = source(u.terms.begin()->first);
  int tx = 0, ty = 0;
  for (const auto& [k, c] : u.terms) {
    if (source(k) != src) throw std::invalid_argument("expand: element has several source weights");
    tx = std::max(tx, trace(k.x));
    ty = std::max(ty, trace(k.y));
  }
  const auto [l1, l2] = dominant_pair(src, tx + ty + margin);
  auto first = atomic(cb_, ModuleKind::SimpleLW, l1, tx);
  auto second = atomic(cb_, ModuleKind::SimpleHW, l2, ty);
  TensorProduct t(first, second);
  const Deg zero(static_cast<size_t>(d.rank()), 0);
  const BVec image = t.to_diamond(act_pure(u, t, t.pure(zero, 0, zero, 0)));

  DotExpansion out;
  for (const auto& [k, c] : image.parts) {
    const auto basis = t.diamond_basis(k);
    for (int j = 0; j < c.size(); ++j) {
      if (c(j).is_zero()) continue;
      const auto& pt = t.block(k).basis[static_cast<size_t>(basis[static_cast<size_t>(j)].index)];
      FLabel b1{pt.ka, first->module().basis(pt.ka)[static_cast<size_t>(pt.a)]};
      FLabel b2{pt.kb, second->module().basis(pt.kb)[static_cast<size_t>(pt.b)]};
      out[{b1, weight_key(src), b2}] += c(j);
    }
  }
  return out;
}

Spherical Udot::is_spherical_parabolic(const UdotElement& u) const {
  const int n = datum().rank();
  std::vector<int> plus, minus;
  for (int i = 0; i < n; ++i) {
    bool in_x = false, in_y = false;
    for (const auto& [k, c] : u.terms) {
      in_x = in_x || k.x[static_cast<size_t>(i)] > 0;
      in_y = in_y || k.y[static_cast<size_t>(i)] > 0;
    }
    if (in_x) plus.push_back(i);
    if (in_y) minus.push_back(i);
  }
  const CartanDatum& c = datum().cartan;
  const bool sp = is_spherical(plus, c), sm = is_spherical(minus, c);
  if (sp && (!sm || plus.size() <= minus.size())) return {true, plus, false};
  if (sm) return {true, minus, true};
  return {};
}

UdotPositivity Udot::verify_positivity(const DotCB& a, const DotCB& b, bool with_sigma) const {
  UdotPositivity r;
  const int margin = std::max(a.margin, b.margin);
  const UdotElement p = multiply(a.lift, b.lift);
  r.product = expand(p, margin);
  const std::string head = label_str(a.label) + " * " + label_str(b.label) + " at ";
  for (const auto& [l, c] : r.product) r.report.record(c, Lattice::Nvv, head + label_str(l));
  if (with_sigma) {
    r.sigma_checked = true;
    const DotExpansion s = expand(multiply(sigma(b.lift), sigma(a.lift)), margin);
    std::vector<std::string> x, y;
    for (const auto& [l, c] : r.product) x.push_back(c.str());
    for (const auto& [l, c] : s) y.push_back(c.str());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    r.sigma_ok = x == y;
    if (!r.sigma_ok) r.failures.push_back(head + "sigma image has different structure constants");
  }
  return r;
}

PositivityReport Udot::simple_positivity(const DotCB& a, const IntVec& lambda) const {
  PositivityReport r;
  for (ModuleKind kind : {ModuleKind::SimpleHW, ModuleKind::SimpleLW}) {
    auto m = atomic(cb_, kind, lambda, full_height(*cb_, lambda));
    for (const Key& k : m->keys())
      for (int j = 0; j < m->dim(k); ++j) {
        const BVec y = act(a.lift, *m, m->unit(k, j));
        for (const auto& [key, c] : y.parts)
          for (int e = 0; e < c.size(); ++e)
            r.record(c(e), Lattice::Nvv, label_str(a.label) + " on " + m->label(k, j) + " -> " + m->label(key, e));
      }
  }
  return r;
}

std::string Udot::str(const UdotElement& u) const {
  if (u.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  const FAlgebra& f = algebra();
  for (const auto& [k, c] : u.terms)
    for (int p = 0; p < c.rows(); ++p)
      for (int q = 0; q < c.cols(); ++q) {
        if (c(p, q).is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        if (!c(p, q).is_one()) os << "(" << c(p, q).str() << ")";
        const Word& x = pivot_word(k.x, p);
        const Word& y = pivot_word(k.y, q);
        if (!x.empty()) os << "E" << f.word_str(x);
        os << "1_" << deg_str(k.zeta);
        if (!y.empty()) os << "F" << f.word_str(y);
      }
  return os.str();
}

std::string Udot::label_str(const DotLabel& l) const {
  return "b" + deg_str(l.b1.nu) + "#" + std::to_string(l.b1.index) + " <>_" + deg_str(l.zeta) + " b" +
         deg_str(l.b2.nu) + "#" + std::to_string(l.b2.index);
}

}  // namespace qcb
