#include "qcb/tensor.hpp"

#include <algorithm>
#include <functional>

namespace qcb {

namespace {

RationalFn vpow(int e) { return RationalFn(LaurentPoly::v(e)); }

RatVec zeros(int n) { return RatVec::Constant(n, RationalFn()); }

bool all_zero(const RatVec& c) {
  for (int k = 0; k < c.size(); ++k)
    if (!c(k).is_zero()) return false;
  return true;
}

}  // namespace

Key weight_key(const IntVec& x) { return Key(x.data(), x.data() + x.size()); }

// ---- BVec

bool BVec::is_zero() const {
  for (const auto& [k, c] : parts)
    if (!all_zero(c)) return false;
  return true;
}

void BVec::add(const Key& k, const RatVec& c) {
  auto it = parts.find(k);
  if (it == parts.end())
    parts.emplace(k, c);
  else
    it->second += c;
}

void BVec::prune() {
  for (auto it = parts.begin(); it != parts.end();) it = all_zero(it->second) ? parts.erase(it) : std::next(it);
}

BVec& BVec::operator+=(const BVec& o) {
  for (const auto& [k, c] : o.parts) add(k, c);
  return *this;
}

BVec& BVec::operator-=(const BVec& o) {
  for (const auto& [k, c] : o.parts) add(k, RatVec(-c));
  return *this;
}

BVec operator*(const RationalFn& s, BVec x) {
  for (auto& [k, c] : x.parts)
    for (int j = 0; j < c.size(); ++j) c(j) *= s;
  return x;
}

bool operator==(const BVec& a, const BVec& b) {
  BVec d = a - b;
  return d.is_zero();
}

// ---- BasedModule

BVec BasedModule::unit(const Key& k, int idx) const {
  RatVec c = zeros(dim(k));
  c(idx) = RationalFn(1);
  BVec x;
  x.parts.emplace(k, c);
  return x;
}

BVec BasedModule::E(int i, const BVec& x, int n) const {
  BVec y = x;
  for (int s = 0; s < n; ++s) {
    BVec z;
    for (const auto& [k, c] : y.parts)
      if (!all_zero(c)) z += E(i, k, c);
    y = std::move(z);
  }
  if (n > 1) y = (RationalFn(1) / RationalFn(quantum_factorial(n))) * y;
  y.prune();
  return y;
}

BVec BasedModule::F(int i, const BVec& x, int n) const {
  BVec y = x;
  for (int s = 0; s < n; ++s) {
    BVec z;
    for (const auto& [k, c] : y.parts)
      if (!all_zero(c)) z += F(i, k, c);
    y = std::move(z);
  }
  if (n > 1) y = (RationalFn(1) / RationalFn(quantum_factorial(n))) * y;
  y.prune();
  return y;
}

BVec BasedModule::K(const IntVec& mu, const BVec& x) const {
  BVec y = x;
  for (auto& [k, c] : y.parts) {
    RationalFn s = vpow(algebra().datum().pair(mu, weight(k)));
    for (int j = 0; j < c.size(); ++j) c(j) *= s;
  }
  return y;
}

BVec BasedModule::word_minus(const Word& w, const BVec& x) const {
  BVec y = x;
  for (auto it = w.rbegin(); it != w.rend() && !y.is_zero(); ++it) y = F(*it, y);
  return y;
}

BVec BasedModule::word_plus(const Word& w, const BVec& x) const {
  BVec y = x;
  for (auto it = w.rbegin(); it != w.rend() && !y.is_zero(); ++it) y = E(*it, y);
  return y;
}

BVec BasedModule::act_minus(const FVector& y, const BVec& x) const {
  const FAlgebra& f = algebra();
  const WeightSpace& ws = f.space(y.nu);
  RatVec c = f.coords(y);
  BVec out;
  for (int p = 0; p < ws.dim(); ++p)
    if (!c(p).is_zero()) out += c(p) * word_minus(ws.words[ws.pivots[p]], x);
  out.prune();
  return out;
}

BVec BasedModule::act_plus(const FVector& y, const BVec& x) const {
  const FAlgebra& f = algebra();
  const WeightSpace& ws = f.space(y.nu);
  RatVec c = f.coords(y);
  BVec out;
  for (int p = 0; p < ws.dim(); ++p)
    if (!c(p).is_zero()) out += c(p) * word_plus(ws.words[ws.pivots[p]], x);
  out.prune();
  return out;
}

BVec BasedModule::bar(const BVec& x) {
  BVec y = x;
  for (auto& [k, c] : y.parts)
    for (int j = 0; j < c.size(); ++j) c(j) = c(j).bar();
  return y;
}

Flat BasedModule::flatten(const BVec& x) const {
  Flat out;
  for (const auto& [k, c] : x.parts)
    for (int j = 0; j < c.size(); ++j) {
      if (c(j).is_zero()) continue;
      for (const auto& [l, s] : flatten(k, j)) out[l] += c(j) * s;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

std::string BasedModule::str(const BVec& x) const {
  std::string s;
  for (const auto& [k, c] : x.parts)
    for (int j = 0; j < c.size(); ++j) {
      if (c(j).is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += c(j).is_one() ? label(k, j) : "(" + c(j).str() + ")*" + label(k, j);
    }
  return s.empty() ? "0" : s;
}

// ---- AtomicModule

BVec AtomicModule::from(const ModuleVector& m) const {
  BVec x;
  if (m.c.size() > 0 && !m.is_zero()) x.parts.emplace(m.nu, m.c);
  return x;
}

ModuleVector AtomicModule::to(const BVec& x, const Deg& nu) const {
  auto it = x.parts.find(nu);
  if (it == x.parts.end()) return m_->zero(nu);
  return {nu, it->second};
}

BVec AtomicModule::E(int i, const Key& k, const RatVec& c) const { return from(m_->E(i, ModuleVector{k, c})); }

BVec AtomicModule::F(int i, const Key& k, const RatVec& c) const { return from(m_->F(i, ModuleVector{k, c})); }

std::string AtomicModule::label(const Key& k, int idx) const {
  const char* ext = m_->lowest() ? "xi" : "eta";
  if (m_->kind() == ModuleKind::Verma) ext = "1";
  return "b" + deg_str(k) + "#" + std::to_string(m_->basis(k)[static_cast<size_t>(idx)]) + "." + ext;
}

std::shared_ptr<AtomicModule> atomic(std::shared_ptr<const CanonicalBasis> cb, ModuleKind kind, const IntVec& lambda,
                                     int depth) {
  return std::make_shared<AtomicModule>(std::make_shared<WeightModule>(std::move(cb), kind, lambda, depth));
}

int full_height(const CanonicalBasis& cb, const IntVec& lambda) {
  const FAlgebra& f = cb.algebra();
  std::vector<int> pairs = f.datum().pairings(lambda);
  for (int t = 0; t <= f.degree_bound(); ++t) {
    bool any = false;
    for (const Deg& nu : f.weights_of_trace(t)) any = any || !cb.b_lambda(pairs, nu).empty();
    if (!any) return t > 0 ? t - 1 : 0;
  }
  throw DepthExceeded("simple module does not close up within the degree bound");
}

// ---- TensorProduct

TensorProduct::TensorProduct(std::shared_ptr<const BasedModule> a, std::shared_ptr<const BasedModule> b)
    : a_(std::move(a)), b_(std::move(b)) {
  for (const Key& ka : a_->keys()) {
    int da = a_->dim(ka);
    if (da == 0) continue;
    for (const Key& kb : b_->keys()) {
      int db = b_->dim(kb);
      if (db == 0) continue;
      IntVec w = a_->weight(ka) + b_->weight(kb);
      Block& bl = blocks_[weight_key(w)];
      bl.weight = w;
      bl.offset[{ka, kb}] = static_cast<int>(bl.basis.size());
      for (int x = 0; x < da; ++x)
        for (int y = 0; y < db; ++y) bl.basis.push_back({ka, x, kb, y});
    }
  }
}

std::vector<Key> TensorProduct::keys() const {
  std::vector<Key> out;
  for (const auto& [k, bl] : blocks_) out.push_back(k);
  return out;
}

const TensorProduct::Block& TensorProduct::block(const Key& k) const {
  auto it = blocks_.find(k);
  if (it == blocks_.end()) throw DepthExceeded("tensor weight outside the explored range");
  return it->second;
}

BVec TensorProduct::tensor(const BVec& x, const BVec& y) const {
  BVec out;
  for (const auto& [kx, cx] : x.parts) {
    if (all_zero(cx)) continue;
    for (const auto& [ky, cy] : y.parts) {
      if (all_zero(cy)) continue;
      Key w = weight_key(a_->weight(kx) + b_->weight(ky));
      const Block& bl = block(w);
      auto off = bl.offset.find({kx, ky});
      if (off == bl.offset.end()) throw DepthExceeded("tensor block outside the explored range");
      auto it = out.parts.find(w);
      if (it == out.parts.end()) it = out.parts.emplace(w, zeros(static_cast<int>(bl.basis.size()))).first;
      const int db = static_cast<int>(cy.size());
      for (int i = 0; i < cx.size(); ++i) {
        if (cx(i).is_zero()) continue;
        for (int j = 0; j < db; ++j)
          if (!cy(j).is_zero()) it->second(off->second + i * db + j) += cx(i) * cy(j);
      }
    }
  }
  return out;
}

BVec TensorProduct::pure(const Key& ka, int a, const Key& kb, int b) const {
  return tensor(a_->unit(ka, a), b_->unit(kb, b));
}

// Delta(E_i) = E_i (x) 1 + K_i (x) E_i and Delta(F_i) = F_i (x) K_-i + 1 (x) F_i.
BVec TensorProduct::pure_E(int i, const BVec& t) const {
  const RootDatum& d = algebra().datum();
  BVec out;
  for (const auto& [k, c] : t.parts) {
    const Block& bl = block(k);
    for (int s = 0; s < c.size(); ++s) {
      if (c(s).is_zero()) continue;
      const Pure& p = bl.basis[static_cast<size_t>(s)];
      BVec ua = a_->unit(p.ka, p.a), ub = b_->unit(p.kb, p.b);
      BVec term = tensor(a_->E(i, ua), ub);
      term += vpow(d.pair_i(i, a_->weight(p.ka))) * tensor(ua, b_->E(i, ub));
      out += c(s) * term;
    }
  }
  out.prune();
  return out;
}

BVec TensorProduct::pure_F(int i, const BVec& t) const {
  const RootDatum& d = algebra().datum();
  BVec out;
  for (const auto& [k, c] : t.parts) {
    const Block& bl = block(k);
    for (int s = 0; s < c.size(); ++s) {
      if (c(s).is_zero()) continue;
      const Pure& p = bl.basis[static_cast<size_t>(s)];
      BVec ua = a_->unit(p.ka, p.a), ub = b_->unit(p.kb, p.b);
      BVec term = vpow(-d.pair_i(i, b_->weight(p.kb))) * tensor(a_->F(i, ua), ub);
      term += tensor(ua, b_->F(i, ub));
      out += c(s) * term;
    }
  }
  out.prune();
  return out;
}

BVec TensorProduct::pure_K(const IntVec& mu, const BVec& t) const {
  BVec y = t;
  for (auto& [k, c] : y.parts) {
    RationalFn s = vpow(algebra().datum().pair(mu, block(k).weight));
    for (int j = 0; j < c.size(); ++j) c(j) *= s;
  }
  return y;
}

const RatMat& TensorProduct::gram_inverse(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = ginv_.find(nu); it != ginv_.end()) return it->second;
  const FAlgebra& f = algebra();
  const WeightSpace& ws = f.space(nu);
  const int d = ws.dim();
  std::vector<FVector> w;
  for (int p = 0; p < d; ++p) w.push_back(f.word(ws.words[ws.pivots[p]]));
  RatMat g(d, d);
  for (int p = 0; p < d; ++p)
    for (int q = p; q < d; ++q) g(p, q) = g(q, p) = f.gram_form(w[p], w[q]);
  auto inv = inverse(g);
  if (!inv) throw CBFailure("form is degenerate at " + deg_str(nu));
  return ginv_.emplace(nu, *inv).first->second;
}

// Theta(a (x) b) = sum_nu (-v)^tr nu sum_p theta_p^- a (x) theta_p^{*+} b over the
// pivot words of nu and their dual basis; the sum stops at the first trace
// where the second side vanishes identically.
BVec TensorProduct::theta(const BVec& t) const {
  const FAlgebra& f = algebra();
  BVec out;
  for (const auto& [k, c] : t.parts) {
    const Block& bl = block(k);
    for (int s = 0; s < c.size(); ++s) {
      if (c(s).is_zero()) continue;
      const Pure& p = bl.basis[static_cast<size_t>(s)];
      BVec ua = a_->unit(p.ka, p.a), ub = b_->unit(p.kb, p.b);
      std::map<Word, BVec> ma{{Word(), ua}}, mb{{Word(), ub}};
      std::function<const BVec&(const Word&)> minus = [&](const Word& w) -> const BVec& {
        if (auto it = ma.find(w); it != ma.end()) return it->second;
        BVec r = a_->F(w[0], minus(w.substr(1)));
        return ma.emplace(w, std::move(r)).first->second;
      };
      std::function<const BVec&(const Word&)> plus = [&](const Word& w) -> const BVec& {
        if (auto it = mb.find(w); it != mb.end()) return it->second;
        BVec r = b_->E(w[0], plus(w.substr(1)));
        return mb.emplace(w, std::move(r)).first->second;
      };
      BVec acc = tensor(ua, ub);
      for (int tr = 1;; ++tr) {
        bool any_b = false;
        BVec term;
        for (const Deg& nu : f.weights_of_trace(tr)) {
          const WeightSpace& ws = f.space(nu);
          const int d = ws.dim();
          if (d == 0) continue;
          std::vector<const BVec*> xa(static_cast<size_t>(d)), yb(static_cast<size_t>(d));
          bool b_here = false;
          for (int q = 0; q < d; ++q) {
            yb[static_cast<size_t>(q)] = &plus(ws.words[ws.pivots[q]]);
            b_here = b_here || !yb[static_cast<size_t>(q)]->is_zero();
          }
          any_b = any_b || b_here;
          // The first factor is only explored where the second survives.
          if (!b_here) continue;
          bool a_here = false;
          for (int q = 0; q < d; ++q) {
            xa[static_cast<size_t>(q)] = &minus(ws.words[ws.pivots[q]]);
            a_here = a_here || !xa[static_cast<size_t>(q)]->is_zero();
          }
          if (!a_here) continue;
          const RatMat& g = gram_inverse(nu);
          for (int x = 0; x < d; ++x) {
            if (xa[static_cast<size_t>(x)]->is_zero()) continue;
            for (int y = 0; y < d; ++y)
              if (!g(y, x).is_zero() && !yb[static_cast<size_t>(y)]->is_zero())
                term += g(y, x) * tensor(*xa[static_cast<size_t>(x)], *yb[static_cast<size_t>(y)]);
          }
        }
        if (!any_b) break;
        acc += RationalFn(LaurentPoly::monomial(tr % 2 ? -1 : 1, tr)) * term;
      }
      out += c(s) * acc;
    }
  }
  out.prune();
  return out;
}

const TensorProduct::Solved& TensorProduct::solve(const Key& k) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = solved_.find(k); it != solved_.end()) return it->second;
  const Block& bl = block(k);
  const int n = static_cast<int>(bl.basis.size());
  Solved sv;
  sv.psi = RatMat::Constant(n, n, RationalFn());
  for (int s = 0; s < n; ++s) {
    BVec unit;
    RatVec e = zeros(n);
    e(s) = RationalFn(1);
    unit.parts.emplace(k, e);
    BVec img = theta(unit);
    for (const auto& [kk, c] : img.parts) {
      if (kk != k) throw std::logic_error("quasi-R-matrix left the weight space");
      sv.psi.col(s) = c;
    }
  }
  // r depends on q when psi(r, q) != 0; order dependencies first.
  std::vector<std::vector<int>> deps(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) {
    if (sv.psi(r, r) != RationalFn(1)) throw std::logic_error("Psi is not unitriangular on " + deg_str(k));
    for (int q = 0; q < n; ++q)
      if (q != r && !sv.psi(r, q).is_zero()) deps[static_cast<size_t>(r)].push_back(q);
  }
  std::vector<int> order, state(static_cast<size_t>(n), 0);
  std::function<void(int)> visit = [&](int r) {
    if (state[static_cast<size_t>(r)] == 2) return;
    if (state[static_cast<size_t>(r)] == 1) throw std::logic_error("Psi is not triangular on " + deg_str(k));
    state[static_cast<size_t>(r)] = 1;
    for (int q : deps[static_cast<size_t>(r)]) visit(q);
    state[static_cast<size_t>(r)] = 2;
    order.push_back(r);
  };
  for (int r = 0; r < n; ++r) visit(r);

  sv.trans = RatMat::Constant(n, n, RationalFn());
  for (int p = 0; p < n; ++p) {
    std::vector<RationalFn> pi(static_cast<size_t>(n));
    pi[static_cast<size_t>(p)] = RationalFn(1);
    for (int r : order) {
      if (r == p) continue;
      RationalFn g;
      for (int q : deps[static_cast<size_t>(r)]) g += sv.psi(r, q) * pi[static_cast<size_t>(q)].bar();
      if (g.is_zero()) continue;
      if (!g.is_laurent() || !(g + g.bar()).is_zero())
        throw std::logic_error("bar equation is inconsistent on " + deg_str(k) + ": " + g.str());
      LaurentPoly neg = g.num().slice(g.num().low(), -1);
      pi[static_cast<size_t>(r)] = RationalFn(neg);
    }
    for (int r = 0; r < n; ++r) sv.trans(r, p) = pi[static_cast<size_t>(r)];
  }
  for (int p = 0; p < n; ++p) {
    RatVec b = sv.trans.col(p);
    RatVec bb(n);
    for (int r = 0; r < n; ++r) bb(r) = b(r).bar();
    if (RatVec(sv.psi * bb) != b) throw std::logic_error("diamond element is not Psi invariant on " + deg_str(k));
  }
  auto inv = inverse(sv.trans);
  if (!inv) throw std::logic_error("transition matrix is singular");
  sv.inv = *inv;
  return solved_.emplace(k, std::move(sv)).first->second;
}

const RatMat& TensorProduct::psi_matrix(const Key& k) const { return solve(k).psi; }
const RatMat& TensorProduct::transition(const Key& k) const { return solve(k).trans; }

BVec TensorProduct::to_pure(const BVec& x) const {
  BVec out;
  for (const auto& [k, c] : x.parts) out.add(k, transition(k) * c);
  return out;
}

BVec TensorProduct::to_diamond(const BVec& x) const {
  BVec out;
  for (const auto& [k, c] : x.parts) out.add(k, solve(k).inv * c);
  return out;
}

BVec TensorProduct::E(int i, const Key& k, const RatVec& c) const {
  BVec x;
  x.parts.emplace(k, c);
  return to_diamond(pure_E(i, to_pure(x)));
}

BVec TensorProduct::F(int i, const Key& k, const RatVec& c) const {
  BVec x;
  x.parts.emplace(k, c);
  return to_diamond(pure_F(i, to_pure(x)));
}

std::string TensorProduct::label(const Key& k, int idx) const {
  const Pure& p = block(k).basis[static_cast<size_t>(idx)];
  return "(" + a_->label(p.ka, p.a) + " <> " + b_->label(p.kb, p.b) + ")";
}

Flat TensorProduct::flatten(const Key& k, int idx) const {
  const Block& bl = block(k);
  const RatMat& t = transition(k);
  Flat out;
  for (int r = 0; r < t.rows(); ++r) {
    if (t(r, idx).is_zero()) continue;
    const Pure& p = bl.basis[static_cast<size_t>(r)];
    for (const auto& [la, ca] : a_->flatten(p.ka, p.a))
      for (const auto& [lb, cb] : b_->flatten(p.kb, p.b)) {
        FlatLabel l = la;
        l.insert(l.end(), lb.begin(), lb.end());
        out[l] += t(r, idx) * ca * cb;
      }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

DiamondElement TensorProduct::diamond(const Key& ka, int a, const Key& kb, int b) const {
  Key w = weight_key(a_->weight(ka) + b_->weight(kb));
  const Block& bl = block(w);
  auto off = bl.offset.find({ka, kb});
  if (off == bl.offset.end()) throw DepthExceeded("labels outside the explored range");
  int idx = off->second + a * b_->dim(kb) + b;
  DiamondElement d;
  d.weight = w;
  d.index = idx;
  d.pure.parts.emplace(w, transition(w).col(idx));
  d.label = label(w, idx);
  return d;
}

std::vector<DiamondElement> TensorProduct::diamond_basis(const Key& k) const {
  std::vector<DiamondElement> out;
  for (const Pure& p : block(k).basis) out.push_back(diamond(p.ka, p.a, p.kb, p.b));
  return out;
}

// ---- free functions

namespace {

const AtomicModule& as_atomic(const BasedModule& m) {
  auto* a = dynamic_cast<const AtomicModule*>(&m);
  if (!a) throw std::invalid_argument("operation needs weight-module factors");
  return *a;
}

int position(const WeightModule& m, const Deg& nu, int cb_index) {
  const auto& bs = m.basis(nu);
  auto it = std::find(bs.begin(), bs.end(), cb_index);
  if (it == bs.end()) throw std::logic_error("label is missing from the target module");
  return static_cast<int>(it - bs.begin());
}

}  // namespace

BVec chi_twist(const TensorProduct& src, const TensorProduct& dst, const BVec& t) {
  const WeightModule& a1 = as_atomic(src.first()).module();
  const WeightModule& b1 = as_atomic(src.second()).module();
  const WeightModule& a2 = as_atomic(dst.first()).module();
  const WeightModule& b2 = as_atomic(dst.second()).module();
  if (!a1.lowest() || b1.lowest() || !a2.lowest() || b2.lowest() || a1.lambda() != b2.lambda() ||
      b1.lambda() != a2.lambda())
    throw std::invalid_argument("chi maps ^w L(l1) (x) L(l2) to ^w L(l2) (x) L(l1)");
  BVec out;
  for (const auto& [k, c] : t.parts) {
    const auto& bl = src.block(k);
    for (int s = 0; s < c.size(); ++s) {
      if (c(s).is_zero()) continue;
      const auto& p = bl.basis[static_cast<size_t>(s)];
      int ia = a1.basis(p.ka)[static_cast<size_t>(p.a)];
      int ib = b1.basis(p.kb)[static_cast<size_t>(p.b)];
      out += c(s) * dst.pure(p.kb, position(a2, p.kb, ib), p.ka, position(b2, p.ka, ia));
    }
  }
  return out;
}

BVec epsilon_op(const TensorProduct& t, int i, const BVec& x) {
  const AtomicModule& am = as_atomic(t.first());
  const AtomicModule& bm = as_atomic(t.second());
  const WeightModule& verma = am.module();
  const WeightModule& simple = bm.module();
  if (verma.kind() != ModuleKind::Verma || simple.kind() != ModuleKind::SimpleHW)
    throw std::invalid_argument("eps_i is defined on M_zeta (x) Lambda_lambda");
  const FAlgebra& f = verma.algebra();
  const RationalFn vv(LaurentPoly::v(1) - LaurentPoly::v(-1));
  BVec out;
  for (const auto& [k, c] : x.parts) {
    const auto& bl = t.block(k);
    for (int s = 0; s < c.size(); ++s) {
      if (c(s).is_zero()) continue;
      const auto& p = bl.basis[static_cast<size_t>(s)];
      int h = simple.pair_i(i, p.kb);
      BVec ua = am.unit(p.ka, p.a), ub = bm.unit(p.kb, p.b);
      FVector m1 = verma.representative(verma.basis_vector(p.ka, p.a));
      BVec term;
      if (p.ka[static_cast<size_t>(i)] > 0) term += vpow(-h) * t.tensor(am.from(verma.from_f(f.ir(i, m1))), ub);
      BVec eb = bm.E(i, ub);
      if (!eb.is_zero()) term += (vv * vpow(-h - 2)) * t.tensor(ua, eb);
      out += c(s) * term;
    }
  }
  out.prune();
  return out;
}

RationalFn tensor_inner(const TensorProduct& t, const BVec& x, const BVec& y) {
  const WeightModule& verma = as_atomic(t.first()).module();
  const WeightModule& simple = as_atomic(t.second()).module();
  const FAlgebra& f = verma.algebra();
  RationalFn total;
  for (const auto& [k, cx] : x.parts) {
    auto it = y.parts.find(k);
    if (it == y.parts.end()) continue;
    const RatVec& cy = it->second;
    const auto& bl = t.block(k);
    for (int s = 0; s < cx.size(); ++s) {
      if (cx(s).is_zero()) continue;
      const auto& p = bl.basis[static_cast<size_t>(s)];
      for (int r = 0; r < cy.size(); ++r) {
        if (cy(r).is_zero()) continue;
        const auto& q = bl.basis[static_cast<size_t>(r)];
        if (p.ka != q.ka || p.kb != q.kb) continue;
        RationalFn fa = f.gram_form(verma.representative(verma.basis_vector(p.ka, p.a)),
                                    verma.representative(verma.basis_vector(q.ka, q.a)));
        RationalFn lb = simple.inner(simple.basis_vector(p.kb, p.b), simple.basis_vector(q.kb, q.b));
        total += cx(s) * cy(r) * fa * lb;
      }
    }
  }
  return total;
}

std::vector<Flat> flat_basis(const TensorProduct& t, const Key& k) {
  std::vector<Flat> out;
  for (int idx = 0; idx < t.dim(k); ++idx) out.push_back(t.flatten(k, idx));
  return out;
}

PositivityReport transition_positivity(const TensorProduct& t) {
  PositivityReport rep;
  for (const Key& k : t.keys()) {
    const RatMat& m = t.transition(k);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        rep.record(m(r, c), Lattice::Nvinv, "transition " + t.label(k, r) + " in " + t.label(k, c));
  }
  return rep;
}

PositivityReport action_positivity(const BasedModule& m) {
  PositivityReport rep;
  const int n = m.algebra().rank();
  for (const Key& k : m.keys())
    for (int idx = 0; idx < m.dim(k); ++idx)
      for (int i = 0; i < n; ++i)
        for (int which = 0; which < 2; ++which) {
          BVec u = m.unit(k, idx);
          BVec y = which ? m.E(i, u) : m.F(i, u);
          for (const auto& [kk, c] : y.parts)
            for (int j = 0; j < c.size(); ++j)
              rep.record(c(j), Lattice::Nvv,
                         std::string(which ? "E" : "F") + std::to_string(i) + " " + m.label(k, idx) + " -> " +
                             m.label(kk, j));
        }
  return rep;
}

}  // namespace qcb
