#include "qcb/modules.hpp"

#include <algorithm>

namespace qcb {

namespace {

const RationalFn& v_minus_vinv() {
  static const RationalFn x(LaurentPoly::v(1) - LaurentPoly::v(-1));
  return x;
}

RationalFn vpow(int e) { return RationalFn(LaurentPoly::v(e)); }

}  // namespace

bool ModuleVector::is_zero() const {
  for (int k = 0; k < c.size(); ++k)
    if (!c(k).is_zero()) return false;
  return true;
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& o) {
  if (o.c.size() == 0) return *this;
  if (c.size() == 0) return *this = o;
  if (nu != o.nu) throw std::invalid_argument("adding module vectors of different weights");
  c += o.c;
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& o) {
  if (o.c.size() == 0) return *this;
  if (c.size() == 0) return *this = RationalFn(-1) * o;
  if (nu != o.nu) throw std::invalid_argument("subtracting module vectors of different weights");
  c -= o.c;
  return *this;
}

WeightModule::WeightModule(std::shared_ptr<const CanonicalBasis> cb, ModuleKind kind, IntVec lambda, int depth)
    : cb_(std::move(cb)), kind_(kind), lambda_(std::move(lambda)), depth_(depth) {
  const RootDatum& d = datum();
  if (lambda_.size() != d.rankX) throw DatumError("weight has the wrong length");
  for (int i = 0; i < d.rank(); ++i)
    if (d.cartan.form(i, i) != 2) throw DatumError("module actions need i.i = 2 for every generator");
  pairs_ = d.pairings(lambda_);
  if (kind_ != ModuleKind::Verma && !d.dominant(lambda_)) throw DatumError("simple modules need a dominant weight");
  if (depth_ > algebra().degree_bound()) throw DepthExceeded("module depth exceeds the degree bound");
  if (kind_ != ModuleKind::Verma && depth_ < algebra().degree_bound()) {
    closed_ = true;
    for (const Deg& nu : algebra().weights_of_trace(depth_ + 1))
      if (!cb_->b_lambda(pairs_, nu).empty()) closed_ = false;
  }
}

void WeightModule::check_depth(const Deg& nu) const {
  if (trace(nu) > depth_) throw DepthExceeded("weight " + deg_str(nu) + " is deeper than " + std::to_string(depth_));
}

const std::vector<int>& WeightModule::basis(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = basis_.find(nu); it != basis_.end()) return it->second;
  std::vector<int> b;
  if (nonneg(nu) && !(closed_ && trace(nu) > depth_)) {
    check_depth(nu);
    if (kind_ == ModuleKind::Verma) {
      b.resize(cb_->at(nu).size());
      for (size_t k = 0; k < b.size(); ++k) b[k] = static_cast<int>(k);
    } else {
      b = cb_->b_lambda(pairs_, nu);
    }
  }
  return basis_.emplace(nu, std::move(b)).first->second;
}

IntVec WeightModule::weight(const Deg& nu) const {
  IntVec x = datum().to_X(nu);
  return lowest() ? IntVec(x - lambda_) : IntVec(lambda_ - x);
}

int WeightModule::pair_i(int i, const Deg& nu) const {
  int h = pairs_[i] - algebra().datum().cartan.dot(i, nu);
  return lowest() ? -h : h;
}

ModuleVector WeightModule::zero(const Deg& nu) const { return {nu, RatVec::Constant(dim(nu), RationalFn())}; }

ModuleVector WeightModule::extremal() const { return basis_vector(Deg(rank(), 0), 0); }

ModuleVector WeightModule::basis_vector(const Deg& nu, int k) const {
  ModuleVector m = zero(nu);
  m.c(k) = RationalFn(1);
  return m;
}

ModuleVector WeightModule::cb_vector(const CBElement& b) const {
  ModuleVector m = zero(b.nu);
  const auto& bs = basis(b.nu);
  auto it = std::find(bs.begin(), bs.end(), b.index);
  if (it != bs.end()) m.c(it - bs.begin()) = RationalFn(1);
  return m;
}

ModuleVector WeightModule::from_f(const FVector& x) const {
  const auto& bs = basis(x.nu);
  ModuleVector m{x.nu, RatVec(static_cast<int>(bs.size()))};
  if (bs.empty()) return m;
  RatVec c = cb_->coords(x);
  for (size_t k = 0; k < bs.size(); ++k) m.c(static_cast<int>(k)) = c(bs[k]);
  return m;
}

FVector WeightModule::representative(const ModuleVector& m) const {
  const FAlgebra& f = algebra();
  FVector x = f.zero(m.nu);
  const auto& bs = basis(m.nu);
  const auto& all = cb_->at(m.nu);
  for (size_t k = 0; k < bs.size(); ++k)
    if (!m.c(static_cast<int>(k)).is_zero()) x += m.c(static_cast<int>(k)) * all[bs[k]].vec;
  return x;
}

ModuleVector WeightModule::lower(int i, const ModuleVector& m, int n) const {
  Deg nu = m.nu + unit_deg(rank(), i, n);
  if (m.c.size() == 0 || m.is_zero()) return zero(nu);
  return from_f(algebra().divided_left(i, n, representative(m)));
}

// E_i y = (v^<i, lambda - |y| + i> _i r(y) - v^-<i, lambda> r_i(y)) / (v - v^-1) on the
// Verma module; it preserves the submodule defining the simple quotient.
ModuleVector WeightModule::raise(int i, const ModuleVector& m, int n) const {
  const FAlgebra& f = algebra();
  Deg nu = m.nu - unit_deg(rank(), i, n);
  if (!nonneg(nu) || m.c.size() == 0 || m.is_zero()) return {nu, RatVec(nonneg(nu) ? dim(nu) : 0)};
  FVector y = representative(m);
  for (int step = 0; step < n; ++step) {
    int h = pairs_[i] - f.datum().cartan.dot(i, y.nu);
    FVector a = f.ir(i, y), b = f.ri(i, y);
    FVector z = vpow(h + 2) * a - vpow(-pairs_[i]) * b;
    y = (RationalFn(1) / v_minus_vinv()) * z;
  }
  if (n > 1) y = (RationalFn(1) / RationalFn(quantum_factorial(n))) * y;
  return from_f(y);
}

ModuleVector WeightModule::lower_by(const FVector& x, const ModuleVector& m) const {
  Deg nu = m.nu + x.nu;
  if (m.c.size() == 0 || m.is_zero() || x.is_zero()) return zero(nu);
  return from_f(algebra().multiply(x, representative(m)));
}

ModuleVector WeightModule::raise_by(const FVector& x, const ModuleVector& m) const {
  const FAlgebra& f = algebra();
  Deg nu = m.nu - x.nu;
  ModuleVector out{nu, RatVec(nonneg(nu) ? dim(nu) : 0)};
  for (int k = 0; k < out.c.size(); ++k) out.c(k) = RationalFn();
  if (!nonneg(nu) || m.is_zero() || x.is_zero()) return out;
  const WeightSpace& ws = f.space(x.nu);
  RatVec c = f.coords(x);
  for (int p = 0; p < ws.dim(); ++p) {
    if (c(p).is_zero()) continue;
    const Word& w = ws.words[ws.pivots[p]];
    ModuleVector y = m;
    for (auto it = w.rbegin(); it != w.rend() && !y.is_zero(); ++it) y = raise(*it, y, 1);
    if (!y.is_zero()) out += c(p) * y;
  }
  return out;
}

ModuleVector WeightModule::F(int i, const ModuleVector& m, int n) const {
  return lowest() ? raise(i, m, n) : lower(i, m, n);
}

ModuleVector WeightModule::E(int i, const ModuleVector& m, int n) const {
  return lowest() ? lower(i, m, n) : raise(i, m, n);
}

RationalFn WeightModule::K(const IntVec& mu, const Deg& nu) const { return vpow(datum().pair(mu, weight(nu))); }

ModuleVector WeightModule::act_minus(const FVector& x, const ModuleVector& m) const {
  return lowest() ? raise_by(x, m) : lower_by(x, m);
}

ModuleVector WeightModule::act_plus(const FVector& x, const ModuleVector& m) const {
  return lowest() ? lower_by(x, m) : raise_by(x, m);
}

// On the underlying highest weight space, (F_i m, m') = v^{1 - <i, wt m>} (m, E_i m'),
// so (theta_u eta, m') unwinds letter by letter.
RationalFn WeightModule::inner(const ModuleVector& a, const ModuleVector& b) const {
  if (a.nu != b.nu || a.is_zero() || b.is_zero()) return RationalFn();
  const FAlgebra& f = algebra();
  const CartanDatum& c = f.datum().cartan;
  FVector x = representative(a);
  const WeightSpace& ws = f.space(a.nu);
  RatVec coeff = f.coords(x);
  RationalFn total;
  for (int p = 0; p < ws.dim(); ++p) {
    if (coeff(p).is_zero()) continue;
    const Word& w = ws.words[ws.pivots[p]];
    Deg rest = a.nu;
    ModuleVector y = b;
    int e = 0;
    for (char letter : w) {
      int i = letter;
      rest = rest - unit_deg(rank(), i);
      e += 1 - (pairs_[i] - c.dot(i, rest));
      y = raise(i, y, 1);
      if (y.is_zero()) break;
    }
    if (!y.is_zero()) total += coeff(p) * vpow(e) * y.c(0);
  }
  return total;
}

std::vector<Deg> WeightModule::weights() const {
  std::vector<Deg> out;
  for (int t = 0; t <= depth_; ++t)
    for (const Deg& nu : algebra().weights_of_trace(t))
      if (dim(nu) > 0) out.push_back(nu);
  return out;
}

ModuleVector extreme_vector(const WeightModule& m, const WeylWord& w) {
  if (m.kind() == ModuleKind::Verma) throw std::invalid_argument("extreme vectors need a simple module");
  const RootDatum& d = m.datum();
  ModuleVector x = m.extremal();
  IntVec cur = m.lambda();
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    int i = *it;
    int n = d.pair_i(i, cur);
    if (n < 0) throw std::invalid_argument("Weyl word is not reduced for this weight");
    x = m.lowest() ? m.E(i, x, n) : m.F(i, x, n);
    cur = cur - n * d.root(i);
  }
  return x;
}

namespace {

// The extreme vector is b^+-stable in the underlying space either way:
// DemazureHW uses b^+ on Lambda, DemazureLW b^- on ^omega Lambda.
ModuleVector demazure_apply(const WeightModule& m, const FVector& x, const ModuleVector& ext) {
  return m.lowest() ? m.act_minus(x, ext) : m.act_plus(x, ext);
}

std::vector<Deg> boxes_below(const FAlgebra& f, const Deg& top) {
  std::vector<Deg> out;
  for (int t = 0; t <= trace(top); ++t)
    for (const Deg& nu : f.weights_of_trace(t))
      if (nonneg(top - nu)) out.push_back(nu);
  return out;
}

}  // namespace

std::vector<ModuleVector> demazure_cb(const WeightModule& m, const WeylWord& w) {
  ModuleVector ext = extreme_vector(m, w);
  std::vector<ModuleVector> out;
  for (const Deg& nu : boxes_below(m.algebra(), ext.nu))
    for (const CBElement& b : m.cb().at(nu)) {
      ModuleVector y = demazure_apply(m, b.vec, ext);
      if (!y.is_zero()) out.push_back(y);
    }
  return out;
}

std::vector<ModuleVector> demazure_intersection(const WeightModule& m, const WeylWord& w) {
  const FAlgebra& f = m.algebra();
  ModuleVector ext = extreme_vector(m, w);
  std::vector<ModuleVector> out;
  for (const Deg& nu : boxes_below(f, ext.nu)) {
    Deg target = ext.nu - nu;
    int d = m.dim(target);
    if (d == 0) continue;
    const WeightSpace& ws = f.space(nu);
    RatMat rows(ws.dim(), d);
    for (int p = 0; p < ws.dim(); ++p)
      rows.row(p) = demazure_apply(m, f.word(ws.words[ws.pivots[p]]), ext).c.transpose();
    SpanSolver span(rows);
    for (int k = 0; k < d; ++k) {
      ModuleVector e = m.basis_vector(target, k);
      if (span.contains(e.c)) out.push_back(e);
    }
  }
  return out;
}

std::vector<CBElement> ann_basis(const WeightModule& lw, const WeylWord& w) {
  ModuleVector ext = extreme_vector(lw, w);
  std::vector<CBElement> out;
  for (int t = 0; t <= lw.depth(); ++t)
    for (const Deg& nu : lw.algebra().weights_of_trace(t))
      for (const CBElement& b : lw.cb().at(nu))
        if (demazure_apply(lw, b.vec, ext).is_zero()) out.push_back(b);
  return out;
}

std::string module_vector_str(const WeightModule& m, const ModuleVector& x) {
  std::string s;
  const auto& bs = m.basis(x.nu);
  const char* ext = m.lowest() ? "xi" : "eta";
  for (int k = 0; k < x.c.size(); ++k) {
    if (x.c(k).is_zero()) continue;
    if (!s.empty()) s += " + ";
    std::string label = "b" + deg_str(x.nu) + "#" + std::to_string(bs[static_cast<size_t>(k)]) + "." + ext;
    s += x.c(k).is_one() ? label : "(" + x.c(k).str() + ")*" + label;
  }
  return s.empty() ? "0" : s;
}

}  // namespace qcb
