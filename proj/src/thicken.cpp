#include "qcb/thicken.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qcb {

namespace {

RationalFn vpow(int e) { return RationalFn(LaurentPoly::v(e)); }

RatVec zeros(int n) { return RatVec::Constant(n, RationalFn()); }

bool all_zero(const RatVec& c) {
  for (int k = 0; k < c.size(); ++k)
    if (!c(k).is_zero()) return false;
  return true;
}

// All mu in N[I] with mu <= nu componentwise.
std::vector<Deg> below(const Deg& nu) {
  std::vector<Deg> out{Deg(nu.size(), 0)};
  for (size_t i = 0; i < nu.size(); ++i) {
    std::vector<Deg> next;
    for (const Deg& d : out)
      for (int k = 0; k <= nu[i]; ++k) {
        Deg e = d;
        e[i] = k;
        next.push_back(e);
      }
    out = std::move(next);
  }
  return out;
}

Deg pad(const Deg& nu, int n) {
  Deg out = nu;
  out.resize(static_cast<size_t>(n), 0);
  return out;
}

// Solve cols * u = z where the columns of `cols` are independent.
std::optional<RatVec> solve_columns(const RatMat& cols, const RatVec& z) {
  if (cols.cols() == 0) return z.size() == 0 || all_zero(z) ? std::optional<RatVec>(RatVec(0)) : std::nullopt;
  SpanSolver s(RatMat(cols.transpose()));
  if (s.rank() != cols.cols()) throw std::logic_error("dependent columns in solve");
  auto u = s.solve(z);
  if (!u) return std::nullopt;
  RatVec out = zeros(static_cast<int>(cols.cols()));
  for (int k = 0; k < s.rank(); ++k) out(s.rows()[static_cast<size_t>(k)]) = (*u)(k);
  return out;
}

RatVec block_coords(const TensorProduct& t, const BVec& x, const Key& k) {
  auto it = x.parts.find(k);
  for (const auto& [key, c] : x.parts)
    if (key != k && !all_zero(c)) throw std::logic_error("vector is not homogeneous");
  if (it == x.parts.end()) return zeros(t.has_block(k) ? t.dim(k) : 0);
  return it->second;
}

}  // namespace

ThickPair thicken_pair(const RootDatum& d, int base_bound, int thick_bound) {
  ThickPair p;
  p.base = std::make_shared<CanonicalBasis>(make_falgebra(d, base_bound));
  p.thick = std::make_shared<CanonicalBasis>(make_falgebra(thicken(d), thick_bound));
  return p;
}

// ---- Thickening

Thickening::Thickening(ThickPair cbs, IntVec zeta, IntVec lambda, int depth)
    : cbs_(std::move(cbs)), zeta_(std::move(zeta)), lambda_(std::move(lambda)), depth_(depth) {
  const RootDatum& td = thick_datum();
  const RootDatum& bd = base().algebra().datum();
  if (!td.base || td.base->rank() != bd.rank()) throw DatumError("second basis is not the thickening of the first");
  if (!bd.dominant(lambda_)) throw DatumError("theta_lambda needs a dominant weight");
  std::vector<int> c = bd.pairings(lambda_);
  theta_deg_.assign(static_cast<size_t>(td.rank()), 0);
  DividedWord dw;
  for (int i = 0; i < bd.rank(); ++i) {
    theta_deg_[static_cast<size_t>(td.prime(i))] = c[static_cast<size_t>(i)];
    if (c[static_cast<size_t>(i)] > 0) dw.blocks.push_back({td.prime(i), c[static_cast<size_t>(i)]});
  }
  theta_ = thick().algebra().divided(dw);

  int lifted = depth_ + trace(theta_deg_);
  ambient_ = std::make_shared<WeightModule>(cbs_.thick, ModuleKind::Verma, odot(td, zeta_, lambda_), lifted);
  simple0_ = std::make_shared<WeightModule>(cbs_.thick, ModuleKind::SimpleHW, odot(td, bd.zero_weight(), lambda_),
                                            lifted);
  verma_ = atomic(cbs_.base, ModuleKind::Verma, zeta_, depth_);
  simple_ = atomic(cbs_.base, ModuleKind::SimpleHW, lambda_, full_height(base(), lambda_));
  tensor_ = std::make_shared<TensorProduct>(verma_, simple_);
}

Deg Thickening::lift(const Deg& nu) const { return pad(nu, thick_datum().rank()) + theta_deg_; }

Deg Thickening::component(const Deg& nut) const {
  Deg d = nut - theta_deg_;
  int n = base().algebra().rank();
  for (size_t i = static_cast<size_t>(n); i < d.size(); ++i)
    if (d[i] != 0) throw std::domain_error("degree outside the subspace");
  d.resize(static_cast<size_t>(n));
  return d;
}

FVector Thickening::embed(const FVector& x) const {
  FVector y{pad(x.nu, thick_datum().rank()), x.s};
  if (thick().algebra().word_list(y.nu).nwords() != x.s.size()) throw std::logic_error("word lists disagree");
  return y;
}

FVector Thickening::restrict(const FVector& x) const {
  int n = base().algebra().rank();
  for (size_t i = static_cast<size_t>(n); i < x.nu.size(); ++i)
    if (x.nu[i] != 0) throw std::domain_error("element involves primed generators");
  return {Deg(x.nu.begin(), x.nu.begin() + n), x.s};
}

std::vector<Deg> Thickening::degrees() const { return base().algebra().weights_upto(depth_); }

Key Thickening::block_key(const Deg& nu) const {
  return weight_key(zeta_ + lambda_ - base().algebra().datum().to_X(nu));
}

const std::vector<int>& Thickening::cb(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = cb_.find(nu); it != cb_.end()) return it->second;
  if (trace(nu) > depth_) throw DepthExceeded("component " + deg_str(nu) + " is deeper than " + std::to_string(depth_));
  const FAlgebra& f = base().algebra();
  const FAlgebra& ft = thick().algebra();
  const int n = static_cast<int>(thick().at(lift(nu)).size());
  std::set<int> support;
  std::vector<RatVec> rows;
  for (const Deg& nu1 : below(nu)) {
    Deg nu2 = nu - nu1;
    for (const DividedWord& w1 : divided_words(nu1)) {
      FVector left = ft.multiply(embed(f.divided(w1)), theta_);
      for (const DividedWord& w2 : divided_words(nu2)) {
        RatVec c = thick().coords(ft.multiply(left, embed(f.divided(w2))));
        for (int k = 0; k < n; ++k)
          if (!c(k).is_zero()) support.insert(k);
        rows.push_back(c);
      }
    }
  }
  RatMat m(static_cast<int>(rows.size()), n);
  for (size_t r = 0; r < rows.size(); ++r) m.row(static_cast<int>(r)) = rows[r].transpose();
  if (qcb::rank(m) != static_cast<int>(support.size()))
    throw CBFailure("supports at " + deg_str(nu) + " do not match the span of the products");
  return cb_.emplace(nu, std::vector<int>(support.begin(), support.end())).first->second;
}

ModuleVector Thickening::element(const Deg& nu, int k) const {
  ModuleVector m = ambient_->zero(lift(nu));
  m.c(cb(nu)[static_cast<size_t>(k)]) = RationalFn(1);
  return m;
}

ModuleVector Thickening::from_f(const FVector& z) const { return ambient_->from_f(z); }

RatVec Thickening::sub_coords(const ModuleVector& z) const {
  const std::vector<int>& idx = cb(component(z.nu));
  RatVec out(static_cast<int>(idx.size()));
  std::vector<bool> inside(static_cast<size_t>(z.c.size()), false);
  for (size_t k = 0; k < idx.size(); ++k) {
    out(static_cast<int>(k)) = z.c(idx[k]);
    inside[static_cast<size_t>(idx[k])] = true;
  }
  for (int k = 0; k < z.c.size(); ++k)
    if (!inside[static_cast<size_t>(k)] && !z.c(k).is_zero()) throw std::domain_error("vector outside the subspace");
  return out;
}

std::string Thickening::label(const Deg& nu, int k) const {
  return thick().expansion_str(thick().at(lift(nu))[static_cast<size_t>(cb(nu)[static_cast<size_t>(k)])]);
}

const Thickening::Leg& Thickening::second_leg(const Deg& nua) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = second_.find(nua); it != second_.end()) return it->second;
  const FAlgebra& ft = thick().algebra();
  const WeightModule& lam = simple_->module();
  Deg top = lift(nua);
  const int dl = lam.dim(nua), dt = simple0_->dim(top);
  // phi_lambda: x^- eta_lambda -> pi(x theta_lambda) on the basis of Lambda_lambda.
  RatMat p(dt, dl);
  for (int k = 0; k < dl; ++k) {
    FVector x = lam.representative(lam.basis_vector(nua, k));
    p.col(k) = simple0_->from_f(ft.multiply(embed(x), theta_)).c;
  }
  const WeightSpace& ws = ft.space(top);
  Leg leg{RatMat(dt, ws.dim()), p, nua};
  for (int q = 0; q < ws.dim(); ++q)
    leg.map.col(q) = simple0_->from_f(ft.word(ws.words[static_cast<size_t>(ws.pivots[static_cast<size_t>(q)])])).c;
  return second_.emplace(nua, std::move(leg)).first->second;
}

const Thickening::Leg& Thickening::first_leg(const Deg& nub) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = first_.find(nub); it != first_.end()) return it->second;
  const FAlgebra& ft = thick().algebra();
  const WeightModule& m = verma_->module();
  const WeightSpace& ws = ft.space(pad(nub, thick_datum().rank()));
  Leg leg{RatMat(m.dim(nub), ws.dim()), RatMat(), nub};
  for (int q = 0; q < ws.dim(); ++q)
    leg.map.col(q) = m.from_f(restrict(ft.word(ws.words[static_cast<size_t>(ws.pivots[static_cast<size_t>(q)])]))).c;
  return first_.emplace(nub, std::move(leg)).first->second;
}

// r, then the legs with first component of degree nu_a + |theta_lambda|,
// swapped, the second leg through pi_{0 odot lambda} and phi_lambda^-1.
BVec Thickening::phi(const ModuleVector& z) const {
  if (!nonneg(z.nu - theta_deg_)) return {};
  Deg nu = component(z.nu);
  Key key = block_key(nu);
  const TensorProduct::Block& bl = tensor_->block(key);
  RatVec out = zeros(static_cast<int>(bl.basis.size()));
  FVector zf = ambient_->representative(z);
  for (const Deg& nua : below(nu)) {
    Deg nub = nu - nua;
    const Leg& second = second_leg(nua);
    const Leg& first = first_leg(nub);
    if (second.solve.cols() == 0 || first.map.rows() == 0) continue;
    RatMat r = thick().algebra().comultiply(zf, lift(nua));
    // Only the sum over the first legs lies in Lambda_{0, lambda}.
    RatMat pr = second.map * r;
    const int dl = static_cast<int>(second.solve.cols());
    RatMat u(dl, pr.cols());
    for (int q = 0; q < pr.cols(); ++q) {
      auto sol = solve_columns(second.solve, pr.col(q));
      if (!sol) throw std::logic_error("pi_{0 odot lambda} leaves the image of phi_lambda at " + deg_str(nua));
      u.col(q) = *sol;
    }
    RatMat c = first.map * u.transpose();
    const int off = bl.offset.at({nub, nua});
    const int db = dl;
    for (int x = 0; x < c.rows(); ++x)
      for (int y = 0; y < c.cols(); ++y) out(off + x * db + y) += c(x, y);
  }
  BVec t;
  t.parts.emplace(key, out);
  return t;
}

const RatMat& Thickening::phi_matrix(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = phi_.find(nu); it != phi_.end()) return it->second;
  Key key = block_key(nu);
  RatMat m(tensor_->dim(key), dim(nu));
  for (int k = 0; k < dim(nu); ++k) m.col(k) = block_coords(*tensor_, phi(element(nu, k)), key);
  return phi_.emplace(nu, std::move(m)).first->second;
}

ModuleVector Thickening::psi(const BVec& t) const {
  BVec x = t;
  x.prune();
  if (x.parts.size() > 1) throw std::invalid_argument("psi expects a homogeneous vector");
  for (const Deg& nu : degrees()) {
    Key key = block_key(nu);
    if (!x.parts.empty() && x.parts.begin()->first != key) continue;
    if (x.parts.empty()) return ambient_->zero(lift(nu));
    const RatMat& m = phi_matrix(nu);
    if (m.rows() != m.cols()) throw std::logic_error("phi is not square at " + deg_str(nu));
    auto u = solve_columns(m, x.parts.begin()->second);
    if (!u) throw std::logic_error("phi is singular at " + deg_str(nu));
    ModuleVector out = ambient_->zero(lift(nu));
    for (int k = 0; k < u->size(); ++k) out.c(cb(nu)[static_cast<size_t>(k)]) = (*u)(k);
    return out;
  }
  throw DepthExceeded("psi: component beyond the thickening depth");
}

FVector Thickening::psi_closed(const FVector& x, int i, int n) const {
  const FAlgebra& ft = thick().algebra();
  const int li = base().algebra().datum().pair_i(i, lambda_);
  FVector ex = embed(x);
  FVector out = ft.zero(lift(x.nu + unit_deg(base().algebra().rank(), i, n)));
  for (int k = 0; k <= n; ++k) {
    FVector term = ft.divided_left(i, n - k, ft.multiply(theta_, ft.divided_left(i, k, ex)));
    RationalFn c = vpow(-k * (li + 1 - n));
    out += (k % 2 ? RationalFn(-1) * c : c) * term;
  }
  return out;
}

BijectionReport cb_bijection_check(const Thickening& t) {
  BijectionReport rep;
  for (const Deg& nu : t.degrees()) {
    Key key = t.block_key(nu);
    std::vector<DiamondElement> diamonds =
        t.tensor().has_block(key) ? t.tensor().diamond_basis(key) : std::vector<DiamondElement>{};
    if (static_cast<int>(diamonds.size()) != t.dim(nu))
      rep.failures.push_back("dimension mismatch at " + deg_str(nu));
    std::vector<bool> used(diamonds.size(), false);
    for (int k = 0; k < t.dim(nu); ++k) {
      ++rep.checked;
      BVec img = t.phi(t.element(nu, k));
      bool found = false;
      for (size_t d = 0; d < diamonds.size() && !found; ++d)
        if (!used[d] && diamonds[d].pure == img) {
          used[d] = found = true;
          rep.matches.push_back({t.label(nu, k), diamonds[d].label});
        }
      if (!found) rep.failures.push_back("phi(" + t.label(nu, k) + ") = " + t.tensor().str(img) + " is not a diamond");
    }
  }
  return rep;
}

// ---- Quotient

Quotient::Quotient(std::shared_ptr<const Thickening> t, QuotientKind kind, IntVec lambda1, WeylWord w)
    : t_(std::move(t)), kind_(kind), lambda1_(std::move(lambda1)), w_(std::move(w)) {
  const CanonicalBasis& b = t_->base();
  const RootDatum& d = b.algebra().datum();
  int h = full_height(b, lambda1_);
  if (kind_ == QuotientKind::DemazureLW) {
    if (t_->zeta() != IntVec(-act(d, w_, lambda1_))) throw std::invalid_argument("zeta must be -w lambda1");
    first_ = std::make_shared<WeightModule>(t_->pair().base, ModuleKind::SimpleLW, lambda1_, h);
    gen_ = extreme_vector(*first_, w_);
  } else {
    if (t_->zeta() != lambda1_) throw std::invalid_argument("zeta must be lambda1");
    if (!w_.letters.empty()) throw std::invalid_argument("the simple variant takes no Weyl word");
    first_ = std::make_shared<WeightModule>(t_->pair().base, ModuleKind::SimpleHW, lambda1_, h);
    gen_ = first_->extremal();
  }
  first_atomic_ = std::make_shared<AtomicModule>(first_);
  auto second = atomic(t_->pair().base, ModuleKind::SimpleHW, t_->lambda(), full_height(b, t_->lambda()));
  target_ = std::make_shared<TensorProduct>(first_atomic_, second);
}

const Quotient::Action& Quotient::action(const Deg& nu1) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = action_.find(nu1); it != action_.end()) return it->second;
  const auto& bs = t_->base().at(nu1);
  Deg key = first_->lowest() ? gen_.nu - nu1 : gen_.nu + nu1;
  int rows = nonneg(key) && trace(key) <= first_->depth() ? first_->dim(key) : 0;
  Action a{key, RatMat(rows, static_cast<int>(bs.size()))};
  for (size_t k = 0; k < bs.size(); ++k) {
    ModuleVector m = first_->act_minus(bs[k].vec, gen_);
    for (int r = 0; r < rows; ++r) a.map(r, static_cast<int>(k)) = m.c.size() ? m.c(r) : RationalFn();
  }
  return action_.emplace(nu1, std::move(a)).first->second;
}

void Quotient::build(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (kernel_.count(nu)) return;
  const CanonicalBasis& tb = t_->thick();
  const FAlgebra& ft = tb.algebra();
  const std::vector<int>& sub = t_->cb(nu);
  const Deg top = t_->lift(nu);
  const int n = static_cast<int>(tb.at(top).size());
  const int rank_t = ft.rank();

  std::vector<RatVec> rows;
  for (const Deg& mu : below(nu)) {
    if (trace(mu) == 0) continue;
    const Action& a = action(mu);
    const auto& bs = t_->base().at(mu);
    std::vector<int> ann;
    for (int k = 0; k < static_cast<int>(bs.size()); ++k)
      if (a.map.rows() == 0 || all_zero(a.map.col(k))) ann.push_back(k);
    int expected = static_cast<int>(bs.size()) - (a.map.rows() ? qcb::rank(RatMat(a.map.transpose())) : 0);
    if (static_cast<int>(ann.size()) != expected)
      throw CBFailure("annihilator at " + deg_str(mu) + " is not spanned by canonical basis elements");
    if (ann.empty()) continue;
    const WeightSpace& ws = ft.space(top - pad(mu, rank_t));
    for (int k : ann) {
      FVector av = t_->embed(bs[static_cast<size_t>(k)].vec);
      for (int p = 0; p < ws.dim(); ++p)
        rows.push_back(tb.coords(ft.multiply(ft.word(ws.words[static_cast<size_t>(ws.pivots[static_cast<size_t>(p)])]), av)));
    }
  }
  std::vector<int> kern, rest;
  int kdim = 0;
  if (rows.empty()) {
    for (int k = 0; k < static_cast<int>(sub.size()); ++k) rest.push_back(k);
  } else {
    RatMat ideal(static_cast<int>(rows.size()), n);
    for (size_t r = 0; r < rows.size(); ++r) ideal.row(static_cast<int>(r)) = rows[r].transpose();
    SpanSolver span(ideal);
    RatMat both(span.rank() + static_cast<int>(sub.size()), n);
    for (int r = 0; r < span.rank(); ++r) both.row(r) = ideal.row(span.rows()[static_cast<size_t>(r)]);
    for (size_t k = 0; k < sub.size(); ++k) {
      RatVec e = zeros(n);
      e(sub[k]) = RationalFn(1);
      both.row(span.rank() + static_cast<int>(k)) = e.transpose();
      (span.contains(e) ? kern : rest).push_back(static_cast<int>(k));
    }
    kdim = span.rank() + static_cast<int>(sub.size()) - qcb::rank(both);
  }
  kernel_[nu] = std::move(kern);
  basis_[nu] = std::move(rest);
  kernel_dim_[nu] = kdim;
}

const std::vector<int>& Quotient::kernel(const Deg& nu) const {
  build(nu);
  return kernel_.at(nu);
}

const std::vector<int>& Quotient::basis(const Deg& nu) const {
  build(nu);
  return basis_.at(nu);
}

int Quotient::kernel_dim(const Deg& nu) const {
  build(nu);
  return kernel_dim_.at(nu);
}

RatVec Quotient::project(const ModuleVector& z) const {
  RatVec c = t_->sub_coords(z);
  const std::vector<int>& bs = basis(t_->component(z.nu));
  RatVec out(static_cast<int>(bs.size()));
  for (size_t j = 0; j < bs.size(); ++j) out(static_cast<int>(j)) = c(bs[j]);
  return out;
}

ModuleVector Quotient::section(const Deg& nu, const RatVec& q) const {
  ModuleVector z = t_->ambient().zero(t_->lift(nu));
  const std::vector<int>& bs = basis(nu);
  for (size_t j = 0; j < bs.size(); ++j) z += q(static_cast<int>(j)) * t_->element(nu, bs[j]);
  return z;
}

BVec Quotient::a_id(const BVec& t) const {
  BVec out;
  const TensorProduct& src = t_->tensor();
  const AtomicModule& second = t_->simple();
  for (const auto& [key, c] : t.parts) {
    const TensorProduct::Block& bl = src.block(key);
    for (int j = 0; j < c.size(); ++j) {
      if (c(j).is_zero()) continue;
      const TensorProduct::Pure& p = bl.basis[static_cast<size_t>(j)];
      const Action& a = action(p.ka);
      if (a.map.rows() == 0) continue;
      ModuleVector m{a.key, a.map.col(p.a)};
      if (m.is_zero()) continue;
      out += c(j) * target_->tensor(first_atomic_->from(m), second.unit(p.kb, p.b));
    }
  }
  out.prune();
  return out;
}

BVec Quotient::phi_bar(const Deg& nu, const RatVec& q) const { return a_id(t_->phi(section(nu, q))); }

const RatMat& Quotient::phi_bar_matrix(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = phi_bar_.find(nu); it != phi_bar_.end()) return it->second;
  Key key = t_->block_key(nu);
  const int rows = target_->has_block(key) ? target_->dim(key) : 0;
  RatMat m(rows, dim(nu));
  for (int j = 0; j < dim(nu); ++j) {
    RatVec e = zeros(dim(nu));
    e(j) = RationalFn(1);
    m.col(j) = block_coords(*target_, phi_bar(nu, e), key);
  }
  return phi_bar_.emplace(nu, std::move(m)).first->second;
}

RatVec Quotient::psi_bar(const Deg& nu, const BVec& t) const {
  Key key = t_->block_key(nu);
  auto u = solve_columns(phi_bar_matrix(nu), block_coords(*target_, t, key));
  if (!u) throw std::domain_error("vector outside the Demazure part of the target");
  return *u;
}

bool Quotient::E_allowed(int i) const {
  return kind_ == QuotientKind::SimpleHW || descent(t_->base().algebra().datum().cartan, i, w_);
}

RatVec Quotient::E(int i, const Deg& nu, const RatVec& q) const {
  if (!E_allowed(i)) throw std::invalid_argument("E_i does not act: i is not a descent of w");
  Deg lower = nu - unit_deg(static_cast<int>(nu.size()), i);
  if (!nonneg(lower)) return RatVec(0);
  return project(t_->ambient().E(i, section(nu, q)));
}

QuotientReport certify(const Quotient& q) {
  QuotientReport rep;
  const Thickening& t = q.thickening();
  const int rank = t.base().algebra().rank();
  for (const Deg& nu : t.degrees()) {
    Key key = t.block_key(nu);
    for (int k : q.kernel(nu)) {
      ++rep.kernel_checked;
      if (!q.a_id(t.phi(t.element(nu, k))).is_zero())
        rep.failures.push_back("kernel element " + t.label(nu, k) + " survives (a (x) Id) phi");
    }
    if (q.kernel_dim(nu) == static_cast<int>(q.kernel(nu).size()))
      ++rep.spans_checked;
    else
      rep.failures.push_back("kernel at " + deg_str(nu) + " is not spanned by canonical basis elements");

    // Dimension of (V_w (x) Lambda)_nu.
    int expected = 0;
    for (const Deg& nu1 : below(nu)) {
      int d2 = t.simple().dim(nu - nu1);
      if (d2 == 0) continue;
      const auto& bs = t.base().at(nu1);
      std::vector<RatVec> cols;
      for (const CBElement& b : bs) {
        ModuleVector m = q.first().act_minus(b.vec, q.generator());
        if (m.c.size()) cols.push_back(m.c);
      }
      int r = 0;
      if (!cols.empty()) {
        RatMat m(static_cast<int>(cols.size()), static_cast<int>(cols[0].size()));
        for (size_t c = 0; c < cols.size(); ++c) m.row(static_cast<int>(c)) = cols[c].transpose();
        r = qcb::rank(m);
      }
      expected += r * d2;
    }
    if (expected != q.dim(nu)) rep.failures.push_back("quotient dimension mismatch at " + deg_str(nu));

    std::vector<DiamondElement> diamonds =
        q.target().has_block(key) ? q.target().diamond_basis(key) : std::vector<DiamondElement>{};
    std::vector<bool> used(diamonds.size(), false);
    const std::vector<int>& bs = q.basis(nu);
    for (size_t j = 0; j < bs.size(); ++j) {
      ++rep.basis_checked;
      RatVec e = zeros(q.dim(nu));
      e(static_cast<int>(j)) = RationalFn(1);
      BVec img = q.phi_bar(nu, e);
      bool found = false;
      for (size_t d = 0; d < diamonds.size() && !found; ++d)
        if (!used[d] && diamonds[d].pure == img) {
          used[d] = found = true;
          rep.matches.push_back({t.label(nu, bs[j]), diamonds[d].label});
        }
      if (!found) rep.failures.push_back("image of " + t.label(nu, bs[j]) + " is not a diamond");
      for (int i = 0; i < rank; ++i) {
        if (!q.E_allowed(i) || nu[static_cast<size_t>(i)] == 0) continue;
        Deg lower = nu - unit_deg(rank, i);
        BVec lhs = q.phi_bar(lower, q.E(i, nu, e));
        BVec rhs = q.target().pure_E(i, img);
        if (lhs != rhs) rep.failures.push_back("E_" + std::to_string(i) + " does not descend compatibly at " + deg_str(nu));
      }
    }
    for (int i = 0; i < rank; ++i) {
      if (!q.E_allowed(i) || nu[static_cast<size_t>(i)] == 0) continue;
      for (int k : q.kernel(nu)) {
        ModuleVector ez = t.ambient().E(i, t.element(nu, k));
        RatVec c = t.sub_coords(ez);
        Deg lower = nu - unit_deg(rank, i);
        for (int b : q.basis(lower))
          if (!c(b).is_zero()) rep.failures.push_back("E_" + std::to_string(i) + " leaves the kernel at " + deg_str(nu));
      }
    }
  }
  return rep;
}

ThickTower iterate_tower(const RootDatum& d, const std::vector<IntVec>& lambdas, int bound) {
  ThickTower out;
  out.tower = iterate(d, lambdas);
  for (const auto& level : out.tower.levels) out.cbs.push_back(std::make_shared<CanonicalBasis>(make_falgebra(*level, bound)));
  return out;
}

}  // namespace qcb
