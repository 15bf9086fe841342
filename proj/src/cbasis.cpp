#include "qcb/cbasis.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>

namespace qcb {

namespace {

using Expansion = std::map<DividedWord, LaurentPoly>;

Expansion to_map(const std::vector<std::pair<DividedWord, LaurentPoly>>& e) { return Expansion(e.begin(), e.end()); }

std::vector<std::pair<DividedWord, LaurentPoly>> to_list(const Expansion& e) {
  std::vector<std::pair<DividedWord, LaurentPoly>> out;
  for (const auto& [w, c] : e)
    if (!c.is_zero()) out.emplace_back(w, c);
  return out;
}

// theta_i^{(n)} times the expansion, merging a leading block on i.
Expansion prepend(int i, int n, const Expansion& e) {
  Expansion out;
  for (const auto& [w, c] : e) {
    DividedWord u;
    LaurentPoly k = c;
    if (!w.blocks.empty() && w.blocks[0].first == i) {
      int a = w.blocks[0].second;
      k *= quantum_binomial(n + a, n);
      u.blocks.emplace_back(i, n + a);
      u.blocks.insert(u.blocks.end(), w.blocks.begin() + 1, w.blocks.end());
    } else {
      u.blocks.emplace_back(i, n);
      u.blocks.insert(u.blocks.end(), w.blocks.begin(), w.blocks.end());
    }
    out[u] += k;
  }
  return out;
}

void axpy(Expansion& e, const LaurentPoly& c, const Expansion& x) {
  for (const auto& [w, k] : x) {
    LaurentPoly& t = e[w];
    t -= c * k;
  }
  for (auto it = e.begin(); it != e.end();) it = it->second.is_zero() ? e.erase(it) : std::next(it);
}

std::string label(const FAlgebra& f, const CBElement& b) {
  return "b" + deg_str(b.nu) + "#" + std::to_string(b.index) + " = " + f.vector_str(b.vec);
}

}  // namespace

void PositivityReport::record(const RationalFn& x, Lattice kind, const std::string& where) {
  ++checked;
  if (!x.is_zero() && x.is_laurent()) {
    max_pos_deg = std::max(max_pos_deg, x.num().high());
    min_neg_deg = std::min(min_neg_deg, x.num().low());
  }
  if (!lattice_test(x, kind)) violations.push_back({where, x});
}

void PositivityReport::merge(const PositivityReport& o) {
  checked += o.checked;
  max_pos_deg = std::max(max_pos_deg, o.max_pos_deg);
  min_neg_deg = std::min(min_neg_deg, o.min_neg_deg);
  violations.insert(violations.end(), o.violations.begin(), o.violations.end());
}

bool sign_normalized(const FVector& x) {
  for (int k = 0; k < x.s.size(); ++k) {
    const RationalFn& c = x.s(k);
    if (c.is_zero()) continue;
    return c.num().lead().sign() > 0;
  }
  return false;
}

CanonicalBasis::CanonicalBasis(std::shared_ptr<const FAlgebra> f) : f_(std::move(f)) {}

const std::vector<CBElement>& CanonicalBasis::at(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = cache_.find(nu); it != cache_.end()) return it->second;
  auto b = compute(nu, false);
  return cache_.emplace(nu, std::move(b)).first->second;
}

std::vector<CBElement> CanonicalBasis::recompute_reversed(const Deg& nu) const { return compute(nu, true); }

std::vector<CBElement> CanonicalBasis::compute(const Deg& nu, bool reversed) const {
  const FAlgebra& f = *f_;
  const int n = f.rank();
  const int dim = f.dim(nu);
  if (trace(nu) == 0) {
    CBElement one;
    one.nu = nu;
    one.vec = f.one();
    one.eps.assign(static_cast<size_t>(n), 0);
    one.eps_sigma = one.eps;
    one.expansion = {{DividedWord{}, LaurentPoly(1)}};
    return {one};
  }

  struct Acc {
    FVector vec;
    Expansion exp;
  };
  std::vector<CBElement> found;
  auto locate = [&](const FVector& x) {
    for (size_t k = 0; k < found.size(); ++k)
      if (found[k].vec == x) return static_cast<int>(k);
    return -1;
  };

  std::vector<int> gens(static_cast<size_t>(n));
  std::iota(gens.begin(), gens.end(), 0);
  if (reversed) std::reverse(gens.begin(), gens.end());

  for (int i : gens) {
    if (nu[i] == 0) continue;
    std::vector<Acc> accepted;
    RatMat ginv;
    for (int level = nu[i]; level >= 1; --level) {
      const auto& lower = at(nu - unit_deg(n, i, level));
      std::vector<int> order(lower.size());
      std::iota(order.begin(), order.end(), 0);
      if (reversed) std::reverse(order.begin(), order.end());
      std::vector<Acc> fresh;
      for (int k : order) {
        const CBElement& bp = lower[k];
        if (bp.eps[i] != 0) continue;
        Acc x{f.divided_left(i, level, bp.vec), prepend(i, level, to_map(bp.expansion))};
        if (!accepted.empty()) {
          const int m = static_cast<int>(accepted.size());
          RatVec g(m);
          for (int a = 0; a < m; ++a) g(a) = f.gram_form(x.vec, accepted[a].vec);
          RatVec h = ginv * g;
          for (int a = 0; a < m; ++a) {
            LaurentPoly c;
            try {
              c = bar_invariant_head(h(a));
            } catch (const std::exception& e) {
              throw CBFailure("correction coefficient is not integral at " + deg_str(nu) + ": " + h(a).str());
            }
            if (c.is_zero()) continue;
            x.vec -= RationalFn(c) * accepted[a].vec;
            axpy(x.exp, c, accepted[a].exp);
          }
        }
        fresh.push_back(std::move(x));
      }
      for (Acc& x : fresh) {
        int at_k = locate(x.vec);
        if (at_k < 0) {
          CBElement b;
          b.nu = nu;
          b.index = static_cast<int>(found.size());
          b.vec = x.vec;
          b.eps.assign(static_cast<size_t>(n), 0);
          b.expansion = to_list(x.exp);
          found.push_back(std::move(b));
          at_k = static_cast<int>(found.size()) - 1;
        }
        found[at_k].eps[i] = level;
        accepted.push_back(std::move(x));
      }
      if (!fresh.empty()) {
        const int m = static_cast<int>(accepted.size());
        RatMat g(m, m);
        for (int a = 0; a < m; ++a)
          for (int b = a; b < m; ++b) g(a, b) = g(b, a) = f.gram_form(accepted[a].vec, accepted[b].vec);
        auto inv = inverse(g);
        if (!inv) throw CBFailure("accepted elements are dependent at " + deg_str(nu));
        ginv = *inv;
      }
    }
  }

  if (static_cast<int>(found.size()) != dim)
    throw CBFailure("found " + std::to_string(found.size()) + " canonical basis elements at " + deg_str(nu) +
                    " but dim = " + std::to_string(dim));
  for (CBElement& b : found) {
    int s = locate(f.sigma(b.vec));
    if (s < 0) throw CBFailure("sigma(b) is not in the basis at " + deg_str(nu));
    b.eps_sigma = found[s].eps;
  }

  // Invariants.
  for (const CBElement& b : found) {
    if (f.bar(b.vec) != b.vec) throw CBFailure("not bar invariant: " + label(f, b));
    FVector re = f.zero(nu);
    for (const auto& [w, c] : b.expansion) re += RationalFn(c) * f.divided(w);
    if (re != b.vec) throw CBFailure("divided-word expansion is inconsistent: " + label(f, b));
  }
  for (size_t a = 0; a < found.size(); ++a)
    for (size_t b = a; b < found.size(); ++b) {
      RationalFn g = f.gram_form(found[a].vec, found[b].vec);
      if (a == b) g -= RationalFn(1);
      if (!in_vinvA(g)) throw CBFailure("not almost orthonormal: " + label(f, found[a]) + " and " + label(f, found[b]));
    }
  return found;
}

void CanonicalBasis::verify(const Deg& nu) const {
  const FAlgebra& f = *f_;
  const auto& bs = at(nu);
  if (static_cast<int>(bs.size()) != f.dim(nu)) throw CBFailure("cardinality mismatch at " + deg_str(nu));
  for (const CBElement& b : bs) {
    if (f.bar(b.vec) != b.vec) throw CBFailure("not bar invariant: " + label(f, b));
    for (int i = 0; i < f.rank(); ++i)
      if (epsilon(i, b, Side::Left) != b.eps[i] || epsilon(i, b, Side::Right) != b.eps_sigma[i])
        throw CBFailure("string data disagree with image membership: " + label(f, b));
  }
  for (const CBElement& a : bs)
    for (const CBElement& b : bs) {
      RationalFn g = f.gram_form(a.vec, b.vec) - RationalFn(a.index == b.index ? 1 : 0);
      if (!in_vinvA(g)) throw CBFailure("not almost orthonormal at " + deg_str(nu));
    }
}

int CanonicalBasis::find(const FVector& x) const {
  const auto& bs = at(x.nu);
  for (const CBElement& b : bs)
    if (b.vec == x) return b.index;
  return -1;
}

int CanonicalBasis::epsilon(int i, const CBElement& b, Side side) const {
  const FAlgebra& f = *f_;
  int best = 0;
  for (int level = 1; level <= b.nu[i]; ++level) {
    Deg rest = b.nu - unit_deg(f.rank(), i, level);
    const WeightSpace& ws = f.space(rest);
    RatMat rows(ws.dim(), f.word_list(b.nu).nwords());
    for (int p = 0; p < ws.dim(); ++p) {
      FVector y = f.word(ws.words[ws.pivots[p]]);
      rows.row(p) = (side == Side::Left ? f.divided_left(i, level, y) : f.divided_right(y, i, level)).s.transpose();
    }
    if (!SpanSolver(rows).contains(b.vec.s)) break;
    best = level;
  }
  return best;
}

std::vector<int> CanonicalBasis::b_lambda(const std::vector<int>& lambda, const Deg& nu) const {
  std::vector<int> out;
  for (const CBElement& b : at(nu)) {
    bool ok = true;
    for (size_t i = 0; i < lambda.size(); ++i) ok = ok && b.eps_sigma[i] <= lambda[i];
    if (ok) out.push_back(b.index);
  }
  return out;
}

const RatMat& CanonicalBasis::pivot_inverse(const Deg& nu) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (auto it = inv_.find(nu); it != inv_.end()) return it->second;
  const auto& bs = at(nu);
  const int d = static_cast<int>(bs.size());
  RatMat ct(d, d);  // ct(q, b) = s_q(b)
  for (int b = 0; b < d; ++b) ct.col(b) = f_->pivot_values(bs[b].vec);
  auto inv = inverse(ct);
  if (!inv) throw CBFailure("canonical basis is not a basis at " + deg_str(nu));
  return inv_.emplace(nu, *inv).first->second;
}

RatVec CanonicalBasis::coords_from_pivots(const Deg& nu, const RatVec& pv) const { return pivot_inverse(nu) * pv; }

RatVec CanonicalBasis::coords(const FVector& x) const { return coords_from_pivots(x.nu, f_->pivot_values(x)); }

RatVec CanonicalBasis::product_coords(const CBElement& a, const CBElement& b) const {
  Deg nu = a.nu + b.nu;
  return coords_from_pivots(nu, f_->multiply_at(a.vec, b.vec, f_->space(nu).pivots));
}

RatMat CanonicalBasis::comult_coords(const CBElement& b, const Deg& nu1) const {
  Deg nu2 = b.nu - nu1;
  RatMat m = f_->split_values(b.vec, nu1, f_->space(nu1).pivots, f_->space(nu2).pivots);
  return pivot_inverse(nu1) * m * pivot_inverse(nu2).transpose();
}

std::string CanonicalBasis::expansion_str(const CBElement& b) const {
  std::string s;
  for (const auto& [w, c] : b.expansion) {
    if (!s.empty()) s += " + ";
    std::string ws = w.str(f_->datum().cartan);
    s += c.is_one() ? ws : "(" + c.str() + ")*" + ws;
  }
  return s.empty() ? "0" : s;
}

PositivityReport verify_structure_positivity(const CanonicalBasis& cb, const Deg& nu1, const Deg& nu2) {
  PositivityReport rep;
  const auto& b1 = cb.at(nu1);
  const auto& b2 = cb.at(nu2);
  Deg nu = nu1 + nu2;
  for (const CBElement& a : b1)
    for (const CBElement& b : b2) {
      RatVec c = cb.product_coords(a, b);
      for (int k = 0; k < c.size(); ++k)
        rep.record(c(k), Lattice::Nvv,
                   "mult " + deg_str(nu1) + "#" + std::to_string(a.index) + " * " + deg_str(nu2) + "#" +
                       std::to_string(b.index) + " -> " + deg_str(nu) + "#" + std::to_string(k));
    }
  for (const CBElement& b : cb.at(nu)) {
    RatMat c = cb.comult_coords(b, nu1);
    for (int p = 0; p < c.rows(); ++p)
      for (int q = 0; q < c.cols(); ++q)
        rep.record(c(p, q), Lattice::Nvv,
                   "comult " + deg_str(nu) + "#" + std::to_string(b.index) + " -> " + deg_str(nu1) + "#" +
                       std::to_string(p) + " (x) " + deg_str(nu2) + "#" + std::to_string(q));
  }
  return rep;
}

std::vector<CBElement> brute_force_cb(const FAlgebra& f, const Deg& nu) {
  const int d = f.dim(nu);
  if (d > 3) throw std::invalid_argument("brute force oracle needs dim f_nu <= 3");
  const int n = f.rank();
  const WeightSpace& ws = f.space(nu);

  // Pick d divided words spanning the integral form: every divided word must
  // have Laurent coordinates over them.
  std::vector<DividedWord> all = divided_words(nu);
  std::vector<RatVec> pv;
  for (const DividedWord& w : all) pv.push_back(f.pivot_values(f.divided(w)));
  std::vector<int> pick;
  RatMat basis_inv;
  std::function<bool(size_t)> choose = [&](size_t from) -> bool {
    if (static_cast<int>(pick.size()) == d) {
      RatMat m(ws.dim(), d);
      for (int k = 0; k < d; ++k) m.col(k) = pv[pick[k]];
      auto inv = inverse(m);
      if (!inv) return false;
      for (const RatVec& x : pv) {
        RatVec c = *inv * x;
        for (int k = 0; k < d; ++k)
          if (!c(k).is_laurent()) return false;
      }
      basis_inv = *inv;
      return true;
    }
    for (size_t k = from; k < all.size(); ++k) {
      pick.push_back(static_cast<int>(k));
      if (choose(k + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  if (!choose(0)) throw CBFailure("no divided-word integral basis at " + deg_str(nu));

  std::vector<FVector> gens;
  for (int k : pick) gens.push_back(f.divided(all[k]));
  RatMat g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) g(a, b) = f.gram_form(gens[a], gens[b]);

  struct Window {
    int k, c;
  };
  const Window windows[] = {{0, 1}, {1, 1}, {0, 2}, {1, 2}, {2, 1}, {2, 2}};
  std::vector<RatVec> sols;
  for (Window win : windows) {
    const int top = 2 * win.k + 8;
    // Series of the gram entries from v^top down to v^(-2k).
    std::vector<std::vector<long long>> series(static_cast<size_t>(d * d));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (g(a, b).degree() > top) throw CBFailure("gram entry degree outside the oracle window");
        auto e = expansion_at_infinity(g(a, b), top, -2 * win.k);
        if (!e) throw CBFailure("gram entry has a non-integral expansion");
        auto& s = series[static_cast<size_t>(a * d + b)];
        for (const Integer& x : *e) {
          if (!x.is_small()) throw CBFailure("gram series coefficient overflows int64");
          s.push_back(x.small());
        }
      }
    // Each coefficient is a_0 + sum_j a_j (v^j + v^-j) with |a| <= c.
    const int per = win.k + 1;
    const int nvars = per * d;
    std::vector<int> a(static_cast<size_t>(nvars), -win.c);
    sols.clear();
    for (;;) {
      // Coefficient polynomials on exponents [-k, k].
      std::vector<std::vector<long long>> poly(static_cast<size_t>(d), std::vector<long long>(static_cast<size_t>(2 * win.k + 1), 0));
      bool nonzero = false;
      for (int t = 0; t < d; ++t) {
        auto& p = poly[static_cast<size_t>(t)];
        p[static_cast<size_t>(win.k)] = a[static_cast<size_t>(t * per)];
        for (int j = 1; j <= win.k; ++j) {
          p[static_cast<size_t>(win.k + j)] += a[static_cast<size_t>(t * per + j)];
          p[static_cast<size_t>(win.k - j)] += a[static_cast<size_t>(t * per + j)];
        }
        for (long long x : p) nonzero = nonzero || x != 0;
      }
      if (nonzero) {
        // Coefficients of sum c_a c_b g_ab at exponents 0..top.
        bool good = true;
        for (int e = top; e >= 0 && good; --e) {
          long long acc = 0;
          for (int s = 0; s < d; ++s)
            for (int t = 0; t < d; ++t) {
              const auto& ps = poly[static_cast<size_t>(s)];
              const auto& pt = poly[static_cast<size_t>(t)];
              const auto& ser = series[static_cast<size_t>(s * d + t)];
              for (int x = -win.k; x <= win.k; ++x) {
                if (!ps[static_cast<size_t>(x + win.k)]) continue;
                for (int y = -win.k; y <= win.k; ++y) {
                  if (!pt[static_cast<size_t>(y + win.k)]) continue;
                  int ge = e - x - y;  // needed gram exponent
                  if (ge > top || ge < -2 * win.k) continue;
                  acc += ps[static_cast<size_t>(x + win.k)] * pt[static_cast<size_t>(y + win.k)] * ser[static_cast<size_t>(top - ge)];
                }
              }
            }
          good = (acc == (e == 0 ? 1 : 0));
        }
        if (good) {
          RatVec c(d);
          for (int t = 0; t < d; ++t) {
            LaurentPoly p;
            for (int x = -win.k; x <= win.k; ++x) p += LaurentPoly::monomial(poly[static_cast<size_t>(t)][static_cast<size_t>(x + win.k)], x);
            c(t) = RationalFn(p);
          }
          FVector x = f.zero(nu);
          for (int t = 0; t < d; ++t) x += c(t) * gens[t];
          if (sign_normalized(x)) sols.push_back(c);
        }
      }
      int pos = 0;
      while (pos < nvars && a[static_cast<size_t>(pos)] == win.c) a[static_cast<size_t>(pos++)] = -win.c;
      if (pos == nvars) break;
      ++a[static_cast<size_t>(pos)];
    }
    if (static_cast<int>(sols.size()) >= d) break;
  }
  if (static_cast<int>(sols.size()) != d)
    throw CBFailure("oracle window gave " + std::to_string(sols.size()) + " solutions at " + deg_str(nu) + ", dim " +
                    std::to_string(d));

  std::vector<CBElement> out;
  for (const RatVec& c : sols) {
    CBElement b;
    b.nu = nu;
    b.index = static_cast<int>(out.size());
    b.vec = f.zero(nu);
    for (int t = 0; t < d; ++t) {
      b.vec += c(t) * gens[t];
      if (!c(t).is_zero()) b.expansion.emplace_back(all[pick[t]], c(t).laurent());
    }
    b.eps.assign(static_cast<size_t>(n), 0);
    b.eps_sigma = b.eps;
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace qcb
