// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "qcb/thicken.hpp"
#include "qcb/verify.hpp"

using namespace qcb;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

IntVec wt(std::initializer_list<int> xs) {
  IntVec x(static_cast<int>(xs.size()));
  int k = 0;
  for (int a : xs) x(k++) = a;
  return x;
}

std::shared_ptr<CanonicalBasis> cbasis(const std::string& name, int bound) {
  return std::make_shared<CanonicalBasis>(make_falgebra(builtin_datum(name), bound));
}

FVector monomial(const FAlgebra& f, std::vector<std::pair<int, int>> blocks) {
  DividedWord w;
  for (auto [g, e] : blocks)
    if (e > 0) w.blocks.push_back({g, e});
  return w.blocks.empty() ? f.one() : f.divided(w);
}

bool same_set(const std::vector<FVector>& xs, const std::vector<CBElement>& bs) {
  if (xs.size() != bs.size()) return false;
  for (const FVector& x : xs) {
    bool found = false;
    for (const CBElement& b : bs) found = found || b.vec == x;
    if (!found) return false;
  }
  return true;
}

RationalFn V(int e) { return RationalFn(LaurentPoly::v(e)); }

Outcome crit1() {
  Outcome o;
  auto cb = cbasis("a1", 8);
  const FAlgebra& f = cb->algebra();
  for (int k = 0; k <= 8; ++k) {
    const auto& bs = cb->at({k});
    o.expect(bs.size() == 1 && bs[0].vec == monomial(f, {{0, k}}), "B at " + std::to_string(k) + "i");
  }
  o.detail = o.pass ? "B_ki = {theta^(k)}, k <= 8" : o.detail;
  return o;
}

Outcome crit2() {
  Outcome o;
  auto cb = cbasis("a1-thick", 8);
  const FAlgebra& f = cb->algebra();
  int weights = 0, elements = 0;
  for (int t = 0; t <= 8; ++t)
    for (const Deg& nu : f.weights_of_trace(t)) {
      // theta_i^(p) theta_i'^(q) theta_i^(r) and theta_i'^(r) theta_i^(q) theta_i'^(p), q >= p + r,
      // merged at q = p + r.
      std::vector<FVector> xs;
      auto add = [&](const FVector& x) {
        for (const FVector& y : xs)
          if (y == x) return;
        xs.push_back(x);
      };
      const int a = nu[0], b = nu[1];
      for (int p = 0; p <= a; ++p)
        if (b >= a) add(monomial(f, {{0, p}, {1, b}, {0, a - p}}));
      for (int r = 0; r <= b; ++r)
        if (a >= b) add(monomial(f, {{1, r}, {0, a}, {1, b - r}}));
      o.expect(same_set(xs, cb->at(nu)), "monomial set differs at " + deg_str(nu));
      ++weights;
      elements += static_cast<int>(xs.size());
    }
  if (o.pass) o.detail = std::to_string(weights) + " weights, " + std::to_string(elements) + " elements";
  return o;
}

Outcome crit3() {
  Outcome o;
  int tested = 0;
  for (auto [name, top] : {std::pair<const char*, int>{"a2", 6}, {"a2-thick", 5}}) {
    auto cb = cbasis(name, top);
    const FAlgebra& f = cb->algebra();
    for (int t = 1; t <= top; ++t)
      for (const Deg& nu : f.weights_of_trace(t)) {
        if (f.dim(nu) > 3) continue;
        std::vector<FVector> xs;
        for (const CBElement& b : brute_force_cb(f, nu)) xs.push_back(b.vec);
        o.expect(same_set(xs, cb->at(nu)), std::string(name) + " oracle differs at " + deg_str(nu));
        ++tested;
      }
  }
  if (o.pass) o.detail = std::to_string(tested) + " weights with dim <= 3 (a2 tr <= 6, a2-thick tr <= 5)";
  return o;
}

// The rank one closed form for E^(k) xi_-m <> F^(l) eta_n on the given branch.
BVec closed_form(const TensorProduct& t, int k, int l, int m, int n, bool first_branch) {
  BVec out;
  for (int s = 0; s <= std::min(k, l); ++s) {
    int e;
    LaurentPoly num, den = quantum_factorial(s);
    if (first_branch) {
      e = s * (k - m - s);
      num = quantum_factorial(n - l + s);
      den *= quantum_factorial(n - l);
    } else {
      e = s * (l - n - s);
      num = quantum_factorial(m - k + s);
      den *= quantum_factorial(m - k);
    }
    out += V(e) * RationalFn(num) / RationalFn(den) * t.pure({k - s}, 0, {l - s}, 0);
  }
  return out;
}

Outcome crit4() {
  Outcome o;
  auto cb = cbasis("a1", 9);
  int count = 0;
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n) {
      TensorProduct t(atomic(cb, ModuleKind::SimpleLW, wt({m}), m), atomic(cb, ModuleKind::SimpleHW, wt({n}), n));
      for (int k = 0; k <= m; ++k)
        for (int l = 0; l <= n; ++l) {
          const BVec d = t.diamond({k}, 0, {l}, 0).pure;
          const std::string at = "m=" + std::to_string(m) + " n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                 " l=" + std::to_string(l);
          if (k - l <= m - n) o.expect(d == closed_form(t, k, l, m, n, true), "first branch at " + at);
          if (k - l >= m - n) o.expect(d == closed_form(t, k, l, m, n, false), "second branch at " + at);
          ++count;
        }
    }
  if (o.pass) o.detail = std::to_string(count) + " diamonds, both branches";
  return o;
}

const ThickPair& a1_pair() {
  static ThickPair p = thicken_pair(builtin_datum("a1"), 8, 10);
  return p;
}

const ThickPair& a2_pair() {
  static ThickPair p = thicken_pair(builtin_datum("a2"), 6, 6);
  return p;
}

Outcome crit5() {
  Outcome o;
  int matched = 0;
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      auto t = std::make_shared<Thickening>(a1_pair(), wt({m}), wt({n}), m + n);
      const FAlgebra& ft = t->thick().algebra();
      Quotient q(t, QuotientKind::DemazureLW, wt({m}), WeylWord{{0}});
      // Every quotient basis element is hit exactly once.
      std::map<Deg, std::vector<int>> hit;
      for (int k = 0; k <= m; ++k)
        for (int l = 0; l <= n; ++l) {
          const FVector z = k - l <= m - n ? monomial(ft, {{1, n - l}, {0, m - k + l}, {1, l}})
                                           : monomial(ft, {{0, l}, {1, n}, {0, m - k}});
          const Deg nu{m - k + l};
          const std::string at = "m=" + std::to_string(m) + " n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                 " l=" + std::to_string(l);
          const int idx = t->thick().find(z);
          const auto& sub = t->cb(nu);
          auto it = std::find(sub.begin(), sub.end(), idx);
          if (idx < 0 || it == sub.end()) {
            o.fail("monomial is not a subspace basis element at " + at);
            continue;
          }
          const int pos = static_cast<int>(it - sub.begin());
          const auto& basis = q.basis(nu);
          auto qb = std::find(basis.begin(), basis.end(), pos);
          o.expect(qb != basis.end(), "monomial lies in the kernel at " + at);
          hit[nu].push_back(pos);
          o.expect(q.phi_bar(nu, q.project(t->from_f(z))) == q.target().diamond({k}, 0, {l}, 0).pure,
                   "phi_bar pi differs from the diamond at " + at);
          ++matched;
        }
      for (auto& [nu, v] : hit) {
        std::sort(v.begin(), v.end());
        o.expect(std::adjacent_find(v.begin(), v.end()) == v.end() && v.size() == q.basis(nu).size(),
                 "correspondence is not a bijection at " + deg_str(nu));
      }
      QuotientReport rep = certify(q);
      o.expect(rep.ok(), rep.failures.empty() ? "certify" : rep.failures[0]);
    }
  int bij = 0;
  for (int zeta = -3; zeta <= 3; ++zeta)
    for (int lambda = 0; lambda <= 3; ++lambda) {
      Thickening t(a1_pair(), wt({zeta}), wt({lambda}), 3);
      BijectionReport rep = cb_bijection_check(t);
      o.expect(rep.ok(), rep.failures.empty() ? "bijection" : rep.failures[0]);
      bij += rep.checked;
    }
  if (o.pass)
    o.detail = std::to_string(matched) + " quotient elements matched; " + std::to_string(bij) +
               " Verma-variant elements matched";
  return o;
}

// phi psi = id, psi phi = id, F/E intertwining, Psi phi = phi bar, scaled isometry.
void certify_diagram(const Thickening& t, Outcome& o, long& checks) {
  const FAlgebra& ft = t.thick().algebra();
  const RationalFn scale = RationalFn(1) / ft.gram_form(t.theta_lambda(), t.theta_lambda());
  const int rank = t.base().algebra().rank();
  const std::string ctx = "zeta=" + deg_str(weight_key(t.zeta())) + " lambda=" + deg_str(weight_key(t.lambda()));
  for (const Deg& nu : t.degrees()) {
    const std::string at = ctx + " nu=" + deg_str(nu);
    std::vector<ModuleVector> zs;
    for (int k = 0; k < t.dim(nu); ++k) zs.push_back(t.element(nu, k));
    for (size_t a = 0; a < zs.size(); ++a) {
      const ModuleVector& z = zs[a];
      const BVec pz = t.phi(z);
      o.expect(t.psi(pz) == z, "psi phi at " + at);
      for (int i = 0; i < rank; ++i) {
        if (trace(nu) < t.depth()) o.expect(t.phi(t.ambient().F(i, z)) == t.tensor().pure_F(i, pz), "F square at " + at);
        o.expect(t.phi(t.ambient().E(i, z)) == t.tensor().pure_E(i, pz), "E square at " + at);
      }
      // Psi phi(v z) = phi(v^-1 z); z itself is bar invariant.
      o.expect(t.tensor().psi(V(1) * pz) == t.phi(V(-1) * z), "Psi phi = phi bar at " + at);
      const FVector zf = t.ambient().representative(z);
      for (size_t b = 0; b < zs.size(); ++b)
        o.expect(tensor_inner(t.tensor(), pz, t.phi(zs[b])) ==
                     scale * ft.gram_form(zf, t.ambient().representative(zs[b])),
                 "isometry at " + at);
      checks += 4 + static_cast<long>(zs.size());
    }
    const Key key = t.block_key(nu);
    for (int j = 0; j < t.tensor().dim(key); ++j) {
      const BVec e = t.tensor().unit(key, j);
      o.expect(t.phi(t.psi(e)) == e, "phi psi at " + at);
      ++checks;
    }
  }
}

Outcome crit6() {
  Outcome o;
  long checks = 0;
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int zeta : {-m, m}) certify_diagram(Thickening(a1_pair(), wt({zeta}), wt({n}), 4), o, checks);
  for (const IntVec& lambda : {wt({1, 0}), wt({0, 1}), wt({1, 1})})
    for (const IntVec& zeta : {wt({0, 0}), wt({1, -1}), wt({-1, 0})}) {
      const int depth = lambda.sum() == 2 ? 3 : 4;
      certify_diagram(Thickening(a2_pair(), zeta, lambda, depth), o, checks);
    }
  if (o.pass) o.detail = std::to_string(checks) + " identities on spanning sets";
  return o;
}

Outcome crit7() {
  Outcome o;
  std::vector<CheckSpec> suite = {
      {"structure_constants", {{"datum", "a2"}, {"max_tr", 6}}},
      {"structure_constants", {{"datum", "a2-thick"}, {"max_tr", 6}, {"bound", 6}}},
  };
  for (const char* f : {"LW:1 HW:1", "LW:1 HW:2", "LW:2 HW:1", "LW:2 HW:2", "HW:1 HW:1", "HW:1 HW:2", "HW:2 HW:2",
                        "HW:1 HW:1 HW:1", "HW:2 HW:1 HW:1", "HW:1 HW:2 HW:1", "HW:2 HW:2 HW:1"})
    suite.push_back({"transition", {{"datum", "a1"}, {"factors", f}, {"depth", 4}}});
  for (const char* f : {"HW:1", "HW:2", "LW:1", "LW:2", "LW:1 HW:1", "LW:2 HW:2", "HW:1 HW:2"})
    suite.push_back({"b_action", {{"datum", "a1"}, {"factors", f}, {"max_tr", 4}}});
  for (const char* f : {"HW:1,1", "LW:1,1", "HW:1,0", "LW:1,0 HW:0,1"})
    suite.push_back({"b_action", {{"datum", "a2"}, {"factors", f}, {"max_tr", 2}}});
  long coeffs = 0;
  for (const CheckReport& r : run_suite(suite)) {
    o.expect(r.pass, r.check + " " + r.params.dump() + ": " + r.counterexample);
    coeffs += r.checked;
  }
  if (o.pass) o.detail = std::to_string(suite.size()) + " checks, " + std::to_string(coeffs) + " coefficients";
  return o;
}

Outcome crit8() {
  Outcome o;
  auto cb = cbasis("a1", 8);
  Udot u(cb);
  const FAlgebra& f = cb->algebra();
  auto div = [&](int n) { return monomial(f, {{0, n}}); };
  std::vector<DotCB> lifts;
  for (int p = 0; p <= 3; ++p)
    for (int r = 0; p + r <= 3; ++r)
      for (int q = p + r; q <= 3; ++q) {
        const std::string at = "p=" + std::to_string(p) + " q=" + std::to_string(q) + " r=" + std::to_string(r);
        try {
          // E^(p) 1_-q F^(r).
          DotCB a = u.diamond_lift({{p}, 0}, wt({-q + 2 * r}), {{r}, 0});
          o.expect(a.lift == u.monomial(div(p), wt({-q}), div(r)), "E^(p) 1_-q F^(r) at " + at);
          // F^(r) 1_q E^(p), straightened.
          DotCB b = u.diamond_lift({{p}, 0}, wt({q - 2 * p}), {{r}, 0});
          std::vector<Letter> w(static_cast<size_t>(r), F_(0));
          w.insert(w.end(), static_cast<size_t>(p), E_(0));
          const RationalFn den = RationalFn(quantum_factorial(p) * quantum_factorial(r));
          o.expect(b.lift == (RationalFn(1) / den) * u.straighten(w, wt({q - 2 * p})), "F^(r) 1_q E^(p) at " + at);
          if (q == p + r) o.expect(a.lift == b.lift, "identification at " + at);
          for (const DotCB* d : {&a, &b})
            o.expect(u.lift_at(d->label.b1, wt({d->label.zeta[0]}), d->label.b2, d->margin + 1) == d->lift,
                     "lift moves at margin + 1 at " + at);
          lifts.push_back(a);
          if (q != p + r) lifts.push_back(b);
        } catch (const LiftError& e) {
          o.fail(std::string("lift at ") + at + ": " + e.what());
        }
      }
  long products = 0, coeffs = 0;
  for (const DotCB& a : lifts)
    for (const DotCB& b : lifts) {
      UdotPositivity r = u.verify_positivity(a, b);
      if (!r.ok())
        o.fail(r.report.violations.empty() ? r.failures[0]
                                           : r.report.violations[0].where + " = " + r.report.violations[0].value.str());
      ++products;
      coeffs += r.report.checked;
    }
  if (o.pass)
    o.detail = std::to_string(lifts.size()) + " stable lifts, " + std::to_string(products) + " products, " +
               std::to_string(coeffs) + " structure constants";
  return o;
}

Outcome crit9() {
  Outcome o;
  int subsets = 0;
  for (const char* name : {"a1", "a2", "a2-thick"}) {
    const RootDatum d = builtin_datum(name);
    const int n = d.rank();
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> J;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) J.push_back(i);
      o.expect(is_spherical(J, d.cartan), std::string(name) + " subset " + std::to_string(mask) + " not spherical");
      ++subsets;
    }
  }
  const RootDatum aff = builtin_datum("rank2-affine");
  o.expect(!is_spherical({0, 1}, aff.cartan), "affine rank two full set reported spherical");
  if (o.pass) o.detail = std::to_string(subsets) + " finite-type subsets spherical; affine full set not";
  return o;
}

Outcome crit10() {
  Outcome o;
  auto cb = cbasis("a2", 6);
  for (ModuleKind kind : {ModuleKind::SimpleLW, ModuleKind::SimpleHW}) {
    WeightModule m(cb, kind, wt({1, 1}), 6);
    o.expect(extreme_vector(m, {{0, 1, 0}}) == extreme_vector(m, {{1, 0, 1}}), "extreme vectors differ");
  }
  int words = 0, skipped = 0;
  for (const IntVec& lam : {wt({1, 1}), wt({1, 0}), wt({2, 1})})
    for (ModuleKind kind : {ModuleKind::SimpleLW, ModuleKind::SimpleHW})
      for (const WeylWord& w : {WeylWord{{}}, WeylWord{{0}}, WeylWord{{1}}, WeylWord{{0, 1}}, WeylWord{{1, 0}},
                                WeylWord{{0, 1, 0}}}) {
        WeightModule m(cb, kind, lam, 6);
        std::vector<ModuleVector> gen, inter;
        try {
          gen = demazure_cb(m, w);
          inter = demazure_intersection(m, w);
        } catch (const std::invalid_argument&) {
          ++skipped;
          continue;
        }
        bool same = gen.size() == inter.size();
        for (const ModuleVector& x : gen) {
          bool found = false;
          for (const ModuleVector& y : inter) found = found || x == y;
          same = same && found;
        }
        o.expect(same, "Demazure basis differs for lambda=" + deg_str(weight_key(lam)) + " at word length " +
                           std::to_string(w.letters.size()));
        ++words;
      }
  if (o.pass)
    o.detail = "reduced words agree; " + std::to_string(words) + " Demazure bases match, " + std::to_string(skipped) +
               " words rejected by the module";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    double limit;  // seconds; 0 for no limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, 1, crit1}, {2, 30, crit2}, {3, 0, crit3},  {4, 30, crit4},  {5, 0, crit5},
      {6, 0, crit6}, {7, 300, crit7}, {8, 0, crit8}, {9, 0, crit9}, {10, 0, crit10},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && secs > c.limit) {
      std::ostringstream why;
      why << "took " << secs << " s, limit " << c.limit << " s";
      o.fail(why.str());
    }
    char time[32];
    std::snprintf(time, sizeof time, "%.2fs", secs);
    std::cout << "criterion " << c.number << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  [" << time
              << "]" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed ? "acceptance: FAIL (" + std::to_string(failed) + " criteria)" : "acceptance: PASS") << "\n";
  return failed ? 1 : 0;
}
