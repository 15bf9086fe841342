#include <set>

#include "doctest.h"
#include "qcb/cbasis.hpp"

using namespace qcb;

namespace {

std::shared_ptr<CanonicalBasis> cbasis(const char* name, int bound = 8) {
  return std::make_shared<CanonicalBasis>(make_falgebra(builtin_datum(name), bound));
}

FVector monomial(const FAlgebra& f, const std::vector<std::pair<int, int>>& blocks) {
  FVector x = f.one();
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) x = f.divided_left(it->first, it->second, x);
  return x;
}

// theta_i^(p) theta_i'^(q) theta_i^(r) with q >= p + r, as a set of vectors.
std::vector<FVector> closed_form_a1_thick(const FAlgebra& f, const Deg& nu) {
  std::vector<FVector> out;
  for (int p = 0; p <= nu[0]; ++p) {
    int r = nu[0] - p, q = nu[1];
    if (q >= p + r) out.push_back(monomial(f, {{0, p}, {1, q}, {0, r}}));
  }
  for (int p = 0; p <= nu[1]; ++p) {
    int r = nu[1] - p, q = nu[0];
    if (q > p + r) out.push_back(monomial(f, {{1, r}, {0, q}, {1, p}}));
  }
  return out;
}

bool same_set(const std::vector<FVector>& a, const std::vector<CBElement>& b) {
  if (a.size() != b.size()) return false;
  for (const FVector& x : a) {
    bool hit = false;
    for (const CBElement& y : b) hit = hit || y.vec == x;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rank one basis is the divided powers") {
  auto cb = cbasis("a1");
  const FAlgebra& f = cb->algebra();
  for (int k = 0; k <= 8; ++k) {
    const auto& b = cb->at({k});
    REQUIRE(b.size() == 1);
    CHECK(b[0].vec == f.divided(DividedWord{k ? std::vector<std::pair<int, int>>{{0, k}} : std::vector<std::pair<int, int>>{}}));
    CHECK(b[0].eps[0] == k);
    CHECK(b[0].eps_sigma[0] == k);
  }
}

TEST_CASE("thickened rank one basis matches the monomial closed form") {
  auto cb = cbasis("a1-thick");
  const FAlgebra& f = cb->algebra();
  for (int t = 0; t <= 8; ++t)
    for (const Deg& nu : f.weights_of_trace(t)) {
      INFO("nu = " << deg_str(nu));
      CHECK(same_set(closed_form_a1_thick(f, nu), cb->at(nu)));
    }
}

TEST_CASE("monomial identification at q = p + r") {
  auto cb = cbasis("a1-thick");
  const FAlgebra& f = cb->algebra();
  for (int p = 0; p <= 2; ++p)
    for (int r = 0; r <= 2; ++r) {
      int q = p + r;
      CHECK(monomial(f, {{0, p}, {1, q}, {0, r}}) == monomial(f, {{1, r}, {0, q}, {1, p}}));
    }
}

TEST_CASE("string data examples") {
  auto cb = cbasis("a2");
  const FAlgebra& f = cb->algebra();
  const auto& b = cb->at({1, 1});
  REQUIRE(b.size() == 2);
  int k = cb->find(f.word({1, 0}));
  REQUIRE(k >= 0);
  CHECK(b[k].eps == std::vector<int>{0, 1});
  CHECK(b[k].eps_sigma == std::vector<int>{1, 0});
  CHECK(cb->b_lambda({1, 0}, {1, 1}) == std::vector<int>{k});
  CHECK(cb->b_lambda({0, 0}, {1, 1}).empty());
  CHECK(cb->b_lambda({1, 1}, {1, 1}).size() == 2);
}

TEST_CASE("string data agree with image membership") {
  for (const char* name : {"a2", "a1-thick", "rank2-affine"}) {
    auto cb = cbasis(name, 5);
    for (int t = 0; t <= 5; ++t)
      for (const Deg& nu : cb->algebra().weights_of_trace(t)) {
        INFO(name << " " << deg_str(nu));
        CHECK_NOTHROW(cb->verify(nu));
      }
  }
}

TEST_CASE("basis is sigma stable, bar invariant and almost orthonormal") {
  auto cb = cbasis("a2-thick", 5);
  const FAlgebra& f = cb->algebra();
  for (int t = 0; t <= 4; ++t)
    for (const Deg& nu : f.weights_of_trace(t)) {
      const auto& bs = cb->at(nu);
      CHECK(static_cast<int>(bs.size()) == f.dim(nu));
      for (const CBElement& b : bs) {
        CHECK(cb->find(f.sigma(b.vec)) >= 0);
        CHECK(f.bar(b.vec) == b.vec);
        for (const CBElement& c : bs) {
          RationalFn g = f.gram_form(b.vec, c.vec) - RationalFn(b.index == c.index ? 1 : 0);
          CHECK(in_vinvA(g));
        }
      }
    }
}

TEST_CASE("basis does not depend on the construction order") {
  for (const char* name : {"a2", "a1-thick", "a2-thick"}) {
    auto cb = cbasis(name, 6);
    const int top = std::string(name) == "a2-thick" ? 4 : 6;
    for (int t = 1; t <= top; ++t)
      for (const Deg& nu : cb->algebra().weights_of_trace(t)) {
        INFO(name << " " << deg_str(nu));
        auto rev = cb->recompute_reversed(nu);
        std::vector<FVector> xs;
        for (const CBElement& b : rev) xs.push_back(b.vec);
        CHECK(same_set(xs, cb->at(nu)));
      }
  }
}

TEST_CASE("coordinates over the basis") {
  auto cb = cbasis("a2");
  const FAlgebra& f = cb->algebra();
  const auto& bs = cb->at({2, 1});
  for (const CBElement& b : bs) {
    RatVec c = cb->coords(b.vec);
    for (int k = 0; k < c.size(); ++k) CHECK(c(k) == RationalFn(k == b.index ? 1 : 0));
  }
  // theta_1 theta_2 theta_1 = theta_1^(2) theta_2 + theta_2 theta_1^(2).
  RatVec c = cb->coords(f.word({0, 1, 0}));
  for (int k = 0; k < c.size(); ++k) CHECK(c(k) == RationalFn(1));
}

TEST_CASE("oracle agrees with the construction") {
  for (const char* name : {"a2", "a2-thick"}) {
    auto cb = cbasis(name, 6);
    const FAlgebra& f = cb->algebra();
    const int top = std::string(name) == "a2" ? 6 : 5;
    int tested = 0;
    for (int t = 1; t <= top; ++t)
      for (const Deg& nu : f.weights_of_trace(t)) {
        if (f.dim(nu) > 3) continue;
        INFO(name << " " << deg_str(nu));
        auto oracle = brute_force_cb(f, nu);
        std::vector<FVector> xs;
        for (const CBElement& b : oracle) xs.push_back(b.vec);
        CHECK(same_set(xs, cb->at(nu)));
        ++tested;
      }
    CHECK(tested > 0);
  }
}

TEST_CASE("structure constants are positive in rank two") {
  auto cb = cbasis("a2", 6);
  const FAlgebra& f = cb->algebra();
  PositivityReport rep;
  for (int t1 = 1; t1 <= 3; ++t1)
    for (int t2 = 1; t1 + t2 <= 5; ++t2)
      for (const Deg& a : f.weights_of_trace(t1))
        for (const Deg& b : f.weights_of_trace(t2)) rep.merge(verify_structure_positivity(*cb, a, b));
  CHECK(rep.checked > 100);
  CHECK(rep.ok());
}

TEST_CASE("a non-basis element fails positivity") {
  PositivityReport rep;
  rep.record(RationalFn(LaurentPoly::monomial(-1, 2)), Lattice::Nvv, "neg");
  rep.record(RationalFn(LaurentPoly::monomial(3, -1)), Lattice::Nvv, "pos");
  CHECK(rep.checked == 2);
  CHECK(rep.violations.size() == 1);
  CHECK(rep.max_pos_deg == 2);
  CHECK(rep.min_neg_deg == -1);
}
