#include <random>

#include "doctest.h"
#include "qcb/coeff.hpp"
#include "qcb/linalg.hpp"

using namespace qcb;

namespace {

RationalFn R(const std::string& s) { return RationalFn::parse(s); }

RationalFn random_entry(std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
  LaurentPoly p;
  for (int k = 0; k < 3; ++k) p += LaurentPoly::monomial(c(rng), e(rng));
  if (rng() % 4 == 0) return RationalFn(p) / RationalFn(quantum_int(2));
  return RationalFn(p);
}

}  // namespace

TEST_CASE("mod p field arithmetic") {
  ModP a(123456789), b(-5);
  CHECK((a * a.inverse()) == ModP(1));
  CHECK((b + ModP(5)) == ModP(0));
  CHECK(ModP(3).pow(4) == ModP(81));
}

TEST_CASE("inverse of a matrix over Q(v)") {
  RatMat m(2, 2);
  m << R("v"), R("1"), R("1"), R("v^-1");
  // det = 0, singular
  CHECK_FALSE(inverse(m).has_value());
  m(1, 1) = R("v");
  auto inv = inverse(m);
  REQUIRE(inv);
  RatMat id = m * *inv;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(id(i, j) == RationalFn(i == j ? 1 : 0));
}

TEST_CASE("span solver recovers random combinations") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 3, w = 5;
    RatMat base(r, w);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < w; ++j) base(i, j) = random_entry(rng);
    // A dependent fourth row.
    RatMat rows(r + 1, w);
    rows.topRows(r) = base;
    rows.row(r) = base.row(0) * R("v") + base.row(2) * R("1 - v^-2");
    SpanSolver s(rows);
    const int exact_rank = rank(base) == r ? r : rank(base);
    CHECK(s.rank() == exact_rank);
    RatVec coeff(r);
    for (int i = 0; i < r; ++i) coeff(i) = random_entry(rng);
    RatVec z = base.transpose() * coeff;
    auto c = s.solve(z);
    REQUIRE(c);
    RatVec back = RatVec::Zero(w);
    for (int k = 0; k < s.rank(); ++k) back += rows.row(s.rows()[k]).transpose() * (*c)(k);
    CHECK(back == z);
    RatVec off = z;
    off(0) += RationalFn(1);
    if (s.rank() == r && !SpanSolver(base).contains(off)) CHECK_FALSE(s.contains(off));
  }
}

TEST_CASE("mod p rank agrees with exact rank") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    RatMat m(3, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = random_entry(rng);
    if (trial % 2) m.row(2) = m.row(0) + m.row(1) * R("v^2");
    CHECK(rank(reduce(m, Evaluator(evaluation_point(0)))) == rank(m));
  }
}
