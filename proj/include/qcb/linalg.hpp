#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "qcb/rational.hpp"

namespace qcb {

// Prime field Z/(2^61 - 1), used to pick pivots and ranks before any exact
// arithmetic happens.
struct ModP {
  static constexpr uint64_t P = (1ULL << 61) - 1;
  uint64_t x = 0;

  ModP() = default;
  ModP(long long v) : x(static_cast<uint64_t>(((static_cast<__int128>(v) % P) + P) % P)) {}  // NOLINT
  static ModP raw(uint64_t v) {
    ModP m;
    m.x = v;
    return m;
  }

  friend ModP operator+(ModP a, ModP b) {
    uint64_t s = a.x + b.x;
    return raw(s >= P ? s - P : s);
  }
  friend ModP operator-(ModP a, ModP b) { return raw(a.x >= b.x ? a.x - b.x : a.x + P - b.x); }
  friend ModP operator*(ModP a, ModP b) {
    unsigned __int128 m = static_cast<unsigned __int128>(a.x) * b.x;
    uint64_t lo = static_cast<uint64_t>(m & P), hi = static_cast<uint64_t>(m >> 61);
    uint64_t s = lo + hi;
    return raw(s >= P ? s - P : s);
  }
  ModP operator-() const { return raw(x ? P - x : 0); }
  ModP& operator+=(ModP o) { return *this = *this + o; }
  ModP& operator-=(ModP o) { return *this = *this - o; }
  ModP& operator*=(ModP o) { return *this = *this * o; }
  ModP pow(uint64_t e) const {
    ModP r(1), b = *this;
    for (; e; e >>= 1, b = b * b)
      if (e & 1) r = r * b;
    return r;
  }
  ModP inverse() const { return pow(P - 2); }
  friend ModP operator/(ModP a, ModP b) { return a * b.inverse(); }
  ModP& operator/=(ModP o) { return *this = *this / o; }
  friend bool operator==(ModP a, ModP b) { return a.x == b.x; }
  friend bool operator!=(ModP a, ModP b) { return a.x != b.x; }
};

inline bool is_zero(const ModP& a) { return a.x == 0; }
inline std::ostream& operator<<(std::ostream& os, const ModP& a) { return os << a.x; }
inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& a) { return os << a.str(); }
inline std::ostream& operator<<(std::ostream& os, const RationalFn& a) { return os << a.str(); }
inline bool is_zero(const RationalFn& a) { return a.is_zero(); }

// Evaluation of v at a fixed point of the prime field.
class Evaluator {
 public:
  explicit Evaluator(uint64_t point);
  ModP operator()(const LaurentPoly& p) const;
  // nullopt when the denominator vanishes at the point.
  std::optional<ModP> operator()(const RationalFn& r) const;
  ModP point() const { return r_; }

 private:
  ModP r_, rinv_;
};

// The fixed sequence of evaluation points tried in order.
uint64_t evaluation_point(int attempt);

}  // namespace qcb

namespace Eigen {

template <>
struct NumTraits<qcb::RationalFn> : GenericNumTraits<qcb::RationalFn> {
  using Real = qcb::RationalFn;
  using NonInteger = qcb::RationalFn;
  using Nested = qcb::RationalFn;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 20,
    MulCost = 50
  };
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<qcb::ModP> : GenericNumTraits<qcb::ModP> {
  using Real = qcb::ModP;
  using NonInteger = qcb::ModP;
  using Nested = qcb::ModP;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace qcb {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using RatMat = Mat<RationalFn>;
using RatVec = Vec<RationalFn>;
using ModMat = Mat<ModP>;

// Pivot preference: lower is better.  Units of Z[v, v^-1] keep elimination
// inside the Laurent ring.
inline int pivot_cost(const ModP&) { return 0; }
inline int pivot_cost(const RationalFn& a) {
  if (!a.is_laurent()) return 1000;
  if (a.num().is_unit()) return 0;
  return 2 + a.num().nterms() + (a.num().is_monomial() ? 0 : 8);
}

// Greedy row selection: row k is kept iff it is independent of the rows
// kept before it.
template <class F>
std::vector<int> independent_rows(const Mat<F>& m) {
  std::vector<int> kept;
  std::vector<Vec<F>> basis;  // reduced rows
  std::vector<int> piv;       // pivot column of each reduced row
  for (int r = 0; r < m.rows(); ++r) {
    Vec<F> row = m.row(r).transpose();
    for (size_t k = 0; k < basis.size(); ++k) {
      if (is_zero(row(piv[k]))) continue;
      F f = row(piv[k]);
      row -= basis[k] * f;
    }
    int c = -1;
    for (int j = 0; j < row.size(); ++j)
      if (!is_zero(row(j))) {
        c = j;
        break;
      }
    if (c < 0) continue;
    F inv = F(1) / row(c);
    row *= inv;
    kept.push_back(r);
    basis.push_back(row);
    piv.push_back(c);
  }
  return kept;
}

template <class F>
int rank(const Mat<F>& m) {
  return static_cast<int>(independent_rows(m).size());
}

// Inverse by Gauss-Jordan elimination; nullopt if singular.
template <class F>
std::optional<Mat<F>> inverse(Mat<F> a) {
  const int n = static_cast<int>(a.rows());
  Mat<F> inv = Mat<F>::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    int best = -1, cost = 0;
    for (int r = k; r < n; ++r) {
      if (is_zero(a(r, k))) continue;
      int c = pivot_cost(a(r, k));
      if (best < 0 || c < cost) best = r, cost = c;
    }
    if (best < 0) return std::nullopt;
    if (best != k) {
      a.row(k).swap(a.row(best));
      inv.row(k).swap(inv.row(best));
    }
    F p = F(1) / a(k, k);
    for (int j = 0; j < n; ++j) {
      if (!is_zero(a(k, j))) a(k, j) = a(k, j) * p;
      if (!is_zero(inv(k, j))) inv(k, j) = inv(k, j) * p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == k || is_zero(a(r, k))) continue;
      F f = a(r, k);
      for (int j = 0; j < n; ++j) {
        if (!is_zero(a(k, j))) a(r, j) -= f * a(k, j);
        if (!is_zero(inv(k, j))) inv(r, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

Mat<ModP> reduce(const RatMat& m, const Evaluator& ev);

// Exact membership and coordinates for the row span of a matrix over Q(v).
// A maximal independent set of rows is chosen greedily (ranks decided at a
// random point of a large prime field, then certified exactly by the
// nonsingular pivot block).
class SpanSolver {
 public:
  SpanSolver() = default;
  explicit SpanSolver(const RatMat& rows);

  int rank() const { return static_cast<int>(rows_.size()); }
  int width() const { return width_; }
  const std::vector<int>& rows() const { return rows_; }
  const std::vector<int>& cols() const { return cols_; }
  // Row-reduced basis: echelon() = transform() * (selected rows).
  const RatMat& echelon() const { return echelon_; }
  const RatMat& transform() const { return transform_; }

  // Coefficients over the selected rows, read from the pivot columns only.
  RatVec coords(const RatVec& z) const;
  RatVec coords_from_pivots(const RatVec& pivot_values) const;
  // Verified solve over all columns.
  std::optional<RatVec> solve(const RatVec& z) const;
  bool contains(const RatVec& z) const { return solve(z).has_value(); }

 private:
  int width_ = 0;
  std::vector<int> rows_, cols_;
  RatMat echelon_, transform_;
};

}  // namespace qcb
