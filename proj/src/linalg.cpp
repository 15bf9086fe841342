#include "qcb/linalg.hpp"

#include <stdexcept>

namespace qcb {

Evaluator::Evaluator(uint64_t point) : r_(ModP::raw(point % ModP::P)) {
  if (r_.x == 0) r_ = ModP::raw(2);
  rinv_ = r_.inverse();
}

ModP Evaluator::operator()(const LaurentPoly& p) const {
  if (p.is_zero()) return ModP();
  ModP acc;
  // Horner from the top, then scale by r^low.
  const auto& c = p.dense();
  for (size_t k = c.size(); k-- > 0;) acc = acc * r_ + ModP::raw(c[k].mod(ModP::P));
  int low = p.low();
  return acc * (low >= 0 ? r_.pow(static_cast<uint64_t>(low)) : rinv_.pow(static_cast<uint64_t>(-low)));
}

std::optional<ModP> Evaluator::operator()(const RationalFn& r) const {
  ModP d = (*this)(r.den());
  if (d.x == 0) return std::nullopt;
  return (*this)(r.num()) / d;
}

uint64_t evaluation_point(int attempt) {
  uint64_t z = 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(attempt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z % ModP::P;
}

Mat<ModP> reduce(const RatMat& m, const Evaluator& ev) {
  Mat<ModP> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      auto x = ev(m(i, j));
      if (!x) throw std::runtime_error("evaluation point hits a pole");
      out(i, j) = *x;
    }
  return out;
}

SpanSolver::SpanSolver(const RatMat& rows) : width_(static_cast<int>(rows.cols())) {
  for (int attempt = 0;; ++attempt) {
    try {
      rows_ = independent_rows(reduce(rows, Evaluator(evaluation_point(attempt))));
      break;
    } catch (const std::runtime_error&) {
      if (attempt > 8) throw;
    }
  }
  const int d = rank();
  echelon_ = RatMat(d, width_);
  for (int k = 0; k < d; ++k) echelon_.row(k) = rows.row(rows_[k]);
  transform_ = RatMat::Identity(d, d);
  std::vector<char> used(static_cast<size_t>(width_), 0);
  cols_.assign(static_cast<size_t>(d), -1);

  for (int k = 0; k < d; ++k) {
    int br = -1, bc = -1, cost = 0;
    for (int r = k; r < d && !(br >= 0 && cost == 0); ++r)
      for (int c = 0; c < width_; ++c) {
        if (used[c] || echelon_(r, c).is_zero()) continue;
        int cc = pivot_cost(echelon_(r, c));
        if (br < 0 || cc < cost) {
          br = r, bc = c, cost = cc;
          if (cost == 0) break;
        }
      }
    if (br < 0) throw std::logic_error("span solver: rank certification failed");
    if (br != k) {
      echelon_.row(k).swap(echelon_.row(br));
      transform_.row(k).swap(transform_.row(br));
    }
    used[bc] = 1;
    cols_[k] = bc;
    RationalFn p = RationalFn(1) / echelon_(k, bc);
    if (!p.is_one()) {
      for (int j = 0; j < width_; ++j)
        if (!echelon_(k, j).is_zero()) echelon_(k, j) *= p;
      for (int j = 0; j < d; ++j)
        if (!transform_(k, j).is_zero()) transform_(k, j) *= p;
    }
    for (int r = 0; r < d; ++r) {
      if (r == k || echelon_(r, bc).is_zero()) continue;
      RationalFn f = echelon_(r, bc);
      for (int j = 0; j < width_; ++j)
        if (!echelon_(k, j).is_zero()) echelon_(r, j) -= f * echelon_(k, j);
      for (int j = 0; j < d; ++j)
        if (!transform_(k, j).is_zero()) transform_(r, j) -= f * transform_(k, j);
    }
  }
}

RatVec SpanSolver::coords_from_pivots(const RatVec& zq) const {
  const int d = rank();
  RatVec c = RatVec::Zero(d);
  for (int k = 0; k < d; ++k) {
    if (zq(k).is_zero()) continue;
    for (int j = 0; j < d; ++j)
      if (!transform_(k, j).is_zero()) c(j) += zq(k) * transform_(k, j);
  }
  return c;
}

RatVec SpanSolver::coords(const RatVec& z) const {
  RatVec zq(rank());
  for (int k = 0; k < rank(); ++k) zq(k) = z(cols_[k]);
  return coords_from_pivots(zq);
}

std::optional<RatVec> SpanSolver::solve(const RatVec& z) const {
  if (z.size() != width_) throw std::invalid_argument("span solver: width mismatch");
  RatVec rest = z;
  for (int k = 0; k < rank(); ++k) {
    RationalFn f = z(cols_[k]);
    if (f.is_zero()) continue;
    for (int j = 0; j < width_; ++j)
      if (!echelon_(k, j).is_zero()) rest(j) -= f * echelon_(k, j);
  }
  for (int j = 0; j < width_; ++j)
    if (!rest(j).is_zero()) return std::nullopt;
  return coords(z);
}

}  // namespace qcb
