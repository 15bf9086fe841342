#include "qcb/coeff.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qcb {

LaurentPoly quantum_int(int n) {
  if (n < 0) return -quantum_int(-n);
  LaurentPoly out;
  for (int k = 0; k < n; ++k) out += LaurentPoly::v(n - 1 - 2 * k);
  return out;
}

LaurentPoly quantum_factorial(int n) {
  if (n < 0) throw std::domain_error("quantum factorial of a negative integer");
  static std::mutex mu;
  static std::vector<LaurentPoly> table{LaurentPoly(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= n) {
    int m = static_cast<int>(table.size());
    table.push_back(table.back() * quantum_int(m));
  }
  return table[n];
}

LaurentPoly quantum_binomial(int n, int k) {
  if (k < 0) throw std::domain_error("quantum binomial with negative k");
  if (n < 0) {
    LaurentPoly b = quantum_binomial(k - n - 1, k);
    return k % 2 ? -b : b;
  }
  if (k > n) return LaurentPoly();
  // [n, k] = v^-k [n-1, k] + v^(n-k) [n-1, k-1], tabulated row by row.
  std::vector<LaurentPoly> row{LaurentPoly(1)};
  for (int m = 1; m <= n; ++m) {
    std::vector<LaurentPoly> next(static_cast<size_t>(m + 1));
    for (int j = 0; j <= m; ++j) {
      LaurentPoly t;
      if (j < m) t += row[j].shifted(-j);
      if (j > 0) t += row[j - 1].shifted(m - j);
      next[j] = std::move(t);
    }
    row = std::move(next);
  }
  return row[k];
}

int default_trunc(const RationalFn& x) {
  int span = 0;
  if (!x.is_zero()) span = (x.num().high() - x.num().low()) + x.den().high();
  return std::max(2 * span, 8);
}

bool lattice_test(const RationalFn& x, Lattice kind, int trunc) {
  if (x.is_zero()) return true;
  if (kind == Lattice::A) {
    int deg = x.degree();
    if (deg > 0) return false;
    if (trunc <= 0) trunc = default_trunc(x);
    return expansion_at_infinity(x, 0, -trunc).has_value();
  }
  if (!x.is_laurent()) return false;
  const LaurentPoly& p = x.laurent();
  bool nonneg = std::all_of(p.dense().begin(), p.dense().end(), [](const Integer& c) { return c.sign() >= 0; });
  switch (kind) {
    case Lattice::Zvinv: return p.high() <= 0;
    case Lattice::vinvZvinv: return p.high() <= -1;
    case Lattice::Nvv: return nonneg;
    case Lattice::Nvinv: return nonneg && p.high() <= 0;
    default: return false;
  }
}

bool in_vinvA(const RationalFn& x, int trunc) {
  if (x.is_zero()) return true;
  if (x.degree() >= 0) return false;
  return lattice_test(x.shifted(1), Lattice::A, trunc);
}

}  // namespace qcb
