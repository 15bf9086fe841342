#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qcb/coeff.hpp"
#include "qcb/falg.hpp"

namespace qcb {

struct CBElement {
  Deg nu;
  int index = 0;
  FVector vec;
  std::vector<int> eps;        // eps_i(b): largest n with b in theta_i^n f
  std::vector<int> eps_sigma;  // the same for f theta_i^n
  // b as a Z[v, v^-1]-combination of divided words.
  std::vector<std::pair<DividedWord, LaurentPoly>> expansion;
};

struct CBFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Side { Left, Right };

// One failed coefficient test.
struct Violation {
  std::string where;
  RationalFn value;
};

struct PositivityReport {
  long checked = 0;
  std::vector<Violation> violations;
  int max_pos_deg = 0;   // highest exponent seen
  int min_neg_deg = 0;   // lowest exponent seen
  bool ok() const { return violations.empty(); }
  void record(const RationalFn& x, Lattice kind, const std::string& where);
  void merge(const PositivityReport& o);
};

class CanonicalBasis {
 public:
  explicit CanonicalBasis(std::shared_ptr<const FAlgebra> f);

  const FAlgebra& algebra() const { return *f_; }
  std::shared_ptr<const FAlgebra> algebra_ptr() const { return f_; }

  const std::vector<CBElement>& at(const Deg& nu) const;
  // Recompute B_nu with the generators and the candidates taken in reverse.
  std::vector<CBElement> recompute_reversed(const Deg& nu) const;

  // Index of x in B_|x|, or -1.
  int find(const FVector& x) const;
  // Decided by membership in the image of multiplication by theta_i^n.
  int epsilon(int i, const CBElement& b, Side side) const;
  // {b in B_nu : eps_sigma_i(b) <= lambda_i}, as indices.
  std::vector<int> b_lambda(const std::vector<int>& lambda, const Deg& nu) const;

  // Coordinates of x over B_|x|.
  RatVec coords(const FVector& x) const;
  RatVec coords_from_pivots(const Deg& nu, const RatVec& pivot_values) const;
  // b1 b2 and r(b) over CB and CB (x) CB.
  RatVec product_coords(const CBElement& a, const CBElement& b) const;
  RatMat comult_coords(const CBElement& b, const Deg& nu1) const;
  // Verification of the CB invariants at nu; throws CBFailure.
  void verify(const Deg& nu) const;

  std::string expansion_str(const CBElement& b) const;

 private:
  std::vector<CBElement> compute(const Deg& nu, bool reversed) const;
  const RatMat& pivot_inverse(const Deg& nu) const;

  std::shared_ptr<const FAlgebra> f_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Deg, std::vector<CBElement>> cache_;
  mutable std::map<Deg, RatMat> inv_;
};

// Structure constants of b1 b2 (for |b1| = nu1, |b2| = nu2) and of the
// (nu1, nu2) component of r(b) for b in B_{nu1+nu2}, tested in N[v, v^-1].
PositivityReport verify_structure_positivity(const CanonicalBasis& cb, const Deg& nu1, const Deg& nu2);

// Independent oracle for dim f_nu <= 3: search bar-invariant integral
// combinations of divided words with (x, x) in 1 + v^-1 Z[[v^-1]].
std::vector<CBElement> brute_force_cb(const FAlgebra& f, const Deg& nu);

// Sign convention shared with the oracle: the first nonzero word
// coordinate has positive leading coefficient.
bool sign_normalized(const FVector& x);

}  // namespace qcb
