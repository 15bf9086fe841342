#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "qcb/cbasis.hpp"

namespace qcb {

struct DepthExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Verma M_zeta and simple Lambda_lambda are highest weight; ^omega Lambda_lambda
// shares the underlying space of Lambda_lambda with E and F exchanged.
enum class ModuleKind { Verma, SimpleHW, SimpleLW };

// A homogeneous vector.  nu is the distance from the extremal vector
// (weight lambda - nu, or -lambda + nu for SimpleLW); c holds coordinates
// over the module basis at nu.
struct ModuleVector {
  Deg nu;
  RatVec c;

  bool is_zero() const;
  ModuleVector& operator+=(const ModuleVector& o);
  ModuleVector& operator-=(const ModuleVector& o);
  friend ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
  friend ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
  friend ModuleVector operator*(const RationalFn& s, ModuleVector m) {
    for (int k = 0; k < m.c.size(); ++k) m.c(k) *= s;
    return m;
  }
  friend bool operator==(const ModuleVector& a, const ModuleVector& b) { return a.nu == b.nu && a.c == b.c; }
  friend bool operator!=(const ModuleVector& a, const ModuleVector& b) { return !(a == b); }
};

class WeightModule {
 public:
  // lambda is a weight in X; it must be dominant unless kind is Verma.
  WeightModule(std::shared_ptr<const CanonicalBasis> cb, ModuleKind kind, IntVec lambda, int depth);

  ModuleKind kind() const { return kind_; }
  const IntVec& lambda() const { return lambda_; }
  int depth() const { return depth_; }
  // True when every weight space deeper than depth is known to be zero.
  bool closed() const { return closed_; }
  const CanonicalBasis& cb() const { return *cb_; }
  std::shared_ptr<const CanonicalBasis> cb_ptr() const { return cb_; }
  const FAlgebra& algebra() const { return cb_->algebra(); }
  const RootDatum& datum() const { return algebra().datum(); }
  int rank() const { return algebra().rank(); }
  bool lowest() const { return kind_ == ModuleKind::SimpleLW; }

  // Canonical basis indices of B_nu labelling the basis at nu.
  const std::vector<int>& basis(const Deg& nu) const;
  int dim(const Deg& nu) const { return static_cast<int>(basis(nu).size()); }
  IntVec weight(const Deg& nu) const;
  // <i, weight at nu>.
  int pair_i(int i, const Deg& nu) const;

  ModuleVector zero(const Deg& nu) const;
  // eta_lambda, or xi_-lambda for SimpleLW.
  ModuleVector extremal() const;
  ModuleVector basis_vector(const Deg& nu, int k) const;
  // The element b^- eta (highest weight) or b^+ ... of the underlying space
  // for b in B_nu; zero when b is not in B(lambda).
  ModuleVector cb_vector(const CBElement& b) const;

  // x^- eta_lambda in the underlying highest weight space, and back.
  ModuleVector from_f(const FVector& x) const;
  FVector representative(const ModuleVector& m) const;

  // Generators of U in the module's own action.
  ModuleVector F(int i, const ModuleVector& m, int n = 1) const;
  ModuleVector E(int i, const ModuleVector& m, int n = 1) const;
  RationalFn K(const IntVec& mu, const Deg& nu) const;  // eigenvalue on the nu space
  ModuleVector act_minus(const FVector& x, const ModuleVector& m) const;
  ModuleVector act_plus(const FVector& x, const ModuleVector& m) const;

  // The form with (extremal, extremal) = 1 and (u m, m') = (m, rho(u) m').
  RationalFn inner(const ModuleVector& a, const ModuleVector& b) const;

  std::vector<Deg> weights() const;  // all nu with tr nu <= depth and nonzero space
  void check_depth(const Deg& nu) const;

 private:
  // Action on the underlying highest weight space.
  ModuleVector lower(int i, const ModuleVector& m, int n) const;  // F_i^{(n)}
  ModuleVector raise(int i, const ModuleVector& m, int n) const;  // E_i^{(n)}
  ModuleVector lower_by(const FVector& x, const ModuleVector& m) const;
  ModuleVector raise_by(const FVector& x, const ModuleVector& m) const;

  std::shared_ptr<const CanonicalBasis> cb_;
  ModuleKind kind_;
  IntVec lambda_;
  std::vector<int> pairs_;
  int depth_;
  bool closed_ = false;  // simple and vanishing beyond depth
  mutable std::recursive_mutex mu_;
  mutable std::map<Deg, std::vector<int>> basis_;
};

// eta_{w lambda} in Lambda_lambda (side HW) or xi_{-w lambda} in ^omega Lambda_lambda
// (side LW), reading w right to left; throws on a step with negative exponent.
ModuleVector extreme_vector(const WeightModule& m, const WeylWord& w);

// DemazureHW: nonzero b^+ eta_{w lambda}; DemazureLW: nonzero b^- xi_{-w lambda}.
// Either way the set {b^-/+ applied to the extreme vector} of the module m.
std::vector<ModuleVector> demazure_cb(const WeightModule& m, const WeylWord& w);
// Module basis vectors lying in the span of U^{+/-} applied to the extreme vector.
std::vector<ModuleVector> demazure_intersection(const WeightModule& m, const WeylWord& w);
// {b in B_nu : b^- xi_{-w lambda} = 0 in ^omega Lambda_lambda}, tr nu <= depth.
std::vector<CBElement> ann_basis(const WeightModule& lw, const WeylWord& w);

std::string module_vector_str(const WeightModule& m, const ModuleVector& x);

}  // namespace qcb
