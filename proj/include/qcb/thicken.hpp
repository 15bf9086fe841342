#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qcb/tensor.hpp"

namespace qcb {

// Canonical bases of f and of the thickened algebra f~ built from one datum.
struct ThickPair {
  std::shared_ptr<const CanonicalBasis> base, thick;
};
ThickPair thicken_pair(const RootDatum& d, int base_bound, int thick_bound);

// The subspace (f theta_lambda f) of M_{zeta odot lambda} together with the
// isomorphisms phi, psi to M_zeta (x) Lambda_lambda.  Components are indexed
// by nu in N[I]; the component nu sits in f~ at degree nu + |theta_lambda|.
class Thickening {
 public:
  Thickening(ThickPair cbs, IntVec zeta, IntVec lambda, int depth);

  const CanonicalBasis& base() const { return *cbs_.base; }
  const CanonicalBasis& thick() const { return *cbs_.thick; }
  const ThickPair& pair() const { return cbs_; }
  const RootDatum& thick_datum() const { return thick().algebra().datum(); }
  const IntVec& zeta() const { return zeta_; }
  const IntVec& lambda() const { return lambda_; }
  int depth() const { return depth_; }

  const FVector& theta_lambda() const { return theta_; }
  Deg lift(const Deg& nu) const;
  // Inverse of lift; throws std::domain_error off the subspace degrees.
  Deg component(const Deg& nut) const;
  FVector embed(const FVector& x) const;
  FVector restrict(const FVector& x) const;

  // M~_{zeta odot lambda} (holding the subspace), Lambda~_{0 odot lambda},
  // and M_zeta (x) Lambda_lambda.
  const WeightModule& ambient() const { return *ambient_; }
  const WeightModule& simple0() const { return *simple0_; }
  const AtomicModule& verma() const { return *verma_; }
  const AtomicModule& simple() const { return *simple_; }
  std::shared_ptr<const AtomicModule> simple_ptr() const { return simple_; }
  const TensorProduct& tensor() const { return *tensor_; }
  std::shared_ptr<const TensorProduct> tensor_ptr() const { return tensor_; }

  std::vector<Deg> degrees() const;
  Key block_key(const Deg& nu) const;

  // B((f theta_lambda f)) at nu, as indices into B~_{lift(nu)}: the union of
  // the supports of theta_w1 theta_lambda theta_w2 over divided words.
  const std::vector<int>& cb(const Deg& nu) const;
  int dim(const Deg& nu) const { return static_cast<int>(cb(nu).size()); }
  ModuleVector element(const Deg& nu, int k) const;
  ModuleVector from_f(const FVector& z) const;
  // Coordinates over cb(nu); throws std::domain_error outside the subspace.
  RatVec sub_coords(const ModuleVector& z) const;
  std::string label(const Deg& nu, int k) const;

  BVec phi(const ModuleVector& z) const;
  ModuleVector psi(const BVec& t) const;
  // sum_k (-1)^k v^{-k(<i,lambda> + 1 - n)} theta_i^(n-k) theta_lambda theta_i^(k) x.
  FVector psi_closed(const FVector& x, int i, int n) const;

  // Matrix of phi at nu: columns are phi(cb element k) over the pure tensors.
  const RatMat& phi_matrix(const Deg& nu) const;

 private:
  struct Leg {
    RatMat map;    // columns indexed by the pivots of the f~ leg
    RatMat solve;  // second leg only: phi_lambda on the basis of Lambda_lambda
    Key key;
  };
  const Leg& second_leg(const Deg& nua) const;  // pi_{0 odot lambda} and phi_lambda
  const Leg& first_leg(const Deg& nub) const;   // pivot words into M_zeta

  ThickPair cbs_;
  IntVec zeta_, lambda_;
  int depth_;
  Deg theta_deg_;
  FVector theta_;
  std::shared_ptr<WeightModule> ambient_, simple0_;
  std::shared_ptr<AtomicModule> verma_, simple_;
  std::shared_ptr<TensorProduct> tensor_;

  mutable std::recursive_mutex mu_;
  mutable std::map<Deg, std::vector<int>> cb_;
  mutable std::map<Deg, SpanSolver> span_;
  mutable std::map<Deg, Leg> second_, first_;
  mutable std::map<Deg, RatMat> phi_;
  mutable std::map<Deg, RatMat> phi_inv_;
};

struct BijectionReport {
  int checked = 0;
  std::vector<std::pair<std::string, std::string>> matches;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// phi sends B((f theta f)) onto the diamond basis of M_zeta (x) Lambda_lambda.
BijectionReport cb_bijection_check(const Thickening& t);

enum class QuotientKind { DemazureLW, SimpleHW };

// Lambda_{-w l1, l2} (DemazureLW, zeta = -w l1) or Lambda_{l1, l2} (SimpleHW,
// zeta = l1): the quotient of the subspace by its intersection with the left
// ideal f~ Ann_f of the first factor's generating vector.
class Quotient {
 public:
  Quotient(std::shared_ptr<const Thickening> t, QuotientKind kind, IntVec lambda1, WeylWord w = {});

  const Thickening& thickening() const { return *t_; }
  QuotientKind kind() const { return kind_; }
  const WeylWord& word() const { return w_; }
  // ^omega Lambda_l1 (x) Lambda_l2 or Lambda_l1 (x) Lambda_l2.
  const TensorProduct& target() const { return *target_; }
  const WeightModule& first() const { return *first_; }
  const ModuleVector& generator() const { return gen_; }

  // Subspace CB indices (into thickening().cb(nu)) lying in the kernel, and
  // the rest, whose images form the quotient CB.
  const std::vector<int>& kernel(const Deg& nu) const;
  const std::vector<int>& basis(const Deg& nu) const;
  int dim(const Deg& nu) const { return static_cast<int>(basis(nu).size()); }
  // Dimension of subspace cap ideal computed from spans.
  int kernel_dim(const Deg& nu) const;

  RatVec project(const ModuleVector& z) const;
  ModuleVector section(const Deg& nu, const RatVec& q) const;
  // a (x) Id: M_zeta (x) Lambda_l2 -> target.
  BVec a_id(const BVec& t) const;
  BVec phi_bar(const Deg& nu, const RatVec& q) const;
  RatVec psi_bar(const Deg& nu, const BVec& t) const;
  // E_i on the quotient (requires a descent of w in the DemazureLW case).
  RatVec E(int i, const Deg& nu, const RatVec& q) const;
  bool E_allowed(int i) const;

 private:
  struct Action {
    Deg key;
    RatMat map;  // columns: CB elements of B_nu1 acting on the generator
  };
  const Action& action(const Deg& nu1) const;
  void build(const Deg& nu) const;
  const RatMat& phi_bar_matrix(const Deg& nu) const;

  std::shared_ptr<const Thickening> t_;
  QuotientKind kind_;
  IntVec lambda1_;
  WeylWord w_;
  std::shared_ptr<WeightModule> first_;
  std::shared_ptr<AtomicModule> first_atomic_;
  std::shared_ptr<TensorProduct> target_;
  ModuleVector gen_;

  mutable std::recursive_mutex mu_;
  mutable std::map<Deg, std::vector<int>> kernel_, basis_;
  mutable std::map<Deg, int> kernel_dim_;
  mutable std::map<Deg, Action> action_;
  mutable std::map<Deg, RatMat> phi_bar_;
};

struct QuotientReport {
  int kernel_checked = 0;   // kernel CB elements sent to 0 by (a (x) Id) phi
  int basis_checked = 0;    // quotient CB elements matched with diamonds
  int spans_checked = 0;    // weights where kernel cap CB spans the kernel
  std::vector<std::pair<std::string, std::string>> matches;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Certifies diagram (*) at every nu up to the thickening depth.
QuotientReport certify(const Quotient& q);

// Iterated thickening with the simple module of the iterated weight.
struct ThickTower {
  Tower tower;
  std::vector<std::shared_ptr<const CanonicalBasis>> cbs;
};
ThickTower iterate_tower(const RootDatum& d, const std::vector<IntVec>& lambdas, int bound);

}  // namespace qcb
