#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "qcb/modules.hpp"

namespace qcb {

// Identifies a block of a based module: nu for a weight module, the total
// weight for a tensor product.
using Key = std::vector<int>;

// Sparse vector: coordinates over the basis of each block.
struct BVec {
  std::map<Key, RatVec> parts;

  bool is_zero() const;
  void add(const Key& k, const RatVec& c);
  void prune();
  BVec& operator+=(const BVec& o);
  BVec& operator-=(const BVec& o);
  friend BVec operator+(BVec a, const BVec& b) { return a += b; }
  friend BVec operator-(BVec a, const BVec& b) { return a -= b; }
  friend BVec operator*(const RationalFn& s, BVec x);
  friend bool operator==(const BVec& a, const BVec& b);
  friend bool operator!=(const BVec& a, const BVec& b) { return !(a == b); }
};

// Tensor of atomic basis labels (block, index), one per atomic factor.
using FlatLabel = std::vector<std::pair<Key, int>>;
using Flat = std::map<FlatLabel, RationalFn>;

// A module with a distinguished basis fixed by its bar involution.
class BasedModule {
 public:
  virtual ~BasedModule() = default;
  virtual const FAlgebra& algebra() const = 0;
  virtual std::vector<Key> keys() const = 0;
  virtual int dim(const Key& k) const = 0;
  virtual IntVec weight(const Key& k) const = 0;
  virtual BVec E(int i, const Key& k, const RatVec& c) const = 0;
  virtual BVec F(int i, const Key& k, const RatVec& c) const = 0;
  virtual std::string label(const Key& k, int idx) const = 0;
  virtual Flat flatten(const Key& k, int idx) const = 0;
  virtual int factors() const = 0;

  BVec unit(const Key& k, int idx) const;
  BVec E(int i, const BVec& x, int n = 1) const;
  BVec F(int i, const BVec& x, int n = 1) const;
  BVec K(const IntVec& mu, const BVec& x) const;
  // Letters applied right to left: theta_w^- and theta_w^+.
  BVec word_minus(const Word& w, const BVec& x) const;
  BVec word_plus(const Word& w, const BVec& x) const;
  BVec act_minus(const FVector& y, const BVec& x) const;
  BVec act_plus(const FVector& y, const BVec& x) const;
  static BVec bar(const BVec& x);
  Flat flatten(const BVec& x) const;
  std::string str(const BVec& x) const;
};

// A weight module with its canonical basis; blocks are nu.
class AtomicModule : public BasedModule {
 public:
  explicit AtomicModule(std::shared_ptr<const WeightModule> m) : m_(std::move(m)) {}
  const WeightModule& module() const { return *m_; }
  std::shared_ptr<const WeightModule> module_ptr() const { return m_; }

  const FAlgebra& algebra() const override { return m_->algebra(); }
  std::vector<Key> keys() const override { return m_->weights(); }
  int dim(const Key& k) const override { return m_->dim(k); }
  IntVec weight(const Key& k) const override { return m_->weight(k); }
  BVec E(int i, const Key& k, const RatVec& c) const override;
  BVec F(int i, const Key& k, const RatVec& c) const override;
  std::string label(const Key& k, int idx) const override;
  Flat flatten(const Key& k, int idx) const override { return {{{{k, idx}}, RationalFn(1)}}; }
  int factors() const override { return 1; }

  using BasedModule::E;
  using BasedModule::F;
  BVec from(const ModuleVector& m) const;
  ModuleVector to(const BVec& x, const Deg& nu) const;

 private:
  std::shared_ptr<const WeightModule> m_;
};

std::shared_ptr<AtomicModule> atomic(std::shared_ptr<const CanonicalBasis> cb, ModuleKind kind, const IntVec& lambda,
                                     int depth);
// Smallest depth containing every nonzero weight space of Lambda_lambda;
// throws if the module does not close up within the degree bound.
int full_height(const CanonicalBasis& cb, const IntVec& lambda);

struct DiamondElement {
  Key weight;
  int index = 0;  // position of its leading pure tensor in the block
  BVec pure;      // coordinates over pure tensors
  std::string label;
};

// M1 (x) M2 with the Delta action, the quasi-R-matrix and its canonical basis.
// As a based module its basis is the diamond basis and its blocks are the
// total weights.
class TensorProduct : public BasedModule {
 public:
  struct Pure {
    Key ka;
    int a;
    Key kb;
    int b;
  };
  struct Block {
    IntVec weight;
    std::vector<Pure> basis;
    std::map<std::pair<Key, Key>, int> offset;  // start of the (ka, kb) rows
  };

  TensorProduct(std::shared_ptr<const BasedModule> a, std::shared_ptr<const BasedModule> b);

  const BasedModule& first() const { return *a_; }
  const BasedModule& second() const { return *b_; }

  const FAlgebra& algebra() const override { return a_->algebra(); }
  std::vector<Key> keys() const override;
  int dim(const Key& k) const override { return static_cast<int>(block(k).basis.size()); }
  IntVec weight(const Key& k) const override { return block(k).weight; }
  BVec E(int i, const Key& k, const RatVec& c) const override;
  BVec F(int i, const Key& k, const RatVec& c) const override;
  std::string label(const Key& k, int idx) const override;
  Flat flatten(const Key& k, int idx) const override;
  int factors() const override { return a_->factors() + b_->factors(); }
  using BasedModule::E;
  using BasedModule::F;

  const Block& block(const Key& k) const;
  bool has_block(const Key& k) const { return blocks_.count(k) > 0; }
  // x (x) y over pure tensors.
  BVec tensor(const BVec& x, const BVec& y) const;
  BVec pure(const Key& ka, int a, const Key& kb, int b) const;

  // Over pure tensors.
  BVec pure_E(int i, const BVec& t) const;
  BVec pure_F(int i, const BVec& t) const;
  BVec pure_K(const IntVec& mu, const BVec& t) const;
  BVec theta(const BVec& t) const;
  BVec psi(const BVec& t) const { return theta(bar(t)); }

  // Psi on a block (columns are images of pure tensors), the diamond basis
  // as columns over pure tensors (the transition matrix), and its inverse.
  const RatMat& psi_matrix(const Key& k) const;
  const RatMat& transition(const Key& k) const;
  BVec to_pure(const BVec& diamond_coords) const;
  BVec to_diamond(const BVec& pure_coords) const;

  DiamondElement diamond(const Key& ka, int a, const Key& kb, int b) const;
  std::vector<DiamondElement> diamond_basis(const Key& k) const;

 private:
  struct Solved {
    RatMat psi, trans, inv;
  };
  const Solved& solve(const Key& k) const;
  const RatMat& gram_inverse(const Deg& nu) const;

  std::shared_ptr<const BasedModule> a_, b_;
  std::map<Key, Block> blocks_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Key, Solved> solved_;
  mutable std::map<Deg, RatMat> ginv_;
};

Key weight_key(const IntVec& x);

// chi: ^omega Lambda_l1 (x) Lambda_l2 -> ^omega Lambda_l2 (x) Lambda_l1 on pure tensors.
BVec chi_twist(const TensorProduct& src, const TensorProduct& dst, const BVec& t);

// On M_zeta (x) Lambda_lambda (atomic factors): eps_i(m1 (x) m2) =
// _i r(m1) (x) K_-i m2 + (v - v^-1) m1 (x) K_-i E_i m2, and the product form
// (m1 (x) m2, m1' (x) m2') = (m1, m1')_f (m2, m2')_Lambda.  Pure coordinates.
BVec epsilon_op(const TensorProduct& t, int i, const BVec& x);
RationalFn tensor_inner(const TensorProduct& t, const BVec& x, const BVec& y);

// Flattened diamond bases of a tensor product, as the set of vectors.
std::vector<Flat> flat_basis(const TensorProduct& t, const Key& k);

// Entries of every transition matrix tested in N[v^-1].
PositivityReport transition_positivity(const TensorProduct& t);
// E_i, F_i on the basis of a based module tested in N[v, v^-1].
PositivityReport action_positivity(const BasedModule& m);

}  // namespace qcb
