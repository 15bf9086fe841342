#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "qcb/tensor.hpp"

namespace qcb {

// One summand family of a normal form: C(p, q) theta_p^+ 1_zeta theta_q^-,
// with p, q running over the pivots of f_x and f_y.  zeta is the weight
// between the two legs, so the summand eats weight zeta + |y| and returns
// zeta + |x|.
struct UdotKey {
  Key zeta;
  Deg x, y;
  bool operator<(const UdotKey& o) const { return std::tie(zeta, x, y) < std::tie(o.zeta, o.x, o.y); }
  bool operator==(const UdotKey& o) const { return zeta == o.zeta && x == o.x && y == o.y; }
};

struct UdotElement {
  std::map<UdotKey, RatMat> terms;

  bool is_zero() const { return terms.empty(); }
  void add(const UdotKey& k, const RatMat& c);
  void prune();
  UdotElement& operator+=(const UdotElement& o);
  UdotElement& operator-=(const UdotElement& o);
  friend UdotElement operator+(UdotElement a, const UdotElement& b) { return a += b; }
  friend UdotElement operator-(UdotElement a, const UdotElement& b) { return a -= b; }
  friend UdotElement operator*(const RationalFn& s, UdotElement u);
  friend bool operator==(const UdotElement& a, const UdotElement& b);
  friend bool operator!=(const UdotElement& a, const UdotElement& b) { return !(a == b); }
};

// E_i (e = true) or F_i.
struct Letter {
  bool e;
  int i;
};
Letter E_(int i);
Letter F_(int i);

enum class Reduction { Leftmost, Rightmost, Random };

struct LiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A canonical basis label of f: degree and index into CanonicalBasis::at.
struct FLabel {
  Deg nu;
  int index = 0;
  bool operator<(const FLabel& o) const { return std::tie(nu, index) < std::tie(o.nu, o.index); }
  bool operator==(const FLabel& o) const { return nu == o.nu && index == o.index; }
};

struct DotLabel {
  FLabel b1;
  Key zeta;  // weight of the idempotent on the right
  FLabel b2;
  bool operator<(const DotLabel& o) const { return std::tie(b1, zeta, b2) < std::tie(o.b1, o.zeta, o.b2); }
  bool operator==(const DotLabel& o) const { return b1 == o.b1 && zeta == o.zeta && b2 == o.b2; }
};

struct DotCB {
  DotLabel label;
  UdotElement lift;
  int margin = 0;
};

using DotExpansion = std::map<DotLabel, RationalFn>;

struct Spherical {
  bool yes = false;
  std::vector<int> J;
  bool omega = false;  // true: U_J^omega (F legs in f_J); false: U_J (E legs in f_J)
};

struct UdotPositivity {
  PositivityReport report;
  DotExpansion product;
  bool sigma_checked = false;
  bool sigma_ok = true;
  std::vector<std::string> failures;
  bool ok() const { return report.ok() && sigma_ok && failures.empty(); }
};

// The modified quantum group over the canonical basis of f.
class Udot {
 public:
  explicit Udot(std::shared_ptr<const CanonicalBasis> cb);

  const CanonicalBasis& cb() const { return *cb_; }
  const FAlgebra& algebra() const { return cb_->algebra(); }
  const RootDatum& datum() const { return algebra().datum(); }

  UdotElement idempotent(const IntVec& zeta) const;
  // c x^+ 1_zeta y^-.
  UdotElement monomial(const FVector& x, const IntVec& zeta, const FVector& y,
                       const RationalFn& c = RationalFn(1)) const;
  // The word (leftmost letter outermost) applied to 1_zeta.
  UdotElement straighten(const std::vector<Letter>& word, const IntVec& zeta,
                         Reduction order = Reduction::Leftmost, unsigned seed = 0) const;
  UdotElement multiply(const UdotElement& a, const UdotElement& b) const;
  // Anti-automorphism fixing E_i, F_i and sending 1_zeta to 1_-zeta.
  UdotElement sigma(const UdotElement& u) const;

  // Weight consumed by a term, and returned.
  IntVec source(const UdotKey& k) const;
  IntVec target(const UdotKey& k) const;

  BVec act(const UdotElement& u, const BasedModule& m, const BVec& x) const;
  BVec act_word(const std::vector<Letter>& word, const BasedModule& m, const BVec& x) const;
  // Over pure tensors.
  BVec act_pure(const UdotElement& u, const TensorProduct& t, const BVec& x) const;

  // b1 <>_zeta b2, lifted at the given margin and checked at margin + 1.
  DotCB diamond_lift(const FLabel& b1, const IntVec& zeta, const FLabel& b2, int margin = 1) const;
  // The lift at one margin only, without the stability check.
  UdotElement lift_at(const FLabel& b1, const IntVec& zeta, const FLabel& b2, int margin) const;

  // Coordinates over the canonical basis of U-dot, read off the action on
  // xi_-l1 (x) eta_l2 with large l1, l2.  u must have a single source weight.
  DotExpansion expand(const UdotElement& u, int margin = 1) const;

  Spherical is_spherical_parabolic(const UdotElement& u) const;
  UdotPositivity verify_positivity(const DotCB& a, const DotCB& b, bool with_sigma = true) const;
  // Action of a lift on the canonical basis of Lambda_lambda.
  PositivityReport simple_positivity(const DotCB& a, const IntVec& lambda) const;

  std::string str(const UdotElement& u) const;
  std::string label_str(const DotLabel& l) const;

 private:
  using Normal = std::map<std::tuple<Word, Word, Key>, LaurentPoly>;
  const Normal& normal(const std::vector<Letter>& word, const IntVec& zeta) const;
  Normal reduce(std::vector<Letter> word, const IntVec& zeta, Reduction order, unsigned& state) const;
  LaurentPoly commutator(int i, const IntVec& w) const;
  const Word& pivot_word(const Deg& nu, int p) const;
  std::pair<IntVec, IntVec> dominant_pair(const IntVec& zeta, int bound) const;
  template <class Raise, class Lower, class Weight>
  BVec act_generic(const UdotElement& u, const BVec& x, Raise raise, Lower lower, Weight weight) const;

  std::shared_ptr<const CanonicalBasis> cb_;
  mutable std::recursive_mutex mu_;
  mutable std::map<std::pair<std::vector<std::pair<bool, int>>, Key>, Normal> normal_;
};

}  // namespace qcb
