#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace qcb {

using IntVec = Eigen::VectorXi;
using IntMat = Eigen::MatrixXi;
// Coordinates on the generators: an element of N[I] or Z[I].
using Deg = std::vector<int>;

struct DatumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CartanDatum {
  std::vector<std::string> gens;
  IntMat form;

  int rank() const { return static_cast<int>(gens.size()); }
  int index(const std::string& label) const;
  // i . nu for nu in Z[I].
  int dot(int i, const Deg& nu) const;
  int dot(const Deg& a, const Deg& b) const;
  void validate() const;
};

class RootDatum {
 public:
  CartanDatum cartan;
  int rankY = 0, rankX = 0;
  IntMat pairing;  // rankY x rankX
  IntMat embedY;   // rankY x |I|, column i is the image of i
  IntMat embedX;   // rankX x |I|

  // Set for thickened data: the datum it was built from.  Generators
  // 0..n-1 are the old ones, n..2n-1 their primed copies.
  std::shared_ptr<const RootDatum> base;
  std::vector<IntVec> prime_x;  // x_{i'} in the base X

  static RootDatum simply_connected(const CartanDatum& c);

  int rank() const { return cartan.rank(); }
  void validate() const;

  int pair(const IntVec& y, const IntVec& x) const { return y.dot(pairing * x); }
  int pair_i(int i, const IntVec& x) const { return embedY.col(i).dot(pairing * x); }
  IntVec root(int i) const { return embedX.col(i); }
  IntVec zero_weight() const { return IntVec::Zero(rankX); }
  // Image of nu in X.
  IntVec to_X(const Deg& nu) const;
  bool dominant(const IntVec& x) const;
  // Some x with <i, x> = vals[i] for all i; throws when none exists.
  IntVec weight_with_pairings(const std::vector<int>& vals) const;
  std::vector<int> pairings(const IntVec& x) const;

  int level() const { return base ? base->level() + 1 : 0; }
  // The primed copy of base generator i (thickened data only).
  int prime(int i) const { return base->rank() + i; }
};

// Unimodular-column solve of A x = b over Z.
std::optional<IntVec> integer_solve(const IntMat& a, const IntVec& b);

RootDatum thicken(const RootDatum& d);
// zeta odot lambda in the thickened datum t; zeta, lambda in the base X.
IntVec odot(const RootDatum& t, const IntVec& zeta, const IntVec& lambda);
// Embedding of base weights with <i', .> = 0.
IntVec lift_weight(const RootDatum& t, const IntVec& x);
// Iterated thickening of d, n - 1 times, and the weight l_1 odot ... odot l_n.
struct Tower {
  std::vector<std::shared_ptr<const RootDatum>> levels;  // levels[0] = d
  IntVec weight;
};
Tower iterate(const RootDatum& d, const std::vector<IntVec>& lambdas);

struct WeylWord {
  std::vector<int> letters;
  bool operator==(const WeylWord& o) const { return letters == o.letters; }
};

Deg reflect(const CartanDatum& c, int i, Deg beta);
Deg act_root(const CartanDatum& c, const WeylWord& w, Deg beta);
IntVec act(const RootDatum& d, const WeylWord& w, IntVec x);
bool descent(const CartanDatum& c, int i, const WeylWord& w);
WeylWord demazure_product(const CartanDatum& c, const WeylWord& a, const WeylWord& b);
// Same action on Z[I] (exact for finite type).
bool same_element(const CartanDatum& c, const WeylWord& a, const WeylWord& b);
bool is_spherical(const std::vector<int>& J, const CartanDatum& c);

RootDatum builtin_datum(const std::string& name);
RootDatum parse_datum_json(const std::string& text);
RootDatum load_datum(const std::string& name_or_path);
std::string datum_json(const RootDatum& d);

std::string deg_str(const Deg& nu);
int trace(const Deg& nu);
Deg unit_deg(int n, int i, int k = 1);
Deg operator+(const Deg& a, const Deg& b);
Deg operator-(const Deg& a, const Deg& b);
bool nonneg(const Deg& a);

}  // namespace qcb
