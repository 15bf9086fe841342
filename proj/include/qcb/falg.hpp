#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcb/datum.hpp"
#include "qcb/linalg.hpp"

namespace qcb {

// A word in the generators, one char per letter holding the generator index.
using Word = std::string;

struct DegreeBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// theta_{i_1}^{(a_1)} ... theta_{i_n}^{(a_n)}.
struct DividedWord {
  std::vector<std::pair<int, int>> blocks;  // (generator, exponent)

  Deg weight(int rank) const;
  Word letters() const;
  int nblocks() const { return static_cast<int>(blocks.size()); }
  // Product of [a_k]!.
  LaurentPoly factorial() const;
  std::string str(const CartanDatum& c) const;
  bool operator==(const DividedWord& o) const { return blocks == o.blocks; }
  bool operator<(const DividedWord& o) const { return blocks < o.blocks; }
};

// Divided words of weight nu with no two adjacent blocks on the same
// generator, ordered by number of blocks, then lexicographically.
std::vector<DividedWord> divided_words(const Deg& nu);

Deg word_weight(const Word& w, int rank);

// Homogeneous element of f_nu.  Entry s[u] is the iterated derivative
// _{u_n}r ... _{u_1}r (x), which is (1 - v^-2)^n (theta_u, x); these
// coordinates determine x.
struct FVector {
  Deg nu;
  RatVec s;

  bool is_zero() const;
  FVector& operator+=(const FVector& o);
  FVector& operator-=(const FVector& o);
  friend FVector operator+(FVector a, const FVector& b) { return a += b; }
  friend FVector operator-(FVector a, const FVector& b) { return a -= b; }
  friend FVector operator*(const RationalFn& c, const FVector& x);
  friend bool operator==(const FVector& a, const FVector& b) { return a.nu == b.nu && a.s == b.s; }
  friend bool operator!=(const FVector& a, const FVector& b) { return !(a == b); }
  size_t hash() const;
};

struct WeightSpace {
  Deg nu;
  int trace = 0;
  std::vector<Word> words;  // lexicographic
  std::unordered_map<Word, int> index;
  std::vector<int> rev;       // index of the reversed word
  std::vector<int> bar_exp;   // sum_{k<j} u_k . u_j
  std::vector<int> pivots;    // word indices; theta_pivots is a basis
  RatMat gram;                // s_pivots(theta_pivots)
  RatMat gram_inv;

  int dim() const { return static_cast<int>(pivots.size()); }
  int nwords() const { return static_cast<int>(words.size()); }
};

class FAlgebra {
 public:
  explicit FAlgebra(std::shared_ptr<const RootDatum> d, int degree_bound = 10);

  const RootDatum& datum() const { return *datum_; }
  std::shared_ptr<const RootDatum> datum_ptr() const { return datum_; }
  int rank() const { return datum_->rank(); }
  int degree_bound() const { return bound_; }
  int dot(int i, int j) const { return datum_->cartan.form(i, j); }

  const WeightSpace& space(const Deg& nu) const;
  int dim(const Deg& nu) const { return space(nu).dim(); }
  // The words of nu, without forcing the pivot computation.
  const WeightSpace& word_list(const Deg& nu) const;

  FVector zero(const Deg& nu) const;
  FVector one() const;
  FVector word(const Word& w) const;
  FVector divided(const DividedWord& w) const;
  // Sum c_p theta_p over the pivot words of nu.
  FVector from_coords(const Deg& nu, const RatVec& c) const;
  RatVec coords(const FVector& x) const;
  // s restricted to the pivot words.
  RatVec pivot_values(const FVector& x) const;

  FVector theta_left(int i, const FVector& x) const;
  FVector theta_right(const FVector& x, int i) const;
  // theta_i^{(n)} x and x theta_i^{(n)}.
  FVector divided_left(int i, int n, const FVector& x) const;
  FVector divided_right(const FVector& x, int i, int n) const;
  FVector multiply(const FVector& x, const FVector& y) const;
  // s_u(xy) for the listed word indices u of |x| + |y|.
  RatVec multiply_at(const FVector& x, const FVector& y, const std::vector<int>& cols) const;

  FVector ir(int i, const FVector& x) const;
  FVector ri(int i, const FVector& x) const;
  FVector bar(const FVector& x) const;
  FVector sigma(const FVector& x) const;
  RationalFn gram_form(const FVector& x, const FVector& y) const;
  // (1 - v^-2)^-n: the form's scale between theta_u and s_u.
  RationalFn scale(int n) const;

  // Coefficients R(p, q) of r(x) = sum R(p, q) theta_p (x) theta_q on the
  // pivots of nu1 and |x| - nu1.
  RatMat comultiply(const FVector& x, const Deg& nu1) const;
  // Matrix M(a, b) = s_{u_a u_b}(x) over the given word indices of nu1, nu2.
  RatMat split_values(const FVector& x, const Deg& nu1, const std::vector<int>& rows,
                      const std::vector<int>& cols) const;
  // Basis dual to `basis` under the form.
  std::vector<FVector> dual_basis(const std::vector<FVector>& basis) const;

  // Quantum Serre relator for i != j, in f_{(1 - i.j) i + j}.
  FVector serre(int i, int j) const;

  // All nu with trace exactly t (t <= bound).
  std::vector<Deg> weights_of_trace(int t) const;
  std::vector<Deg> weights_upto(int t) const;

  std::string word_str(const Word& w) const;
  std::string vector_str(const FVector& x) const;

 private:
  struct Shuffle {
    // For each u of the product weight: (index of u_A, index of u_A^c, exponent).
    std::vector<std::vector<std::tuple<int, int, int>>> terms;
  };
  void check_bound(const Deg& nu) const;
  const std::vector<ModP>& modp_word(const Word& w) const;
  const RatVec& exact_word(const Word& w) const;
  const Shuffle& shuffle(const Deg& a, const Deg& b) const;
  std::unique_ptr<WeightSpace> build(const Deg& nu) const;
  int kostant_count(const Deg& nu) const;

  std::shared_ptr<const RootDatum> datum_;
  int bound_;
  bool finite_;
  ModP point_;
  std::vector<Deg> positive_roots_;

  mutable std::recursive_mutex mu_;
  mutable std::map<Deg, std::unique_ptr<WeightSpace>> spaces_;
  mutable std::unordered_map<Word, std::vector<ModP>> modp_words_;
  mutable std::unordered_map<Word, RatVec> exact_words_;
  mutable std::map<std::pair<Deg, Deg>, std::unique_ptr<Shuffle>> shuffles_;
};

std::shared_ptr<FAlgebra> make_falgebra(const RootDatum& d, int degree_bound = 10);

}  // namespace qcb
