#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qloop/qring.hpp"

namespace qloop {

using Rat = boost::multiprecision::cpp_rational;

// Coordinates in the fundamental-weight basis.
struct WeightVec {
  std::vector<Int> w;
  bool operator==(const WeightVec&) const = default;
  bool operator<(const WeightVec& o) const {
    return std::lexicographical_compare(w.begin(), w.end(), o.w.begin(),
                                        o.w.end());
  }
};

// Coordinates in the simple-root basis.
struct RootVec {
  std::vector<Int> a;
  bool operator==(const RootVec&) const = default;
  bool operator<(const RootVec& o) const {
    return std::lexicographical_compare(a.begin(), a.end(), o.a.begin(), o.a.end());
  }
};

// Real affine root (or lattice element) alpha + k*delta.
struct AffineRoot {
  RootVec finite;
  Int delta = 0;
  bool operator==(const AffineRoot&) const = default;
  bool operator<(const AffineRoot& o) const {
    if (delta != o.delta) return delta < o.delta;
    return finite < o.finite;
  }
};

class CartanDatum;

// Weyl group element: exact matrix action on root coordinates plus a word
// in the simple reflections (applied right to left).
class WeylElement {
 public:
  static WeylElement identity(const CartanDatum& d);
  static WeylElement simple(const CartanDatum& d, int i);
  static WeylElement from_word(const CartanDatum& d, const std::vector<int>& word);

  const std::vector<std::vector<Int>>& matrix() const { return m_; }
  const std::vector<int>& word() const { return word_; }

  RootVec apply(const RootVec& v) const;
  WeightVec apply(const CartanDatum& d, const WeightVec& v) const;

  // this->apply(other.apply(v)) == (*this * other).apply(v)
  WeylElement operator*(const WeylElement& o) const;
  bool operator==(const WeylElement& o) const { return m_ == o.m_; }

 private:
  std::vector<std::vector<Int>> m_;
  std::vector<int> word_;
};

class CartanDatum {
 public:
  // type in {'A','D','E'}; A: rank>=1, D: rank>=4, E: rank in {6,7,8}.
  CartanDatum(char type, int rank);
  // Arbitrary symmetric matrix path; must still be a connected ADE diagram.
  explicit CartanDatum(std::vector<std::vector<int>> cartan);

  char type() const { return type_; }
  int rank() const { return rank_; }
  const std::vector<std::vector<int>>& cartan() const { return cartan_; }
  std::string label() const { return std::string(1, type_) + std::to_string(rank_); }

  // All roots / positive roots in root coordinates.
  const std::vector<RootVec>& positive_roots() const { return pos_roots_; }
  std::vector<RootVec> all_roots() const;
  const RootVec& highest_root() const { return theta_; }
  Int coxeter_number() const { return coxeter_; }
  WeightVec rho() const;

  RootVec simple_root(int i) const;
  WeightVec fundamental_weight(int i) const;

  // Basis changes.  weight_of(root) is exact; root_of(weight) throws
  // DomainError when the weight is not in the root lattice.
  WeightVec weight_of(const RootVec& a) const;
  RootVec root_of(const WeightVec& w) const;
  bool in_root_lattice(const WeightVec& w) const;

  const WeylElement& longest_element() const { return w0_; }
  int bar_index(int i) const { return bar_[i]; }
  const std::vector<std::vector<Rat>>& cartan_inverse() const { return cartan_inv_; }

  bool is_positive_root(const RootVec& a) const;
  bool is_root(const RootVec& a) const;

 private:
  char type_;
  int rank_;
  std::vector<std::vector<int>> cartan_;
  std::vector<RootVec> pos_roots_;
  RootVec theta_;
  Int coxeter_ = 0;
  WeylElement w0_;
  std::vector<int> bar_;
  std::vector<std::vector<Rat>> cartan_inv_;
  void validate() const;
  void build();
  friend class WeylElement;
};

// Bilinear pairing with (omega_i, alpha_j) = delta_ij.  The weight-weight
// case needs the inverse Cartan matrix and is generally fractional.
Rat pairing(const CartanDatum& d, const WeightVec& x, const WeightVec& y);
Int pairing(const CartanDatum& d, const WeightVec& x, const RootVec& y);
Int pairing(const CartanDatum& d, const RootVec& x, const WeightVec& y);
Int pairing(const CartanDatum& d, const RootVec& x, const RootVec& y);

// Extension to affine elements: delta pairs to zero against the root lattice.
Int pairing(const CartanDatum& d, const AffineRoot& x, const RootVec& y);

// |alpha|^2 = sum_i (omega_i, alpha)^2: the sum of squared root coordinates.
Int norm2(const RootVec& a);

// Positivity in the affine order: k>0, or k=0 and the finite part positive.
bool affine_positive(const CartanDatum& d, const AffineRoot& r);

// The wall-crossing set of the translation by omega_i: all affine roots
// beta > 0 with omega_i^{-1}(beta) < 0, where omega_i acts by
// alpha + k delta -> alpha + (k - (omega_i, alpha)) delta.
// Computed both by that action and by the closed form
// { alpha + k delta : alpha in Delta_-, 1 <= k <= -(omega_i, alpha) };
// InternalError if the two enumerations disagree.
std::vector<AffineRoot> hat_delta_omega(const CartanDatum& d, int i);

// gamma_i: the sum over hat_delta_omega(d, i).
AffineRoot gamma(const CartanDatum& d, int i);
// (gamma_i, alpha_i) == -coxeter_number
bool lemma_gamma_check(const CartanDatum& d, int i);

// The two-coloring o: I -> {+1,-1} with o_i + o_j = 0 across every edge,
// normalized by o_0 = +1.  InternalError if the diagram is not bipartite.
std::vector<int> sign_assignment(const CartanDatum& d);

// w * alpha = lambda - w(lambda) + w(alpha).
RootVec w_star(const CartanDatum& d, const WeylElement& w, const RootVec& alpha,
               const WeightVec& lambda);

// a(w,i) = (1/2) sum over the inversion set of w of (alpha_i, alpha)^2.
// Exact rational: integral whenever w(alpha_i) is a simple root (the only
// case the geometry consumes), half-integral otherwise.
Rat length_stat_a(const CartanDatum& d, const WeylElement& w, int i);

// Inversion set {alpha > 0 : w(alpha) < 0}; its size is l(w).
std::vector<RootVec> inversion_set(const CartanDatum& d, const WeylElement& w);

// Full Weyl group by closure; meant for small rank in tests.
std::vector<WeylElement> enumerate_weyl(const CartanDatum& d);

}  // namespace qloop
