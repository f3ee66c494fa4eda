#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qloop/qring.hpp"
#include "qloop/quadmaps.hpp"
#include "qloop/uqalg.hpp"

namespace qloop {

// -----------------------------------------------------------------------
// The rank-one tower: Grassmannians Gr(a, ell) for a = 0..ell and their
// cotangent bundles, with the framing torus acting on the ell-dimensional
// framing space by characters z_1..z_ell and the loop parameter q carrying
// half the fiber-scaling weight (the scaling circle acts on cotangent
// fibers with weight 2).
//
// Every class is stored by its fixed-point restrictions.  A fixed point of
// component a is an a-subset S of the framing coordinates, encoded as a
// bitmask; the restriction is a TorusScalar (or a RationalScalar once
// inverse Euler factors enter).  The space tag records whether the class
// lives on the Grassmannian tower (kF) or the cotangent tower (kQ); the
// restriction data look alike, but the convolution action differs by
// conjugation with the conormal Euler factor, and pushing forward along
// the zero section multiplies by that factor.

enum class Space { kF, kQ };

struct FixedClass {
  Space space = Space::kF;
  int ell = 0;
  // comp[a][p]: restriction at the p-th a-subset, ascending bitmask order.
  std::vector<std::vector<RationalScalar>> comp;

  bool is_zero() const;
  // All restrictions free of denominators?
  bool is_torus() const;
  bool operator==(const FixedClass& o) const;
};

// Same space and shape required; the product is restriction-wise (tensor
// product with a vector bundle class).
FixedClass operator+(const FixedClass& a, const FixedClass& b);
FixedClass operator-(const FixedClass& a, const FixedClass& b);
FixedClass operator-(const FixedClass& a);
FixedClass operator*(const RationalScalar& c, const FixedClass& x);
FixedClass operator*(const FixedClass& a, const FixedClass& b);

// Normalizing scalars of the rescaled bar involutions.  The diagonal
// eigenvalues a_diag, b_diag are in closed form; r and s are extracted as
// the braid images of the two extreme component units, with r*s = (-q)^ell;
// theta is r stripped of its tautological factors and must come out as a
// pure sign times q^{ell^2} (the sign is recorded separately).
struct ScalarBook {
  std::vector<BarLaurent> a_diag;  // (-q)^a
  std::vector<BarLaurent> b_diag;  // (-q)^{a-ell} q^{-a(ell-a)}
  TorusScalar r;
  TorusScalar s;
  BarLaurent theta;
  int epsilon = 1;
  FixedClass c;  // the twisting class, lives on the cotangent tower
};

enum class PairKind { kColon, kDoubleBar, kSingleBar, kSingleBarPrime };

class GrassModel {
 public:
  explicit GrassModel(int ell);

  int ell() const { return ell_; }
  // Total number of fixed points across components.
  int dim() const { return 1 << ell_; }

  const std::vector<std::uint32_t>& subsets(int a) const;
  int subset_index(int a, std::uint32_t s) const;
  int flat_index(int a, int pos) const;
  std::pair<int, int> unflatten(int idx) const;

  FixedClass zero(Space sp) const;
  // Component unit: restricts to 1 on every fixed point of component a.
  FixedClass unit(int a, Space sp) const;
  // Zero-section pushforward of the component unit (conormal restrictions).
  FixedClass kappa_unit(int a) const;

  // Fixed-point restriction of a named tautological class.  Names: E', E,
  // W, V, Q', Q, F, F+, F-, LambdaE', LambdaE, LambdaW, LambdaV, LambdaF,
  // LambdaF+, LambdaF-, Hom(E',Q').
  TorusScalar restrict_taut(const std::string& name, int a, std::uint32_t s) const;
  FixedClass taut_class(const std::string& name, int a, Space sp) const;
  FixedClass mul_taut(const std::string& name, const FixedClass& c, long power = 1) const;
  // p-th wedge power; the name must restrict to a plain character sum
  // (E', E, W, V, Q', Q, F+, Hom(E',Q')).
  FixedClass wedge_taut(const std::string& name, int p, int a, Space sp) const;

  // lambda_{-1} of the cotangent space at S: of the Grassmannian, of the
  // conormal directions, of the cotangent tower (their product), and of
  // the incidence variety attached to a nested pair of subsets.
  TorusScalar euler_base(int a, std::uint32_t s) const;
  TorusScalar euler_conormal(int a, std::uint32_t s) const;
  TorusScalar euler_total(int a, std::uint32_t s) const;
  TorusScalar euler_incidence(std::uint32_t small, std::uint32_t big) const;

  // Operator matrix on the flat fixed-point coordinates (rows = output).
  // Ops: "x+","x-" (loop mode r), "xt+","xt-" (unit-twisted forms),
  // "k+","k-" (mode r >= 0), "h" (mode +-1), "e","f","k","kinv" (mode
  // ignored), "e0","f0","k0","k0inv", "ediv","fdiv" (mode n >= 0, the
  // one-step correspondence form).
  const Matrix& op_matrix(const std::string& op, long mode, Space sp) const;
  FixedClass act(const std::string& op, long mode, const FixedClass& c) const;

  // Pullback along the component-reversing involution (z-inversion twist).
  FixedClass omega_pullback(const FixedClass& c) const;
  // Serre-Grothendieck duality on the class's own space.
  FixedClass serre_dual(const FixedClass& c) const;
  // Zero-section pushforward, its exact inverse, and the inverse truncated
  // to a q^-1 tail of the given order.
  FixedClass kappa_star(const FixedClass& c) const;
  FixedClass kappa_star_inv(const FixedClass& c) const;
  FixedClass kappa_star_inv_truncated(const FixedClass& c, int order) const;

  const ScalarBook& scalar_book() const { return book_; }

  // Rescaled duality functors: serre_dual then omega_pullback, with the
  // component-wise power of q (d/2 on the Grassmannian side, 3d/2 on the
  // cotangent side).  Both are q -> q^-1 semilinear over the base ring.
  FixedClass gamma(const FixedClass& c) const;
  FixedClass gamma_prime(const FixedClass& c) const;
  // Longest-element braid operator (single node), sign -1 for the inverse.
  FixedClass braid_full(const FixedClass& c, int sign = 1) const;
  // The bar involutions: braid_full . b_diag . c . gamma(').
  FixedClass beta(const FixedClass& c) const;
  FixedClass beta_prime(const FixedClass& c) const;

  // kColon: x on F, y on Q.  kDoubleBar: x on F, y on Q.  kSingleBar: both
  // on F.  kSingleBarPrime: both on Q (value lands in the q^-1 completion;
  // returned exactly as a rational).
  RationalScalar pair(const FixedClass& x, const FixedClass& y, PairKind kind) const;
  // z-degree-zero projection of the pairing value.
  BarLaurent pair_partial(const FixedClass& x, const FixedClass& y, PairKind kind) const;
  TailSeries pair_partial_prime(const FixedClass& x, const FixedClass& y,
                                int order = TailSeries::kDefaultOrder) const;

  // Simultaneous permutation of the framing characters and the subsets;
  // perm[i] is the image of coordinate i.
  FixedClass permute(const FixedClass& c, const std::vector<int>& perm) const;
  bool is_symmetric(const FixedClass& c) const;

  // Module view for the word-level machinery: finite node 0, affine node 1,
  // loop modes assigned through |r| <= window + 2 and Cartan modes through
  // max(window + 2, 2 * window).
  ModuleHandle module_handle(Space sp, int window) const;

  ModuleVec to_vec(const FixedClass& c) const;
  FixedClass from_vec(const ModuleVec& v, Space sp) const;

  std::string to_json(const FixedClass& c) const;

  const CartanDatum& datum() const { return datum_; }
  const QuadMaps& quad() const { return quad_; }

 private:
  int ell_;
  CartanDatum datum_;
  QuadMaps quad_;
  std::vector<std::vector<std::uint32_t>> subsets_;
  std::vector<int> pos_of_mask_;
  std::vector<int> flat_of_mask_;
  ScalarBook book_;
  int braid_sign_ = 1;
  mutable std::map<std::string, Matrix> cache_;

  void check_class(const FixedClass& c) const;
  TorusScalar zvar(int j, int ze = 1, int qe = 0) const;
  Matrix build_matrix(const std::string& op, long mode, Space sp) const;
  Matrix hecke_matrix(long mode, const std::string& op, Space sp) const;
  Matrix diagonal_series_matrix(const std::string& op, long mode) const;
  void fixed_point_frame(std::vector<WeightVec>& wts, std::vector<std::string>& labels) const;
  ModuleHandle braid_handle(Space sp) const;
  void build_scalar_book();
};

}  // namespace qloop
