#pragma once

#include <cstdint>
#include <vector>

#include "qloop/rootkit.hpp"

namespace qloop {

// Arrow counts of an orientation of the doubled quiver: n[i][j] arrows from
// node i to node j, nbar the reversed copy (nbar[i][j] == n[j][i]).  Between
// distinct adjacent nodes n + nbar = -a_ij; no loops on the diagonal.
struct OrientationData {
  std::vector<std::vector<Int>> n;
  std::vector<std::vector<Int>> nbar;
};

// Picks the first orientation (edges ordered lexicographically, directions
// swept as a binary counter) compatible with the folding convention
//   n_{ij} = n_{i~ j~}     if the Coxeter number is even,
//   n_{ij} = nbar_{i~ j~}  if it is odd,
// where i~ is the diagram involution induced by -w0.  Throws InternalError
// if no orientation qualifies.
OrientationData choose_orientation(const CartanDatum& datum);

// Integer books attached to (lambda, alpha, i): ranks of the tautological
// and Hecke bundles, the framing twist t and the stratum dimension d.
struct RankBooks {
  Int f;        // (alpha_i, lambda - alpha)
  Int f_plus;   // f - f_minus
  Int f_minus;  // -(omega_i, alpha)
  Int v;        // (omega_i, alpha)
  Int r_plus;   // (lambda, alpha_i) - (omega_i - sum_j n_ij omega_j, alpha)
  Int r_minus;  // -(omega_i - sum_j nbar_ij omega_j, alpha)
  Int t;        // (alpha, 2 lambda - alpha)/2 + |alpha|^2
  Int d;        // (alpha, 2 lambda - alpha)
};

RankBooks rank_books(const CartanDatum& datum, const OrientationData& orient,
                     const WeightVec& lambda, const RootVec& alpha, int i);

// Dimension of the correspondence between the strata at alpha and alpha':
// (d_{lambda,alpha} + d_{lambda,alpha'}) / 2.  The sum is always even.
Int dim_pair(const CartanDatum& datum, const WeightVec& lambda,
             const RootVec& alpha, const RootVec& alpha_prime);

// g_{i;alpha} = -1 + (c-1) f+_{i~; w0*alpha} + f+_{i;alpha} - c f-_{i~; w0*alpha}
Int g_increment(const CartanDatum& datum, const OrientationData& orient,
                const WeightVec& lambda, const RootVec& alpha, int i);

// h_{i;alpha} = r+_{i~; w0*alpha} + dim_pair(w0*alpha - alpha_{i~}, w0*alpha)
//             + r-_{i;alpha}, reduced mod 2 (returned in {0,1}).
int h_increment(const CartanDatum& datum, const OrientationData& orient,
                const WeightVec& lambda, const RootVec& alpha, int i);

// Coefficients of the closed form x(alpha) = Q(alpha) + L(alpha) + a on root
// coordinates.  qform can be half-integral off the diagonal; the total is an
// integer for every lattice point.
struct QuadMapCoeffs {
  std::vector<std::vector<Rat>> qform;
  std::vector<Int> linear;
  Int constant = 0;
};

// The quadratic maps x : Q -> Z and y : Q -> Z/2 cut out by
//   x(nu) = (c-1)|nu|^2 - c(lambda,lambda),   x(a+a_i) - x(a) = c v_{i;nu} - g_{i;a},
//   y(nu) = 0,                                y(a+a_i) - y(a) = h_{i;a}.
// x is kept in closed form; y is integrated from nu along coordinate paths
// (path independence is exactly the h cocycle identity).  The constructor
// cross-checks the closed form against the increments and throws
// InternalError on any mismatch.
class QuadMaps {
 public:
  QuadMaps(const CartanDatum& datum, OrientationData orient, WeightVec lambda);

  Int x(const RootVec& alpha) const;
  int y(const RootVec& alpha) const;

  // Independent evaluation of x by summing increments from nu.
  Int x_by_increments(const RootVec& alpha) const;

  // w0 * alpha = nu + w0(alpha)
  RootVec star(const RootVec& alpha) const;

  const CartanDatum& datum() const { return *datum_; }
  const QuadMapCoeffs& coeffs() const { return coeffs_; }
  const RootVec& nu() const { return nu_; }
  const OrientationData& orientation() const { return orient_; }
  const WeightVec& lambda() const { return lambda_; }

 private:
  const CartanDatum* datum_;
  OrientationData orient_;
  WeightVec lambda_;
  RootVec nu_;
  QuadMapCoeffs coeffs_;
};

inline QuadMaps solve_xy(const CartanDatum& datum, OrientationData orient,
                         WeightVec lambda) {
  return QuadMaps(datum, std::move(orient), std::move(lambda));
}

// Samples alpha in the root lattice (coordinates in [-10, 10]) and checks
// x(w0*alpha) == x(alpha) and y(w0*alpha) == y(alpha).
bool appendix_check(const QuadMaps& maps, int samples, std::uint64_t seed);

}  // namespace qloop
