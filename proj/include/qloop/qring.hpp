#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qloop {

using Int = boost::multiprecision::cpp_int;

// Bad arguments from outside (CLI flags, out-of-range indices).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

// A computation that must be exact left a remainder or hit an impossible
// state; the result would be wrong, so we refuse to produce one.
struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& m) : std::runtime_error(m) {}
};

// A series expansion was requested in a direction where the denominator has
// no invertible leading term.
struct ExpansionError : std::runtime_error {
  explicit ExpansionError(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// BarLaurent: sparse Laurent polynomial in q with integer coefficients.
// Stored map never holds a zero coefficient, so equality is map equality.

class BarLaurent {
 public:
  BarLaurent() = default;
  explicit BarLaurent(Int c);
  explicit BarLaurent(long c) : BarLaurent(Int(c)) {}

  static BarLaurent monomial(int exp, Int coeff = Int(1));
  static BarLaurent q(int exp = 1) { return monomial(exp); }

  bool is_zero() const { return terms_.empty(); }
  const std::map<int, Int>& terms() const { return terms_; }
  Int coeff(int exp) const;
  int min_exp() const;  // pre: nonzero
  int max_exp() const;  // pre: nonzero

  BarLaurent bar() const;  // q -> q^-1

  BarLaurent operator-() const;
  BarLaurent& operator+=(const BarLaurent& o);
  BarLaurent& operator-=(const BarLaurent& o);
  friend BarLaurent operator+(BarLaurent a, const BarLaurent& b) { return a += b; }
  friend BarLaurent operator-(BarLaurent a, const BarLaurent& b) { return a -= b; }
  friend BarLaurent operator*(const BarLaurent& a, const BarLaurent& b);
  bool operator==(const BarLaurent& o) const = default;

  // Exact division; returns false (and leaves quot empty) on a remainder.
  static bool divide_exact(const BarLaurent& num, const BarLaurent& den,
                           BarLaurent& quot);

  // Terms in decreasing exponent: "q^2 + 1 + q^-2".
  std::string str() const;

 private:
  std::map<int, Int> terms_;
  void put(int exp, Int c);
};

// [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}; [-n] = -[n].
BarLaurent qint(long n);
// [n]! ; pre n >= 0.
BarLaurent qfact(long n);
// [m]! / ([p]![m-p]!), computed by exact division; pre 0 <= p <= m.
// A remainder would mean the arithmetic is broken: InternalError.
BarLaurent qbinom(long m, long p);

// ---------------------------------------------------------------------------
// TailSeries: truncated series in q^-1.  Exponents below truncation_order are
// unknown; stored terms all have exponent >= truncation_order.  Arithmetic
// never invents low-order terms: the result's order is at least the max of
// the operands' orders (for products, higher when a factor sticks out above
// q^0).

class TailSeries {
 public:
  static constexpr int kDefaultOrder = -32;

  explicit TailSeries(int order = kDefaultOrder) : order_(order) {}
  TailSeries(const BarLaurent& p, int order = kDefaultOrder);

  int truncation_order() const { return order_; }
  const std::map<int, Int>& terms() const { return terms_; }
  Int coeff(int exp) const;
  bool is_zero() const { return terms_.empty(); }
  int max_exp() const;  // pre: nonzero

  void set(int exp, Int c);  // drops exponents below the order

  TailSeries operator-() const;
  friend TailSeries operator+(const TailSeries& a, const TailSeries& b);
  friend TailSeries operator-(const TailSeries& a, const TailSeries& b);
  friend TailSeries operator*(const TailSeries& a, const TailSeries& b);
  bool operator==(const TailSeries& o) const = default;

  // True when the series is 1 + (strictly negative exponents).
  bool is_one_mod_qinv() const;
  // True when every stored exponent is < 0.
  bool is_qinv_tail() const;

  std::string str() const;

 private:
  int order_;
  std::map<int, Int> terms_;
};

// ---------------------------------------------------------------------------
// TorusScalar: element of Z[q^{±1}, z_1^{±1}, ..., z_rank^{±1}].
// A rank-0 scalar is a plain q-Laurent polynomial and mixes with any rank
// (its empty z-vector is padded with zeros).  Monomial order: lexicographic
// on (q exponent, z exponent vector).

struct Mono {
  int q = 0;
  std::vector<int> z;

  friend auto operator<=>(const Mono& a, const Mono& b) = default;
};

class TorusScalar {
 public:
  TorusScalar() = default;
  explicit TorusScalar(Int c, int rank = 0);
  explicit TorusScalar(long c, int rank = 0) : TorusScalar(Int(c), rank) {}
  TorusScalar(const BarLaurent& p, int rank = 0);

  static TorusScalar monomial(Mono m, Int coeff = Int(1));
  // q^qe * z_var^ze in the given rank.
  static TorusScalar var(int rank, int var, int ze = 1, int qe = 0);

  int rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Mono, Int>& terms() const { return terms_; }
  Int coeff(const Mono& m) const;
  const Mono& lead_mono() const;  // pre: nonzero; max in (q,z)-lex
  Int lead_coeff() const;         // pre: nonzero

  TorusScalar bar() const;      // q -> q^-1, z fixed
  TorusScalar dagger() const;   // z -> z^-1, q fixed
  TorusScalar inv_all() const;  // q -> q^-1 and z -> z^-1

  // A single term c * q^e * z-monomial, or zero?
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const;  // no q, no z

  // Keep exactly the terms whose z-exponent vector is zero.
  BarLaurent partial() const;
  // Coefficient of q^e, with q removed (a z-only TorusScalar).
  TorusScalar q_slice(int e) const;
  int max_q_exp() const;  // pre: nonzero
  int min_q_exp() const;  // pre: nonzero

  // Reindex z-variables into a ring of rank new_rank: old variable i becomes
  // where[i].  pre: where is injective, values < new_rank.
  TorusScalar remap(const std::vector<int>& where, int new_rank) const;
  TorusScalar extend_rank(int new_rank) const;

  TorusScalar operator-() const;
  TorusScalar& operator+=(const TorusScalar& o);
  TorusScalar& operator-=(const TorusScalar& o);
  friend TorusScalar operator+(TorusScalar a, const TorusScalar& b) { return a += b; }
  friend TorusScalar operator-(TorusScalar a, const TorusScalar& b) { return a -= b; }
  friend TorusScalar operator*(const TorusScalar& a, const TorusScalar& b);
  bool operator==(const TorusScalar& o) const;

  Int content() const;       // gcd of coefficients; 0 for the zero scalar
  Mono monomial_content() const;  // exponent-wise min over terms; pre: nonzero

  // Exact division; works in the Laurent ring (monomials are units).
  static bool divide_exact(const TorusScalar& num, const TorusScalar& den,
                           TorusScalar& quot);

  // "2*q^2*z1*z2^-1"; terms in decreasing (q,z)-lex order.
  std::string str() const;

 private:
  int rank_ = 0;
  std::map<Mono, Int> terms_;
  void put(Mono m, Int c);
  static void unify(TorusScalar& a, TorusScalar& b);
  friend class RationalScalar;
};

// ---------------------------------------------------------------------------
// RationalScalar: num/den with den nonzero.  Normal form: integer content
// gcd removed, den's monomial content folded away, den's leading coefficient
// positive, and den = 1 whenever it divides num exactly.  Equality is
// cross-multiplication, so it sees through factors no gcd was taken of.

class RationalScalar {
 public:
  RationalScalar() : num_(), den_(Int(1)) {}
  RationalScalar(TorusScalar num, TorusScalar den);
  /*implicit*/ RationalScalar(const TorusScalar& num)
      : RationalScalar(num, TorusScalar(Int(1))) {}
  explicit RationalScalar(long c) : RationalScalar(TorusScalar(c)) {}

  const TorusScalar& num() const { return num_; }
  const TorusScalar& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int rank() const { return num_.rank() > den_.rank() ? num_.rank() : den_.rank(); }

  RationalScalar bar() const;
  RationalScalar dagger() const;
  RationalScalar inv_all() const;
  RationalScalar inverse() const;  // pre: nonzero

  RationalScalar operator-() const;
  friend RationalScalar operator+(const RationalScalar& a, const RationalScalar& b);
  friend RationalScalar operator-(const RationalScalar& a, const RationalScalar& b);
  friend RationalScalar operator*(const RationalScalar& a, const RationalScalar& b);
  friend RationalScalar operator/(const RationalScalar& a, const RationalScalar& b);
  bool operator==(const RationalScalar& o) const;

  // Exact value as a TorusScalar; InternalError if den does not divide num.
  TorusScalar to_torus() const;
  bool is_torus() const { return den_.is_monomial() || num_.is_zero(); }

  std::string str() const;

 private:
  TorusScalar num_, den_;
  void normalize();
};

// ---------------------------------------------------------------------------
// Series expansions.

enum class Direction { kToInfinity, kToZero };

// Expand num/den in the z-variable `var` (0-based).  Keeps exponents e of
// that variable with e >= -order (toward infinity) or e <= order (toward 0).
// Returned map: var-exponent -> coefficient with var removed from the
// monomials (exponent 0 there).  The denominator's extreme slice in `var`
// must be a unit (+-1 times a monomial), else ExpansionError.
std::map<int, TorusScalar> series_expand(const RationalScalar& r, int var,
                                         Direction dir, int order);

// Expand num/den as a series in q^-1 with z-Laurent coefficients, keeping
// q-exponents >= order.  The denominator's top q-slice must be a unit, else
// ExpansionError.  Returned map: q-exponent -> q-free coefficient.
std::map<int, TorusScalar> q_tail_expand(const RationalScalar& r, int order);

// q-tail expansion followed by the trivial-character projection, as a
// TailSeries with the given truncation order.
TailSeries partial_tail(const RationalScalar& r, int order = TailSeries::kDefaultOrder);

// gcd helper (nonnegative result, gcd(0,n) = |n|).
Int int_gcd(Int a, Int b);

}  // namespace qloop
