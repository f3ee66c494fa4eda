#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qloop/qring.hpp"
#include "qloop/rootkit.hpp"

namespace qloop {

// -----------------------------------------------------------------------
// Letters of the algebra.  A word is a product of letters, an OpExpr a
// BarLaurent-linear combination of words in normal form (identical words
// merged, zero coefficients dropped).  No rewriting modulo the defining
// relations ever happens at this layer; algebra identities are checked as
// operator identities on modules.
//
// Node indices run over the finite diagram 0..rank-1, with rank itself
// standing for the affine node.

enum class LetterKind {
  kE,     // e_i                       (a unused)
  kF,     // f_i
  kK,     // k_i^a, a = +1 or -1
  kEdiv,  // e_i^(a), a >= 0
  kFdiv,  // f_i^(a)
  kXp,    // x+_{i,a}, a in Z
  kXm,    // x-_{i,a}
  kKp,    // loop Cartan series coefficient, nonnegative mode a
  kKm,    // nonpositive mode -a, stored with a >= 0
  kH,     // h_{i,a}, a != 0
  kP,     // p_{i,a}, a != 0
};

struct Letter {
  LetterKind kind;
  int node = 0;
  long a = 0;
  bool operator==(const Letter&) const = default;
  bool operator<(const Letter& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (node != o.node) return node < o.node;
    return a < o.a;
  }
  std::string str() const;
};

using Word = std::vector<Letter>;

class OpExpr {
 public:
  OpExpr() = default;  // zero
  static OpExpr one() { return OpExpr(Word{}, BarLaurent(1)); }
  OpExpr(Word w, BarLaurent c);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Word, BarLaurent>& terms() const { return terms_; }

  OpExpr operator-() const;
  friend OpExpr operator+(const OpExpr& a, const OpExpr& b);
  friend OpExpr operator-(const OpExpr& a, const OpExpr& b);
  friend OpExpr operator*(const OpExpr& a, const OpExpr& b);
  friend OpExpr operator*(const BarLaurent& c, const OpExpr& a);
  bool operator==(const OpExpr& o) const { return terms_ == o.terms_; }

  // q -> q^-1 on every coefficient, words untouched.
  OpExpr coeff_bar() const;

  std::string str() const;

 private:
  std::map<Word, BarLaurent> terms_;
  void prune();
};

// Single-letter expressions.
namespace gen {
OpExpr e(int i);
OpExpr f(int i);
OpExpr k(int i, int exp = 1);
OpExpr ediv(int i, long n);
OpExpr fdiv(int i, long n);
OpExpr xp(int i, long r);
OpExpr xm(int i, long r);
OpExpr kp(int i, long r);  // nonnegative loop mode r
OpExpr km(int i, long r);  // nonpositive loop mode -r
OpExpr h(int i, long s);
OpExpr p(int i, long s);
}  // namespace gen

// -----------------------------------------------------------------------
// (Anti)automorphisms, extended letter-wise.  Antiautomorphisms reverse
// words.  A letter outside a map's table raises DomainError.
//
//   tau:  e <-> f, k -> k^-1, q -> q^-1; on loop letters
//         x±_{i,r} -> x∓_{i,-r} and the Cartan series modes swap sides.
//   psi:  e_i -> q k_i f_i, f_i -> q k_i^-1 e_i, k fixed, q fixed.
//   S:    antipode, e_i -> -e_i k_i^-1, f_i -> -k_i f_i, k -> k^-1.
//   bar:  algebra automorphism, e, f fixed, k -> k^-1, q -> q^-1.
//   A:    x±_{i,r} -> -q^{∓1} x±_{i,r}, Cartan letters fixed.
//   B:    x+_{i,r} -> -x+_{i,r} k_i, x-_{i,r} -> -k_i^-1 x-_{i,r}.

OpExpr antiauto_tau(const OpExpr& x);
OpExpr antiauto_psi(const OpExpr& x);
OpExpr antiauto_S(const OpExpr& x);
OpExpr auto_bar(const OpExpr& x);
OpExpr auto_A(const OpExpr& x);
OpExpr auto_B(const OpExpr& x);

// Cartan entry of the untwisted affine extension; index rank is the node
// attached along minus the highest root.
Int affine_cartan_entry(const CartanDatum& d, int i, int j);

// The braid generator on plain letters (sign +1) and its inverse (-1):
//   T_i(e_i) = -f_i k_i,     T_i(f_i) = -k_i^-1 e_i,  T_i(k_j) = k_j k_i^{-a_ij},
//   T_i(e_j) = sum_s (-1)^s q^-s e_i^(m-s) e_j e_i^(s),   m = -a_ij, i != j,
//   T_i(f_j) = sum_s (-1)^s q^s  f_i^(s) f_j f_i^(m-s).
// Extended multiplicatively to words; divided-power letters are rejected.
OpExpr braid_auto(const CartanDatum& d, int i, int sign, const OpExpr& x);

// -----------------------------------------------------------------------
// Modules: free over the torus scalar field, finite weight-graded basis,
// letters act by assigned matrices.  Divided powers fall back to repeated
// action with exact division by [n]!, the zero Cartan modes fall back to
// k_i^{±1}.

using ModuleVec = std::vector<RationalScalar>;
using Matrix = std::vector<std::vector<RationalScalar>>;

bool is_zero_vec(const ModuleVec& v);

class ModuleHandle {
 public:
  ModuleHandle(const CartanDatum& datum, std::vector<WeightVec> weights,
               std::vector<std::string> labels, int torus_rank);

  int dim() const { return static_cast<int>(weights_.size()); }
  int torus_rank() const { return torus_rank_; }
  const CartanDatum& datum() const { return *datum_; }
  const WeightVec& weight(int b) const { return weights_[b]; }
  const std::string& label(int b) const { return labels_[b]; }
  int affine_node() const { return datum_->rank(); }

  void assign(const Letter& l, Matrix m);
  bool has(const Letter& l) const { return action_.count(l) != 0; }
  const Matrix& matrix(const Letter& l) const;

  ModuleVec basis_vector(int b) const;
  ModuleVec zero_vector() const { return ModuleVec(weights_.size()); }

  ModuleVec apply_letter(const Letter& l, const ModuleVec& v) const;
  ModuleVec eval(const OpExpr& x, const ModuleVec& v) const;

  // <mu, alpha_node^vee>; the affine node pairs through minus the highest
  // root (level zero).
  Int string_pairing(int node, const WeightVec& mu) const;

  // Split into weight-homogeneous components, dropping zero ones.
  std::map<WeightVec, ModuleVec> weight_split(const ModuleVec& v) const;

 private:
  const CartanDatum* datum_;
  std::vector<WeightVec> weights_;
  std::vector<std::string> labels_;
  int torus_rank_;
  std::map<Letter, Matrix> action_;
};

// -----------------------------------------------------------------------
// Strings, Kashiwara operators, braid action on module vectors.

struct StringPart {
  long r = 0;
  ModuleVec x;  // e_node kills x
};

// v = sum_r f_node^(r) x_r, unique; reconstruction is exact.  DomainError
// if the raising chain fails to terminate (non-integrable data).
std::vector<StringPart> string_decompose(const ModuleHandle& m, int node,
                                         const ModuleVec& v);

ModuleVec kashiwara_e(const ModuleHandle& m, int node, const ModuleVec& v);
ModuleVec kashiwara_f(const ModuleHandle& m, int node, const ModuleVec& v);

// Lusztig braid operator on vectors: with x highest in its string and
// n = <wt x, alpha^vee>,
//   T  (f^(r) x) = (-1)^{n-r} q^{(n-r)(r+1)} f^(n-r) x,
//   T^-1(f^(r) x) = (-1)^r     q^{-r(n-r+1)}  f^(n-r) x.
ModuleVec braid_T(const ModuleHandle& m, int node, const ModuleVec& v,
                  int sign);

// T_{n_1} T_{n_2} ... T_{n_k} applied to v (rightmost first); sign -1
// applies the inverse of the whole word.
ModuleVec braid_word(const ModuleHandle& m, const std::vector<int>& nodes,
                     int sign, const ModuleVec& v);

// -----------------------------------------------------------------------
// Defining relations, instantiated coefficient-wise inside a window and
// evaluated on every basis vector.

struct RelationReport {
  std::string relation_id;
  long instances_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Known ids: cartan-invertibility, cartan-conjugation, loop-cartan-exchange,
// vertex-exchange, raising-lowering, serre.
std::vector<std::string> relation_ids();

RelationReport relation_check(const ModuleHandle& m,
                              const std::string& relation_id, int window);

}  // namespace qloop
