#include "qloop/grassk.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <sstream>

namespace qloop {

namespace {

int bits_in(std::uint32_t m) { return std::popcount(m); }

std::vector<int> bit_list(std::uint32_t m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

long to_long(const Int& v) { return v.convert_to<long>(); }

// q^qe * prod z_j^base, with per-bit adjustments applied afterwards.
struct MonoBuilder {
  Mono m;
  explicit MonoBuilder(int rank, int qe = 0, int base = 0) {
    m.q = qe;
    m.z.assign(static_cast<std::size_t>(rank), base);
  }
  void add(int var, int e) { m.z[static_cast<std::size_t>(var)] += e; }
  void add_mask(std::uint32_t mask, int e) {
    for (int i : bit_list(mask)) m.z[static_cast<std::size_t>(i)] += e;
  }
  TorusScalar done(Int coeff = Int(1)) const { return TorusScalar::monomial(m, coeff); }
};

// Monomial power with unit coefficient; negative exponents allowed.
TorusScalar mono_pow(const TorusScalar& t, long e) {
  if (!t.is_monomial()) throw InternalError("mono_pow needs a monomial");
  const Mono& m = t.terms().begin()->first;
  const Int& c = t.terms().begin()->second;
  if (c != 1 && c != -1) throw InternalError("mono_pow needs a unit coefficient");
  Mono out;
  out.q = m.q * static_cast<int>(e);
  out.z.reserve(m.z.size());
  for (int x : m.z) out.z.push_back(x * static_cast<int>(e));
  return TorusScalar::monomial(out, (c == -1 && (e % 2)) ? Int(-1) : Int(1));
}

RationalScalar rat_remap(const RationalScalar& r, const std::vector<int>& where, int rank) {
  return RationalScalar(r.num().extend_rank(rank).remap(where, rank),
                        r.den().extend_rank(rank).remap(where, rank));
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix out(n, ModuleVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b[k][j].is_zero()) continue;
        out[i][j] = out[i][j] + a[i][k] * b[k][j];
      }
    }
  return out;
}

// Coefficient of the spectral variable (last slot) must be gone; drop it.
TorusScalar drop_spectral(const TorusScalar& t, int rank) {
  TorusScalar out(Int(0), rank);
  for (const auto& [m, c] : t.terms()) {
    if (m.z[static_cast<std::size_t>(rank)] != 0)
      throw InternalError("spectral exponent survived the expansion");
    Mono n;
    n.q = m.q;
    n.z.assign(m.z.begin(), m.z.begin() + rank);
    out += TorusScalar::monomial(n, c);
  }
  return out;
}

const char* space_name(Space sp) { return sp == Space::kF ? "F" : "Q"; }

}  // namespace

// -----------------------------------------------------------------------
// FixedClass arithmetic.

bool FixedClass::is_zero() const {
  for (const auto& row : comp)
    for (const auto& v : row)
      if (!v.is_zero()) return false;
  return true;
}

bool FixedClass::is_torus() const {
  for (const auto& row : comp)
    for (const auto& v : row)
      if (!v.is_torus()) return false;
  return true;
}

bool FixedClass::operator==(const FixedClass& o) const {
  if (space != o.space || ell != o.ell || comp.size() != o.comp.size()) return false;
  for (std::size_t a = 0; a < comp.size(); ++a) {
    if (comp[a].size() != o.comp[a].size()) return false;
    for (std::size_t p = 0; p < comp[a].size(); ++p)
      if (!(comp[a][p] == o.comp[a][p])) return false;
  }
  return true;
}

namespace {
void need_same_shape(const FixedClass& a, const FixedClass& b) {
  if (a.space != b.space || a.ell != b.ell || a.comp.size() != b.comp.size())
    throw DomainError("mixed fixed-point classes (space or size mismatch)");
}
}  // namespace

FixedClass operator+(const FixedClass& a, const FixedClass& b) {
  need_same_shape(a, b);
  FixedClass out = a;
  for (std::size_t i = 0; i < out.comp.size(); ++i)
    for (std::size_t p = 0; p < out.comp[i].size(); ++p)
      out.comp[i][p] = out.comp[i][p] + b.comp[i][p];
  return out;
}

FixedClass operator-(const FixedClass& a, const FixedClass& b) {
  need_same_shape(a, b);
  FixedClass out = a;
  for (std::size_t i = 0; i < out.comp.size(); ++i)
    for (std::size_t p = 0; p < out.comp[i].size(); ++p)
      out.comp[i][p] = out.comp[i][p] - b.comp[i][p];
  return out;
}

FixedClass operator-(const FixedClass& a) {
  FixedClass out = a;
  for (auto& row : out.comp)
    for (auto& v : row) v = -v;
  return out;
}

FixedClass operator*(const RationalScalar& c, const FixedClass& x) {
  FixedClass out = x;
  for (auto& row : out.comp)
    for (auto& v : row) v = c * v;
  return out;
}

FixedClass operator*(const FixedClass& a, const FixedClass& b) {
  need_same_shape(a, b);
  FixedClass out = a;
  for (std::size_t i = 0; i < out.comp.size(); ++i)
    for (std::size_t p = 0; p < out.comp[i].size(); ++p)
      out.comp[i][p] = out.comp[i][p] * b.comp[i][p];
  return out;
}

// -----------------------------------------------------------------------
// Model setup.

GrassModel::GrassModel(int ell)
    : ell_(ell),
      datum_('A', 1),
      quad_(datum_, choose_orientation(datum_), WeightVec{{Int(ell)}}) {
  if (ell < 1 || ell > 8) throw DomainError("framing dimension must be between 1 and 8");
  subsets_.resize(static_cast<std::size_t>(ell_) + 1);
  const std::uint32_t full = (1u << ell_) - 1;
  pos_of_mask_.assign(full + 1, -1);
  flat_of_mask_.assign(full + 1, -1);
  for (std::uint32_t m = 0; m <= full; ++m) {
    auto& bucket = subsets_[static_cast<std::size_t>(bits_in(m))];
    pos_of_mask_[m] = static_cast<int>(bucket.size());
    bucket.push_back(m);
  }
  int flat = 0;
  for (int a = 0; a <= ell_; ++a)
    for (std::uint32_t m : subsets_[static_cast<std::size_t>(a)]) flat_of_mask_[m] = flat++;
  build_scalar_book();
}

const std::vector<std::uint32_t>& GrassModel::subsets(int a) const {
  if (a < 0 || a > ell_) throw DomainError("component out of range");
  return subsets_[static_cast<std::size_t>(a)];
}

int GrassModel::subset_index(int a, std::uint32_t s) const {
  if (a < 0 || a > ell_ || s >= (1u << ell_) || bits_in(s) != a)
    throw DomainError("subset does not belong to the component");
  return pos_of_mask_[s];
}

int GrassModel::flat_index(int a, int pos) const {
  if (a < 0 || a > ell_ || pos < 0 ||
      pos >= static_cast<int>(subsets_[static_cast<std::size_t>(a)].size()))
    throw DomainError("fixed-point index out of range");
  return flat_of_mask_[subsets_[static_cast<std::size_t>(a)][static_cast<std::size_t>(pos)]];
}

std::pair<int, int> GrassModel::unflatten(int idx) const {
  if (idx < 0 || idx >= dim()) throw DomainError("fixed-point index out of range");
  int a = 0;
  while (idx >= static_cast<int>(subsets_[static_cast<std::size_t>(a)].size())) {
    idx -= static_cast<int>(subsets_[static_cast<std::size_t>(a)].size());
    ++a;
  }
  return {a, idx};
}

void GrassModel::check_class(const FixedClass& c) const {
  if (c.ell != ell_ || c.comp.size() != static_cast<std::size_t>(ell_) + 1)
    throw DomainError("class does not match the model");
  for (int a = 0; a <= ell_; ++a)
    if (c.comp[static_cast<std::size_t>(a)].size() != subsets_[static_cast<std::size_t>(a)].size())
      throw DomainError("class does not match the model");
}

TorusScalar GrassModel::zvar(int j, int ze, int qe) const {
  return TorusScalar::var(ell_, j, ze, qe);
}

FixedClass GrassModel::zero(Space sp) const {
  FixedClass out;
  out.space = sp;
  out.ell = ell_;
  out.comp.resize(static_cast<std::size_t>(ell_) + 1);
  for (int a = 0; a <= ell_; ++a)
    out.comp[static_cast<std::size_t>(a)].assign(subsets_[static_cast<std::size_t>(a)].size(),
                                                 RationalScalar());
  return out;
}

FixedClass GrassModel::unit(int a, Space sp) const {
  if (a < 0 || a > ell_) throw DomainError("component out of range");
  FixedClass out = zero(sp);
  for (auto& v : out.comp[static_cast<std::size_t>(a)]) v = RationalScalar(1);
  return out;
}

FixedClass GrassModel::kappa_unit(int a) const { return kappa_star(unit(a, Space::kF)); }

// -----------------------------------------------------------------------
// Tautological restrictions.

TorusScalar GrassModel::restrict_taut(const std::string& name, int a, std::uint32_t s) const {
  (void)subset_index(a, s);  // validates the pair
  const std::uint32_t full = (1u << ell_) - 1;
  const std::uint32_t sc = full & ~s;
  auto sum_over = [&](std::uint32_t mask, int qe) {
    TorusScalar acc(Int(0), ell_);
    for (int i : bit_list(mask)) acc += zvar(i, 1, qe);
    return acc;
  };
  if (name == "E'" || name == "E") return sum_over(s, 0);
  if (name == "W") return sum_over(full, 0);
  if (name == "V") return sum_over(s, 1);
  if (name == "Q'" || name == "Q") return sum_over(sc, 0);
  if (name == "F+") return sum_over(sc, -1);
  if (name == "F-") return -sum_over(s, 1);
  if (name == "F") return sum_over(sc, -1) - sum_over(s, 1);
  if (name == "Hom(E',Q')") {
    TorusScalar acc(Int(0), ell_);
    for (int i : bit_list(s))
      for (int j : bit_list(sc)) {
        MonoBuilder b(ell_);
        b.add(j, 1);
        b.add(i, -1);
        acc += b.done();
      }
    return acc;
  }
  MonoBuilder b(ell_);
  if (name == "LambdaE'" || name == "LambdaE") {
    b.add_mask(s, 1);
  } else if (name == "LambdaW") {
    b.add_mask(full, 1);
  } else if (name == "LambdaV") {
    b.m.q = a;
    b.add_mask(s, 1);
  } else if (name == "LambdaF+") {
    b.m.q = a - ell_;
    b.add_mask(sc, 1);
  } else if (name == "LambdaF-") {
    b.m.q = -a;
    b.add_mask(s, -1);
  } else if (name == "LambdaF") {
    b.m.q = -ell_;
    b.add_mask(sc, 1);
    b.add_mask(s, -1);
  } else {
    throw DomainError("unknown tautological class: " + name);
  }
  return b.done();
}

FixedClass GrassModel::taut_class(const std::string& name, int a, Space sp) const {
  FixedClass out = zero(sp);
  const auto& subs = subsets(a);
  for (std::size_t p = 0; p < subs.size(); ++p)
    out.comp[static_cast<std::size_t>(a)][p] = restrict_taut(name, a, subs[p]);
  return out;
}

FixedClass GrassModel::mul_taut(const std::string& name, const FixedClass& c, long power) const {
  check_class(c);
  FixedClass out = c;
  for (int a = 0; a <= ell_; ++a) {
    const auto& subs = subsets_[static_cast<std::size_t>(a)];
    for (std::size_t p = 0; p < subs.size(); ++p) {
      if (out.comp[static_cast<std::size_t>(a)][p].is_zero()) continue;
      RationalScalar f(restrict_taut(name, a, subs[p]));
      if (power < 0) f = f.inverse();
      RationalScalar acc(1);
      for (long i = 0; i < (power < 0 ? -power : power); ++i) acc = acc * f;
      out.comp[static_cast<std::size_t>(a)][p] = out.comp[static_cast<std::size_t>(a)][p] * acc;
    }
  }
  return out;
}

FixedClass GrassModel::wedge_taut(const std::string& name, int p, int a, Space sp) const {
  if (p < 0) throw DomainError("negative wedge power");
  FixedClass out = zero(sp);
  const auto& subs = subsets(a);
  for (std::size_t pos = 0; pos < subs.size(); ++pos) {
    const TorusScalar r = restrict_taut(name, a, subs[pos]);
    std::vector<TorusScalar> chars;
    for (const auto& [m, c] : r.terms()) {
      if (c <= 0) throw DomainError("wedge power of a virtual class: " + name);
      for (Int i = 0; i < c; ++i) chars.push_back(TorusScalar::monomial(m));
    }
    // elementary symmetric polynomial e_p of the characters
    std::vector<TorusScalar> dp(static_cast<std::size_t>(p) + 1, TorusScalar(Int(0), ell_));
    dp[0] = TorusScalar(Int(1), ell_);
    for (const TorusScalar& ch : chars)
      for (int j = std::min<int>(p, static_cast<int>(chars.size())); j >= 1; --j)
        dp[static_cast<std::size_t>(j)] += ch * dp[static_cast<std::size_t>(j) - 1];
    out.comp[static_cast<std::size_t>(a)][pos] = dp[static_cast<std::size_t>(p)];
  }
  return out;
}

// -----------------------------------------------------------------------
// Euler factors.  Tangent character chi contributes (1 - chi^{-1}).

TorusScalar GrassModel::euler_base(int a, std::uint32_t s) const {
  (void)subset_index(a, s);
  const std::uint32_t sc = ((1u << ell_) - 1) & ~s;
  TorusScalar acc(Int(1), ell_);
  for (int i : bit_list(s))
    for (int j : bit_list(sc)) {
      MonoBuilder b(ell_);
      b.add(i, 1);
      b.add(j, -1);
      acc = acc * (TorusScalar(Int(1), ell_) - b.done());
    }
  return acc;
}

TorusScalar GrassModel::euler_conormal(int a, std::uint32_t s) const {
  (void)subset_index(a, s);
  const std::uint32_t sc = ((1u << ell_) - 1) & ~s;
  TorusScalar acc(Int(1), ell_);
  for (int i : bit_list(s))
    for (int j : bit_list(sc)) {
      MonoBuilder b(ell_, -2);
      b.add(j, 1);
      b.add(i, -1);
      acc = acc * (TorusScalar(Int(1), ell_) - b.done());
    }
  return acc;
}

TorusScalar GrassModel::euler_total(int a, std::uint32_t s) const {
  return euler_base(a, s) * euler_conormal(a, s);
}

TorusScalar GrassModel::euler_incidence(std::uint32_t small, std::uint32_t big) const {
  if ((small & ~big) != 0 || big >= (1u << ell_))
    throw DomainError("incidence wants nested subsets");
  const std::uint32_t mid = big & ~small;
  const std::uint32_t out = ((1u << ell_) - 1) & ~big;
  TorusScalar acc(Int(1), ell_);
  auto factor = [&](int num_var, int den_var, int qe) {
    MonoBuilder b(ell_, qe);
    b.add(num_var, 1);
    b.add(den_var, -1);
    acc = acc * (TorusScalar(Int(1), ell_) - b.done());
  };
  // new directions inside the bigger space
  for (int s : bit_list(small))
    for (int t : bit_list(mid)) factor(s, t, 0);
  // the bigger space moving inside the framing
  for (int t : bit_list(big))
    for (int j : bit_list(out)) factor(t, j, 0);
  // the cotangent leg pinned by the nesting
  for (int s : bit_list(small))
    for (int j : bit_list(out)) factor(j, s, -2);
  return acc;
}

// -----------------------------------------------------------------------
// Operator matrices.

Matrix GrassModel::hecke_matrix(long mode, const std::string& op, Space sp) const {
  const bool lowers = (op == "x+" || op == "xt+");
  const bool tilde = (op == "xt+" || op == "xt-");
  const int r = static_cast<int>(mode);
  const std::uint32_t full = (1u << ell_) - 1;
  Matrix m(static_cast<std::size_t>(dim()), ModuleVec(static_cast<std::size_t>(dim())));
  for (int ain = 0; ain <= ell_; ++ain) {
    const int aout = lowers ? ain - 1 : ain + 1;
    if (aout < 0 || aout > ell_) continue;
    for (std::uint32_t sin : subsets_[static_cast<std::size_t>(ain)]) {
      const std::uint32_t moves = lowers ? sin : (full & ~sin);
      for (int t : bit_list(moves)) {
        const std::uint32_t sout = sin ^ (1u << t);
        TorusScalar val;
        if (!tilde && lowers) {
          // one-step raising kernel; the moved character carries r - a_in
          MonoBuilder b(ell_, ell_ - ain - r, ell_);
          b.add_mask(full & ~sin, -1);
          b.add(t, r - ain);
          val = b.done((ell_ - ain) % 2 ? Int(-1) : Int(1));
        } else if (!tilde) {
          MonoBuilder b(ell_, -r + ain, -ell_);
          b.add_mask(sin, 1);
          b.add(t, r + ell_ - ain);
          val = b.done(ain % 2 ? Int(-1) : Int(1));
        } else if (lowers) {
          // unit-twisted form: both tautological determinants appear
          MonoBuilder b(ell_, -2 * r - ain + aout * (-r - ell_ + ain) + ain * (r + ell_ - aout), -1);
          b.add_mask(sout, -r - ell_ + ain);
          b.add_mask(sin, r + ell_ - aout);
          val = b.done((ell_ - ain) % 2 ? Int(-1) : Int(1));
        } else {
          MonoBuilder b(ell_, -2 * r + ain + aout * (r - ain) + ain * (-r + aout), 0);
          b.add_mask(sout, r - ain);
          b.add_mask(sin, -r + aout);
          val = b.done(ain % 2 ? Int(-1) : Int(1));
        }
        // The Euler factor of the correspondence against the one of the
        // target: almost everything cancels pairwise, leaving one product
        // over the moved character per side of the nesting.
        auto brace = [&](int num_var, int den_var, int qe) {
          MonoBuilder b(ell_, qe);
          b.add(num_var, 1);
          b.add(den_var, -1);
          return TorusScalar(Int(1), ell_) - b.done();
        };
        TorusScalar num = val;
        TorusScalar den(Int(1), ell_);
        if (lowers) {
          for (int j : bit_list(full & ~sin)) den = den * brace(t, j, 0);
          if (sp == Space::kQ)
            for (int s : bit_list(sout)) num = num * brace(t, s, -2);
          else
            for (int j : bit_list(full & ~sin)) num = num * brace(j, t, -2);
        } else {
          for (int s : bit_list(sin)) den = den * brace(s, t, 0);
          if (sp == Space::kQ)
            for (int j : bit_list(full & ~sout)) num = num * brace(j, t, -2);
          else
            for (int s : bit_list(sin)) num = num * brace(t, s, -2);
        }
        m[static_cast<std::size_t>(flat_of_mask_[sout])][static_cast<std::size_t>(flat_of_mask_[sin])] =
            RationalScalar(num, den);
      }
    }
  }
  return m;
}

Matrix GrassModel::diagonal_series_matrix(const std::string& op, long mode) const {
  Matrix m(static_cast<std::size_t>(dim()), ModuleVec(static_cast<std::size_t>(dim())));
  const bool plus = (op == "k+");
  const int rank1 = ell_ + 1;  // last slot is the spectral variable
  for (int a = 0; a <= ell_; ++a)
    for (std::uint32_t s : subsets_[static_cast<std::size_t>(a)]) {
      RationalScalar k(TorusScalar(BarLaurent::q(ell_ - 2 * a), rank1));
      auto bracket = [&](int var, int qe) {
        Mono mo;
        mo.q = qe;
        mo.z.assign(static_cast<std::size_t>(rank1), 0);
        mo.z[static_cast<std::size_t>(var)] = 1;
        mo.z[static_cast<std::size_t>(ell_)] = -1;
        return TorusScalar(Int(1), rank1) - TorusScalar::monomial(mo);
      };
      const std::uint32_t sc = ((1u << ell_) - 1) & ~s;
      for (int t : bit_list(sc))
        k = k * RationalScalar(bracket(t, -3), bracket(t, -1));
      for (int i : bit_list(s))
        k = k * RationalScalar(bracket(i, 1), bracket(i, -1));
      const auto exp = series_expand(k, ell_, plus ? Direction::kToInfinity : Direction::kToZero,
                                     static_cast<int>(mode));
      const int key = plus ? -static_cast<int>(mode) : static_cast<int>(mode);
      TorusScalar entry(Int(0), ell_);
      if (auto it = exp.find(key); it != exp.end()) entry = drop_spectral(it->second, ell_);
      const int f = flat_of_mask_[s];
      m[static_cast<std::size_t>(f)][static_cast<std::size_t>(f)] = entry;
    }
  return m;
}

Matrix GrassModel::build_matrix(const std::string& op, long mode, Space sp) const {
  const std::size_t n = static_cast<std::size_t>(dim());
  if (op == "x+" || op == "x-" || op == "xt+" || op == "xt-") return hecke_matrix(mode, op, sp);
  if (op == "k+" || op == "k-") {
    if (mode < 0) throw DomainError("Cartan series mode must be >= 0");
    return diagonal_series_matrix(op, mode);
  }
  if (op == "k" || op == "kinv") {
    Matrix m(n, ModuleVec(n));
    const int sign = (op == "k") ? 1 : -1;
    for (int a = 0; a <= ell_; ++a)
      for (std::uint32_t s : subsets_[static_cast<std::size_t>(a)]) {
        const auto f = static_cast<std::size_t>(flat_of_mask_[s]);
        m[f][f] = RationalScalar(TorusScalar(BarLaurent::q(sign * (ell_ - 2 * a)), ell_));
      }
    return m;
  }
  if (op == "h") {
    if (mode != 1 && mode != -1) throw DomainError("only the first Cartan modes are assigned");
    const Matrix& series = op_matrix(mode > 0 ? "k+" : "k-", 1, Space::kQ);
    const RationalScalar qdiff{TorusScalar(BarLaurent::q(1) - BarLaurent::q(-1), ell_)};
    Matrix m(n, ModuleVec(n));
    for (int a = 0; a <= ell_; ++a)
      for (std::uint32_t s : subsets_[static_cast<std::size_t>(a)]) {
        const auto f = static_cast<std::size_t>(flat_of_mask_[s]);
        const RationalScalar kpow{
            TorusScalar(BarLaurent::q((mode > 0 ? -1 : 1) * (ell_ - 2 * a)), ell_)};
        RationalScalar v = kpow * series[f][f] / qdiff;
        if (mode < 0) v = -v;
        m[f][f] = v;
      }
    return m;
  }
  if (op == "e0") return mat_mul(op_matrix("kinv", 0, sp), op_matrix("x-", 1, sp));
  if (op == "f0") return mat_mul(op_matrix("x+", -1, sp), op_matrix("k", 0, sp));
  if (op == "ediv" || op == "fdiv") {
    if (mode < 0) throw DomainError("negative divided power");
    Matrix acc(n, ModuleVec(n));
    for (std::size_t i = 0; i < n; ++i) acc[i][i] = RationalScalar(1);
    const Matrix& step = op_matrix(op == "ediv" ? "x+" : "x-", 0, sp);
    for (long i = 0; i < mode; ++i) acc = mat_mul(step, acc);
    const RationalScalar fact{TorusScalar(qfact(mode), ell_)};
    for (auto& row : acc)
      for (auto& v : row) v = v / fact;
    return acc;
  }
  throw DomainError("unknown operator: " + op);
}

const Matrix& GrassModel::op_matrix(const std::string& op0, long mode0, Space sp) const {
  std::string op = op0;
  long mode = mode0;
  if (op == "e") {
    op = "x+";
    mode = 0;
  } else if (op == "f") {
    op = "x-";
    mode = 0;
  } else if (op == "k0") {
    op = "kinv";
  } else if (op == "k0inv") {
    op = "k";
  }
  if (op == "k" || op == "kinv" || op == "e0" || op == "f0") mode = 0;
  const std::string key = op + "#" + std::to_string(mode) + "#" + space_name(sp);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, build_matrix(op, mode, sp)).first;
  return it->second;
}

FixedClass GrassModel::act(const std::string& op, long mode, const FixedClass& c) const {
  check_class(c);
  const Matrix& m = op_matrix(op, mode, c.space);
  const ModuleVec v = to_vec(c);
  ModuleVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (m[i][j].is_zero() || v[j].is_zero()) continue;
      out[i] = out[i] + m[i][j] * v[j];
    }
  FixedClass res = from_vec(out, c.space);
  if (c.is_torus() && !res.is_torus())
    throw DomainError("localization sum failed to clear its denominators");
  return res;
}

// -----------------------------------------------------------------------
// Involutions and pushforwards.

FixedClass GrassModel::omega_pullback(const FixedClass& c) const {
  check_class(c);
  const std::uint32_t full = (1u << ell_) - 1;
  FixedClass out = zero(c.space);
  for (int a = 0; a <= ell_; ++a) {
    const auto& subs = subsets_[static_cast<std::size_t>(a)];
    for (std::size_t p = 0; p < subs.size(); ++p) {
      const std::uint32_t sc = full & ~subs[p];
      out.comp[static_cast<std::size_t>(a)][p] =
          c.comp[static_cast<std::size_t>(ell_ - a)][static_cast<std::size_t>(pos_of_mask_[sc])]
              .dagger();
    }
  }
  return out;
}

FixedClass GrassModel::serre_dual(const FixedClass& c) const {
  check_class(c);
  FixedClass out = c;
  for (int a = 0; a <= ell_; ++a) {
    const auto& subs = subsets_[static_cast<std::size_t>(a)];
    const int d = a * (ell_ - a);
    for (std::size_t p = 0; p < subs.size(); ++p) {
      RationalScalar v = c.comp[static_cast<std::size_t>(a)][p].inv_all();
      if (c.space == Space::kF) {
        MonoBuilder omega(ell_);
        omega.add_mask(subs[p], ell_ - a);
        omega.add_mask(((1u << ell_) - 1) & ~subs[p], -a);
        v = v * RationalScalar(omega.done(d % 2 ? Int(-1) : Int(1)));
      } else {
        v = v * RationalScalar(TorusScalar(BarLaurent::q(-2 * d), ell_));
      }
      out.comp[static_cast<std::size_t>(a)][p] = v;
    }
  }
  return out;
}

FixedClass GrassModel::kappa_star(const FixedClass& c) const {
  check_class(c);
  if (c.space != Space::kF) throw DomainError("pushforward starts on the zero sections");
  FixedClass out = c;
  out.space = Space::kQ;
  for (int a = 0; a <= ell_; ++a) {
    const auto& subs = subsets_[static_cast<std::size_t>(a)];
    for (std::size_t p = 0; p < subs.size(); ++p)
      out.comp[static_cast<std::size_t>(a)][p] =
          out.comp[static_cast<std::size_t>(a)][p] * RationalScalar(euler_conormal(a, subs[p]));
  }
  return out;
}

FixedClass GrassModel::kappa_star_inv(const FixedClass& c) const {
  check_class(c);
  if (c.space != Space::kQ) throw DomainError("inverse pushforward starts on the cotangent tower");
  FixedClass out = c;
  out.space = Space::kF;
  for (int a = 0; a <= ell_; ++a) {
    const auto& subs = subsets_[static_cast<std::size_t>(a)];
    for (std::size_t p = 0; p < subs.size(); ++p)
      out.comp[static_cast<std::size_t>(a)][p] =
          out.comp[static_cast<std::size_t>(a)][p] / RationalScalar(euler_conormal(a, subs[p]));
  }
  return out;
}

FixedClass GrassModel::kappa_star_inv_truncated(const FixedClass& c, int order) const {
  FixedClass exact = kappa_star_inv(c);
  for (auto& row : exact.comp)
    for (auto& v : row) {
      const auto tail = q_tail_expand(v, order);
      TorusScalar acc(Int(0), ell_);
      for (const auto& [e, coeff] : tail) acc += TorusScalar(BarLaurent::q(e), ell_) * coeff;
      v = RationalScalar(acc);
    }
  return exact;
}

// -----------------------------------------------------------------------
// Rescaled dualities and the bar involutions.

FixedClass GrassModel::gamma(const FixedClass& c) const {
  if (c.space != Space::kF) throw DomainError("gamma lives on the zero sections");
  FixedClass out = omega_pullback(serre_dual(c));
  for (int a = 0; a <= ell_; ++a) {
    const RationalScalar tw{TorusScalar(BarLaurent::q(a * (ell_ - a)), ell_)};
    for (auto& v : out.comp[static_cast<std::size_t>(a)]) v = tw * v;
  }
  return out;
}

FixedClass GrassModel::gamma_prime(const FixedClass& c) const {
  if (c.space != Space::kQ) throw DomainError("gamma' lives on the cotangent tower");
  FixedClass out = omega_pullback(serre_dual(c));
  for (int a = 0; a <= ell_; ++a) {
    const RationalScalar tw{TorusScalar(BarLaurent::q(3 * a * (ell_ - a)), ell_)};
    for (auto& v : out.comp[static_cast<std::size_t>(a)]) v = tw * v;
  }
  return out;
}

FixedClass GrassModel::braid_full(const FixedClass& c, int sign) const {
  check_class(c);
  if (sign != 1 && sign != -1) throw DomainError("braid sign must be +-1");
  const ModuleHandle m = braid_handle(c.space);
  return from_vec(braid_T(m, 0, to_vec(c), sign * braid_sign_), c.space);
}

FixedClass GrassModel::beta(const FixedClass& c) const {
  if (c.space != Space::kF) throw DomainError("beta lives on the zero sections");
  FixedClass g = gamma(c);
  for (int a = 0; a <= ell_; ++a) {
    const RationalScalar b{TorusScalar(book_.b_diag[static_cast<std::size_t>(a)], ell_)};
    for (std::size_t p = 0; p < g.comp[static_cast<std::size_t>(a)].size(); ++p)
      g.comp[static_cast<std::size_t>(a)][p] =
          b * book_.c.comp[static_cast<std::size_t>(a)][p] * g.comp[static_cast<std::size_t>(a)][p];
  }
  return braid_full(g, 1);
}

FixedClass GrassModel::beta_prime(const FixedClass& c) const {
  if (c.space != Space::kQ) throw DomainError("beta' lives on the cotangent tower");
  FixedClass g = gamma_prime(c);
  for (int a = 0; a <= ell_; ++a) {
    const RationalScalar b{TorusScalar(book_.b_diag[static_cast<std::size_t>(a)], ell_)};
    for (std::size_t p = 0; p < g.comp[static_cast<std::size_t>(a)].size(); ++p)
      g.comp[static_cast<std::size_t>(a)][p] =
          b * book_.c.comp[static_cast<std::size_t>(a)][p] * g.comp[static_cast<std::size_t>(a)][p];
  }
  return braid_full(g, 1);
}

// -----------------------------------------------------------------------
// Pairings.

RationalScalar GrassModel::pair(const FixedClass& x, const FixedClass& y, PairKind kind) const {
  check_class(x);
  check_class(y);
  switch (kind) {
    case PairKind::kColon: {
      if (x.space != Space::kF || y.space != Space::kQ)
        throw DomainError("the colon pairing takes (zero sections, cotangent tower)");
      RationalScalar acc;
      for (int a = 0; a <= ell_; ++a) {
        const auto& subs = subsets_[static_cast<std::size_t>(a)];
        for (std::size_t p = 0; p < subs.size(); ++p) {
          const RationalScalar& xv = x.comp[static_cast<std::size_t>(a)][p];
          const RationalScalar& yv = y.comp[static_cast<std::size_t>(a)][p];
          if (xv.is_zero() || yv.is_zero()) continue;
          acc = acc + xv * yv / RationalScalar(euler_base(a, subs[p]));
        }
      }
      if (x.is_torus() && y.is_torus() && !acc.is_torus())
        throw DomainError("localization sum failed to clear its denominators");
      return acc;
    }
    case PairKind::kDoubleBar: {
      if (x.space != Space::kF || y.space != Space::kQ)
        throw DomainError("the double-bar pairing takes (zero sections, cotangent tower)");
      FixedClass x2 = x;
      for (int a = 0; a <= ell_; ++a) {
        const RationalScalar av{TorusScalar(book_.a_diag[static_cast<std::size_t>(a)], ell_)};
        for (std::size_t p = 0; p < x2.comp[static_cast<std::size_t>(a)].size(); ++p)
          x2.comp[static_cast<std::size_t>(a)][p] = av *
                                                    x2.comp[static_cast<std::size_t>(a)][p] /
                                                    book_.c.comp[static_cast<std::size_t>(a)][p];
      }
      return pair(x2, omega_pullback(braid_full(y, -1)), PairKind::kColon);
    }
    case PairKind::kSingleBar:
      if (x.space != Space::kF || y.space != Space::kF)
        throw DomainError("the bar pairing takes two classes on the zero sections");
      return pair(x, kappa_star(y), PairKind::kDoubleBar);
    case PairKind::kSingleBarPrime:
      if (x.space != Space::kQ || y.space != Space::kQ)
        throw DomainError("the primed pairing takes two classes on the cotangent tower");
      return pair(kappa_star_inv(x), y, PairKind::kDoubleBar);
  }
  throw DomainError("unknown pairing kind");
}

BarLaurent GrassModel::pair_partial(const FixedClass& x, const FixedClass& y, PairKind kind) const {
  const RationalScalar v = pair(x, y, kind);
  if (!v.is_torus())
    throw DomainError("pairing value is not polynomial; use the tail projection");
  return v.to_torus().partial();
}

TailSeries GrassModel::pair_partial_prime(const FixedClass& x, const FixedClass& y,
                                          int order) const {
  return partial_tail(pair(x, y, PairKind::kSingleBarPrime), order);
}

// -----------------------------------------------------------------------
// Framing symmetry.

FixedClass GrassModel::permute(const FixedClass& c, const std::vector<int>& perm) const {
  check_class(c);
  if (static_cast<int>(perm.size()) != ell_) throw DomainError("permutation size mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || v >= ell_ || seen[static_cast<std::size_t>(v)])
      throw DomainError("not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
  }
  FixedClass out = zero(c.space);
  for (int a = 0; a <= ell_; ++a) {
    const auto& subs = subsets_[static_cast<std::size_t>(a)];
    for (std::size_t p = 0; p < subs.size(); ++p) {
      std::uint32_t image = 0;
      for (int i : bit_list(subs[p])) image |= 1u << perm[static_cast<std::size_t>(i)];
      out.comp[static_cast<std::size_t>(a)][static_cast<std::size_t>(pos_of_mask_[image])] =
          rat_remap(c.comp[static_cast<std::size_t>(a)][p], perm, ell_);
    }
  }
  return out;
}

bool GrassModel::is_symmetric(const FixedClass& c) const {
  for (int i = 0; i + 1 < ell_; ++i) {
    std::vector<int> perm(static_cast<std::size_t>(ell_));
    for (int j = 0; j < ell_; ++j) perm[static_cast<std::size_t>(j)] = j;
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i) + 1]);
    if (!(permute(c, perm) == c)) return false;
  }
  return true;
}

// -----------------------------------------------------------------------
// Module view.

void GrassModel::fixed_point_frame(std::vector<WeightVec>& wts,
                                   std::vector<std::string>& labels) const {
  for (int a = 0; a <= ell_; ++a)
    for (std::uint32_t s : subsets_[static_cast<std::size_t>(a)]) {
      wts.push_back(WeightVec{{Int(ell_ - 2 * a)}});
      std::ostringstream lab;
      lab << "a=" << a << " S={";
      bool first = true;
      for (int i : bit_list(s)) {
        if (!first) lab << ",";
        lab << (i + 1);
        first = false;
      }
      lab << "}";
      labels.push_back(lab.str());
    }
}

// Just enough structure for string decompositions at the finite node.
ModuleHandle GrassModel::braid_handle(Space sp) const {
  std::vector<WeightVec> wts;
  std::vector<std::string> labels;
  fixed_point_frame(wts, labels);
  ModuleHandle m(datum_, std::move(wts), std::move(labels), ell_);
  m.assign(Letter{LetterKind::kE, 0, 0}, op_matrix("e", 0, sp));
  m.assign(Letter{LetterKind::kF, 0, 0}, op_matrix("f", 0, sp));
  return m;
}

ModuleHandle GrassModel::module_handle(Space sp, int window) const {
  if (window < 0) throw DomainError("window must be >= 0");
  std::vector<WeightVec> wts;
  std::vector<std::string> labels;
  fixed_point_frame(wts, labels);
  ModuleHandle m(datum_, std::move(wts), std::move(labels), ell_);
  const int xw = window + 2;
  const int cw = std::max(window + 2, 2 * window);
  for (long r = -xw; r <= xw; ++r) {
    m.assign(Letter{LetterKind::kXp, 0, r}, op_matrix("x+", r, sp));
    m.assign(Letter{LetterKind::kXm, 0, r}, op_matrix("x-", r, sp));
  }
  for (long t = 1; t <= cw; ++t) {
    m.assign(Letter{LetterKind::kKp, 0, t}, op_matrix("k+", t, sp));
    m.assign(Letter{LetterKind::kKm, 0, t}, op_matrix("k-", t, sp));
  }
  m.assign(Letter{LetterKind::kE, 0, 0}, op_matrix("e", 0, sp));
  m.assign(Letter{LetterKind::kF, 0, 0}, op_matrix("f", 0, sp));
  m.assign(Letter{LetterKind::kK, 0, 1}, op_matrix("k", 0, sp));
  m.assign(Letter{LetterKind::kK, 0, -1}, op_matrix("kinv", 0, sp));
  m.assign(Letter{LetterKind::kH, 0, 1}, op_matrix("h", 1, sp));
  m.assign(Letter{LetterKind::kH, 0, -1}, op_matrix("h", -1, sp));
  m.assign(Letter{LetterKind::kE, 1, 0}, op_matrix("e0", 0, sp));
  m.assign(Letter{LetterKind::kF, 1, 0}, op_matrix("f0", 0, sp));
  m.assign(Letter{LetterKind::kK, 1, 1}, op_matrix("k0", 0, sp));
  m.assign(Letter{LetterKind::kK, 1, -1}, op_matrix("k0inv", 0, sp));
  return m;
}

ModuleVec GrassModel::to_vec(const FixedClass& c) const {
  check_class(c);
  ModuleVec out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (const auto& row : c.comp)
    for (const auto& v : row) out.push_back(v);
  return out;
}

FixedClass GrassModel::from_vec(const ModuleVec& v, Space sp) const {
  if (static_cast<int>(v.size()) != dim()) throw DomainError("vector dimension mismatch");
  FixedClass out = zero(sp);
  std::size_t idx = 0;
  for (auto& row : out.comp)
    for (auto& x : row) x = v[idx++];
  return out;
}

// -----------------------------------------------------------------------
// Scalar book.

void GrassModel::build_scalar_book() {
  book_.a_diag.resize(static_cast<std::size_t>(ell_) + 1);
  book_.b_diag.resize(static_cast<std::size_t>(ell_) + 1);
  for (int a = 0; a <= ell_; ++a) {
    book_.a_diag[static_cast<std::size_t>(a)] = BarLaurent::monomial(a, a % 2 ? Int(-1) : Int(1));
    book_.b_diag[static_cast<std::size_t>(a)] =
        BarLaurent::monomial(a - ell_ - a * (ell_ - a), (a - ell_) % 2 ? Int(-1) : Int(1));
  }

  // r and s are the braid images of the two extreme units; the product must
  // be (-q)^ell, which fixes the direction of the longest-element operator.
  const ModuleHandle mq = braid_handle(Space::kQ);
  auto extract = [&](int source, int target, int sign) {
    const ModuleVec img = braid_T(mq, 0, to_vec(unit(source, Space::kQ)), sign);
    TorusScalar out;
    for (int idx = 0; idx < dim(); ++idx) {
      const auto [a, p] = unflatten(idx);
      if (a == target) {
        out = img[static_cast<std::size_t>(idx)].to_torus();
      } else if (!img[static_cast<std::size_t>(idx)].is_zero()) {
        throw InternalError("braid image of a unit left its component");
      }
    }
    return out;
  };
  const TorusScalar want = TorusScalar(BarLaurent::monomial(ell_, ell_ % 2 ? Int(-1) : Int(1)), ell_);
  for (int attempt = 0; attempt < 2; ++attempt) {
    book_.r = extract(ell_, 0, braid_sign_);
    book_.s = extract(0, ell_, braid_sign_);
    if (book_.r * book_.s == want) break;
    if (attempt == 1) throw InternalError("braid normalization failed both directions");
    braid_sign_ = -braid_sign_;
  }

  // strip the tautological factors off r; a pure signed power of q remains
  MonoBuilder strip(ell_, ell_ * ell_, ell_ - ell_ * ell_);
  const TorusScalar theta_t = book_.r * strip.done();
  if (!theta_t.is_monomial()) throw InternalError("framing constant is not a monomial");
  const Mono& tm = theta_t.lead_mono();
  const Int tc = theta_t.lead_coeff();
  bool zfree = true;
  for (int e : tm.z)
    if (e != 0) zfree = false;
  if (!zfree || tm.q != ell_ * ell_ || (tc != 1 && tc != -1))
    throw InternalError("framing constant has the wrong shape");
  book_.theta = BarLaurent::monomial(ell_ * ell_, tc);
  book_.epsilon = tc > 0 ? 1 : -1;

  // the twisting class, assembled from its display factors
  book_.c = zero(Space::kQ);
  for (int a = 0; a <= ell_; ++a) {
    const long xv = to_long(quad_.x(RootVec{{Int(a)}}));
    const int yv = quad_.y(RootVec{{Int(a)}});
    const auto& subs = subsets_[static_cast<std::size_t>(a)];
    for (std::size_t p = 0; p < subs.size(); ++p) {
      const std::uint32_t s = subs[p];
      const std::uint32_t sc = ((1u << ell_) - 1) & ~s;
      TorusScalar val(
          BarLaurent::monomial(static_cast<int>(xv) - 2 * a * a, (yv % 2) ? Int(-1) : Int(1)),
          ell_);
      MonoBuilder w(ell_, 0, -2 * a * ell_);           // framing determinant twist
      val = val * w.done();
      val = val * mono_pow(restrict_taut("LambdaV", a, s), 2 * ell_);
      for (int i : bit_list(s))                        // dual pair of tautological bundles
        for (int j : bit_list(sc)) {
          MonoBuilder b(ell_, -2);
          b.add(j, 1);
          b.add(i, -1);
          val = val * b.done();
        }
      val = val * book_.r;
      book_.c.comp[static_cast<std::size_t>(a)][p] = val;
    }
  }
}

// -----------------------------------------------------------------------
// Serialization.

std::string GrassModel::to_json(const FixedClass& c) const {
  check_class(c);
  nlohmann::ordered_json j;
  j["space"] = space_name(c.space);
  j["ell"] = ell_;
  auto& comps = j["components"] = nlohmann::ordered_json::array();
  for (int a = 0; a <= ell_; ++a) {
    nlohmann::ordered_json entry;
    entry["a"] = a;
    auto& rs = entry["restrictions"] = nlohmann::ordered_json::array();
    const auto& subs = subsets_[static_cast<std::size_t>(a)];
    for (std::size_t p = 0; p < subs.size(); ++p) {
      nlohmann::ordered_json rj;
      auto& list = rj["subset"] = nlohmann::ordered_json::array();
      for (int i : bit_list(subs[p])) list.push_back(i + 1);
      rj["value"] = c.comp[static_cast<std::size_t>(a)][p].str();
      rs.push_back(std::move(rj));
    }
    comps.push_back(std::move(entry));
  }
  return j.dump(2);
}

}  // namespace qloop
