#include "qloop/uqalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace qloop {

// -----------------------------------------------------------------------
// Letters and expressions.

std::string Letter::str() const {
  std::ostringstream os;
  switch (kind) {
    case LetterKind::kE: os << "e" << node; break;
    case LetterKind::kF: os << "f" << node; break;
    case LetterKind::kK: os << "k" << node << (a < 0 ? "^-1" : ""); break;
    case LetterKind::kEdiv: os << "e" << node << "^(" << a << ")"; break;
    case LetterKind::kFdiv: os << "f" << node << "^(" << a << ")"; break;
    case LetterKind::kXp: os << "x+(" << node << "," << a << ")"; break;
    case LetterKind::kXm: os << "x-(" << node << "," << a << ")"; break;
    case LetterKind::kKp: os << "kc(" << node << "," << a << ")"; break;
    case LetterKind::kKm: os << "kc(" << node << "," << -a << ")"; break;
    case LetterKind::kH: os << "h(" << node << "," << a << ")"; break;
    case LetterKind::kP: os << "p(" << node << "," << a << ")"; break;
  }
  return os.str();
}

OpExpr::OpExpr(Word w, BarLaurent c) {
  if (!c.is_zero()) terms_.emplace(std::move(w), std::move(c));
}

void OpExpr::prune() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
}

OpExpr OpExpr::operator-() const {
  OpExpr out;
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
  return out;
}

OpExpr operator+(const OpExpr& a, const OpExpr& b) {
  OpExpr out = a;
  for (const auto& [w, c] : b.terms_) {
    auto [it, fresh] = out.terms_.emplace(w, c);
    if (!fresh) it->second = it->second + c;
  }
  out.prune();
  return out;
}

OpExpr operator-(const OpExpr& a, const OpExpr& b) { return a + (-b); }

OpExpr operator*(const OpExpr& a, const OpExpr& b) {
  OpExpr out;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      const BarLaurent c = ca * cb;
      auto [it, fresh] = out.terms_.emplace(std::move(w), c);
      if (!fresh) it->second = it->second + c;
    }
  out.prune();
  return out;
}

OpExpr operator*(const BarLaurent& c, const OpExpr& a) {
  OpExpr out;
  for (const auto& [w, t] : a.terms_) {
    const BarLaurent p = c * t;
    if (!p.is_zero()) out.terms_.emplace(w, p);
  }
  return out;
}

OpExpr OpExpr::coeff_bar() const {
  OpExpr out;
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, c.bar());
  return out;
}

std::string OpExpr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (const Letter& l : w) os << "*" << l.str();
  }
  return os.str();
}

namespace gen {
OpExpr e(int i) { return OpExpr({{LetterKind::kE, i, 0}}, BarLaurent(1)); }
OpExpr f(int i) { return OpExpr({{LetterKind::kF, i, 0}}, BarLaurent(1)); }
OpExpr k(int i, int exp) {
  if (exp != 1 && exp != -1) throw DomainError("k exponent must be +-1");
  return OpExpr({{LetterKind::kK, i, exp}}, BarLaurent(1));
}
OpExpr ediv(int i, long n) {
  if (n < 0) throw DomainError("negative divided power");
  return OpExpr({{LetterKind::kEdiv, i, n}}, BarLaurent(1));
}
OpExpr fdiv(int i, long n) {
  if (n < 0) throw DomainError("negative divided power");
  return OpExpr({{LetterKind::kFdiv, i, n}}, BarLaurent(1));
}
OpExpr xp(int i, long r) { return OpExpr({{LetterKind::kXp, i, r}}, BarLaurent(1)); }
OpExpr xm(int i, long r) { return OpExpr({{LetterKind::kXm, i, r}}, BarLaurent(1)); }
OpExpr kp(int i, long r) {
  if (r < 0) throw DomainError("kp mode must be >= 0");
  return OpExpr({{LetterKind::kKp, i, r}}, BarLaurent(1));
}
OpExpr km(int i, long r) {
  if (r < 0) throw DomainError("km mode must be >= 0");
  return OpExpr({{LetterKind::kKm, i, r}}, BarLaurent(1));
}
OpExpr h(int i, long s) {
  if (s == 0) throw DomainError("h mode must be nonzero");
  return OpExpr({{LetterKind::kH, i, s}}, BarLaurent(1));
}
OpExpr p(int i, long s) {
  if (s == 0) throw DomainError("p mode must be nonzero");
  return OpExpr({{LetterKind::kP, i, s}}, BarLaurent(1));
}
}  // namespace gen

// -----------------------------------------------------------------------
// Letter-wise rewriting.

namespace {

enum class MapId { kTau, kPsi, kS, kBar, kA, kB };

OpExpr letter_image(MapId id, const Letter& l) {
  using gen::e;
  using gen::ediv;
  using gen::f;
  using gen::fdiv;
  using gen::k;
  using gen::km;
  using gen::kp;
  using gen::xm;
  using gen::xp;
  const int i = l.node;
  switch (id) {
    case MapId::kTau:
      switch (l.kind) {
        case LetterKind::kE: return f(i);
        case LetterKind::kF: return e(i);
        case LetterKind::kK: return k(i, -static_cast<int>(l.a));
        case LetterKind::kEdiv: return fdiv(i, l.a);
        case LetterKind::kFdiv: return ediv(i, l.a);
        case LetterKind::kXp: return xm(i, -l.a);
        case LetterKind::kXm: return xp(i, -l.a);
        case LetterKind::kKp: return km(i, l.a);
        case LetterKind::kKm: return kp(i, l.a);
        default: break;
      }
      break;
    case MapId::kPsi:
      switch (l.kind) {
        case LetterKind::kE: return BarLaurent::q() * (k(i) * f(i));
        case LetterKind::kF: return BarLaurent::q() * (k(i, -1) * e(i));
        case LetterKind::kK: return k(i, static_cast<int>(l.a));
        default: break;
      }
      break;
    case MapId::kS:
      switch (l.kind) {
        case LetterKind::kE: return -(e(i) * k(i, -1));
        case LetterKind::kF: return -(k(i) * f(i));
        case LetterKind::kK: return k(i, -static_cast<int>(l.a));
        default: break;
      }
      break;
    case MapId::kBar:
      switch (l.kind) {
        case LetterKind::kE: return e(i);
        case LetterKind::kF: return f(i);
        case LetterKind::kK: return k(i, -static_cast<int>(l.a));
        case LetterKind::kEdiv: return ediv(i, l.a);
        case LetterKind::kFdiv: return fdiv(i, l.a);
        default: break;
      }
      break;
    case MapId::kA:
      // e_i = x+_{i,0} and f_i = x-_{i,0}; the Cartan family is fixed since
      // it is generated by raising-lowering commutators, which A scales by
      // (-q^-1)(-q) = 1.
      switch (l.kind) {
        case LetterKind::kE: return BarLaurent::monomial(-1, -1) * e(i);
        case LetterKind::kF: return BarLaurent::monomial(1, -1) * f(i);
        case LetterKind::kEdiv:
          return BarLaurent::monomial(static_cast<int>(-l.a),
                                      (l.a % 2 ? -1 : 1)) *
                 ediv(i, l.a);
        case LetterKind::kFdiv:
          return BarLaurent::monomial(static_cast<int>(l.a),
                                      (l.a % 2 ? -1 : 1)) *
                 fdiv(i, l.a);
        case LetterKind::kK: return k(i, static_cast<int>(l.a));
        case LetterKind::kXp: return BarLaurent::monomial(-1, -1) * xp(i, l.a);
        case LetterKind::kXm: return BarLaurent::monomial(1, -1) * xm(i, l.a);
        case LetterKind::kKp: return kp(i, l.a);
        case LetterKind::kKm: return km(i, l.a);
        case LetterKind::kH: return gen::h(i, l.a);
        case LetterKind::kP: return gen::p(i, l.a);
      }
      break;
    case MapId::kB:
      switch (l.kind) {
        case LetterKind::kE: return -(e(i) * k(i));
        case LetterKind::kF: return -(k(i, -1) * f(i));
        case LetterKind::kK: return k(i, static_cast<int>(l.a));
        case LetterKind::kXp: return -(xp(i, l.a) * k(i));
        case LetterKind::kXm: return -(k(i, -1) * xm(i, l.a));
        case LetterKind::kKp: return kp(i, l.a);
        case LetterKind::kKm: return km(i, l.a);
        case LetterKind::kH: return gen::h(i, l.a);
        case LetterKind::kP: return gen::p(i, l.a);
        default: break;
      }
      break;
  }
  throw DomainError("letter " + l.str() + " is not covered by this map");
}

OpExpr apply_map(MapId id, bool anti, bool bar_coeff, const OpExpr& x) {
  OpExpr out;
  for (const auto& [w, c] : x.terms()) {
    OpExpr word_image = OpExpr::one();
    if (anti) {
      for (auto it = w.rbegin(); it != w.rend(); ++it)
        word_image = word_image * letter_image(id, *it);
    } else {
      for (const Letter& l : w) word_image = word_image * letter_image(id, l);
    }
    out = out + (bar_coeff ? c.bar() : c) * word_image;
  }
  return out;
}

}  // namespace

OpExpr antiauto_tau(const OpExpr& x) { return apply_map(MapId::kTau, true, true, x); }
OpExpr antiauto_psi(const OpExpr& x) { return apply_map(MapId::kPsi, true, false, x); }
OpExpr antiauto_S(const OpExpr& x) { return apply_map(MapId::kS, true, false, x); }
OpExpr auto_bar(const OpExpr& x) { return apply_map(MapId::kBar, false, true, x); }
OpExpr auto_A(const OpExpr& x) { return apply_map(MapId::kA, false, false, x); }
OpExpr auto_B(const OpExpr& x) { return apply_map(MapId::kB, false, false, x); }

Int affine_cartan_entry(const CartanDatum& d, int i, int j) {
  const int n = d.rank();
  if (i < 0 || j < 0 || i > n || j > n) throw DomainError("node out of range");
  if (i < n && j < n) return d.cartan()[i][j];
  if (i == n && j == n) return 2;
  const RootVec& theta = d.highest_root();
  const int fin = i == n ? j : i;
  return -pairing(d, d.simple_root(fin), theta);
}

OpExpr braid_auto(const CartanDatum& d, int i, int sign, const OpExpr& x) {
  if (sign != 1 && sign != -1) throw DomainError("braid sign must be +-1");
  auto epow = [&](long n) { return n == 0 ? OpExpr::one() : gen::ediv(i, n); };
  auto fpow = [&](long n) { return n == 0 ? OpExpr::one() : gen::fdiv(i, n); };
  auto image = [&](const Letter& l) -> OpExpr {
    using gen::e;
    using gen::f;
    using gen::k;
    const int j = l.node;
    const long m = -static_cast<long>(affine_cartan_entry(d, i, j));
    switch (l.kind) {
      case LetterKind::kE: {
        if (j == i) return sign == 1 ? -(f(i) * k(i)) : -(k(i, -1) * f(i));
        OpExpr out;
        for (long s = 0; s <= m; ++s) {
          const BarLaurent c = BarLaurent::monomial(static_cast<int>(-s),
                                                    (s % 2 ? -1 : 1));
          out = out + c * (sign == 1 ? epow(m - s) * e(j) * epow(s)
                                     : epow(s) * e(j) * epow(m - s));
        }
        return out;
      }
      case LetterKind::kF: {
        if (j == i) return sign == 1 ? -(k(i, -1) * e(i)) : -(e(i) * k(i));
        OpExpr out;
        for (long s = 0; s <= m; ++s) {
          const BarLaurent c = BarLaurent::monomial(static_cast<int>(s),
                                                    (s % 2 ? -1 : 1));
          out = out + c * (sign == 1 ? fpow(s) * f(j) * fpow(m - s)
                                     : fpow(m - s) * f(j) * fpow(s));
        }
        return out;
      }
      case LetterKind::kK: {
        // T(k_j) = k_j k_i^{-a_ij} independently of the braid direction.
        const int exp = static_cast<int>(l.a);
        if (j == i) return k(i, -exp);  // k_i^e k_i^{-2e} = k_i^{-e}
        OpExpr out = k(j, exp);
        const long twist = m;  // -a_ij >= 0 off the diagonal
        const int unit = exp > 0 ? 1 : -1;
        for (long t = 0; t < twist; ++t) out = out * k(i, unit);
        return out;
      }
      default:
        throw DomainError("letter " + l.str() + " is not covered by the braid map");
    }
  };
  OpExpr out;
  for (const auto& [w, c] : x.terms()) {
    OpExpr word_image = OpExpr::one();
    for (const Letter& l : w) word_image = word_image * image(l);
    out = out + c * word_image;
  }
  return out;
}

// -----------------------------------------------------------------------
// Modules.

bool is_zero_vec(const ModuleVec& v) {
  for (const auto& c : v)
    if (!c.is_zero()) return false;
  return true;
}

ModuleHandle::ModuleHandle(const CartanDatum& datum,
                           std::vector<WeightVec> weights,
                           std::vector<std::string> labels, int torus_rank)
    : datum_(&datum),
      weights_(std::move(weights)),
      labels_(std::move(labels)),
      torus_rank_(torus_rank) {
  if (labels_.size() != weights_.size())
    throw DomainError("labels and weights must have equal length");
  for (const WeightVec& w : weights_)
    if (static_cast<int>(w.w.size()) != datum_->rank())
      throw DomainError("weight rank mismatch");
}

void ModuleHandle::assign(const Letter& l, Matrix m) {
  const std::size_t n = weights_.size();
  if (m.size() != n) throw DomainError("matrix dimension mismatch");
  for (const auto& row : m)
    if (row.size() != n) throw DomainError("matrix dimension mismatch");
  action_[l] = std::move(m);
}

const Matrix& ModuleHandle::matrix(const Letter& l) const {
  auto it = action_.find(l);
  if (it == action_.end())
    throw DomainError("letter " + l.str() + " is not assigned on this module");
  return it->second;
}

ModuleVec ModuleHandle::basis_vector(int b) const {
  ModuleVec v(weights_.size());
  v[b] = RationalScalar(TorusScalar(Int(1), torus_rank_));
  return v;
}

namespace {
ModuleVec matrix_apply(const Matrix& m, const ModuleVec& v) {
  const std::size_t n = v.size();
  ModuleVec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    RationalScalar acc;
    for (std::size_t j = 0; j < n; ++j)
      if (!m[i][j].is_zero() && !v[j].is_zero()) acc = acc + m[i][j] * v[j];
    out[i] = acc;
  }
  return out;
}
}  // namespace

ModuleVec ModuleHandle::apply_letter(const Letter& l, const ModuleVec& v) const {
  auto it = action_.find(l);
  if (it != action_.end()) return matrix_apply(it->second, v);
  // Fallbacks keeping module assembly small: divided powers from the plain
  // letter, zero Cartan modes from k^{±1}.
  if (l.kind == LetterKind::kEdiv || l.kind == LetterKind::kFdiv) {
    const Letter plain{l.kind == LetterKind::kEdiv ? LetterKind::kE
                                                   : LetterKind::kF,
                       l.node, 0};
    ModuleVec w = v;
    for (long t = 0; t < l.a; ++t) w = apply_letter(plain, w);
    const RationalScalar fact{TorusScalar(qfact(l.a), torus_rank_)};
    for (auto& c : w) c = c / fact;
    return w;
  }
  if ((l.kind == LetterKind::kKp || l.kind == LetterKind::kKm) && l.a == 0) {
    return apply_letter(
        {LetterKind::kK, l.node, l.kind == LetterKind::kKp ? 1 : -1}, v);
  }
  throw DomainError("letter " + l.str() + " is not assigned on this module");
}

ModuleVec ModuleHandle::eval(const OpExpr& x, const ModuleVec& v) const {
  if (static_cast<int>(v.size()) != dim()) throw DomainError("vector dimension mismatch");
  ModuleVec out = zero_vector();
  for (const auto& [word, coeff] : x.terms()) {
    ModuleVec w = v;
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      w = apply_letter(*it, w);
    const RationalScalar c{TorusScalar(coeff, torus_rank_)};
    for (int b = 0; b < dim(); ++b)
      if (!w[b].is_zero()) out[b] = out[b] + c * w[b];
  }
  return out;
}

Int ModuleHandle::string_pairing(int node, const WeightVec& mu) const {
  if (node == affine_node()) return -pairing(*datum_, mu, datum_->highest_root());
  return pairing(*datum_, mu, datum_->simple_root(node));
}

std::map<WeightVec, ModuleVec> ModuleHandle::weight_split(const ModuleVec& v) const {
  std::map<WeightVec, ModuleVec> out;
  for (int b = 0; b < dim(); ++b) {
    if (v[b].is_zero()) continue;
    auto [it, fresh] = out.emplace(weights_[b], zero_vector());
    it->second[b] = v[b];
  }
  return out;
}

// -----------------------------------------------------------------------
// Strings and the braid action.

namespace {

ModuleVec scaled(const ModuleVec& v, const RationalScalar& c) {
  ModuleVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out[i] = c * v[i];
  return out;
}

void add_to(ModuleVec& acc, const ModuleVec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) acc[i] = acc[i] + v[i];
}

}  // namespace

std::vector<StringPart> string_decompose(const ModuleHandle& m, int node,
                                         const ModuleVec& v) {
  const Letter raise{LetterKind::kE, node, 0};
  const Letter lower_div{LetterKind::kFdiv, node, 0};
  std::map<long, ModuleVec> parts;
  for (const auto& [mu, comp0] : m.weight_split(v)) {
    const Int n0 = m.string_pairing(node, mu);
    ModuleVec comp = comp0;
    // Strictly decreasing top exponent per pass; the cap flags
    // non-integrable data instead of looping forever.
    long cap = 4 * m.dim() + 16;
    while (!is_zero_vec(comp)) {
      long t = 0;
      ModuleVec w = comp;
      std::vector<ModuleVec> chain{comp};
      while (true) {
        ModuleVec up = m.apply_letter(raise, w);
        if (is_zero_vec(up)) break;
        chain.push_back(up);
        w = std::move(up);
        if (++t > cap)
          throw DomainError("raising chain does not terminate; module is not integrable");
      }
      const Int nt = n0 + 2 * t;
      if (nt < t) throw DomainError("string bound violated; module is not integrable");
      const RationalScalar binom{
          TorusScalar(qbinom(static_cast<long>(nt), t), m.torus_rank())};
      const RationalScalar fact{TorusScalar(qfact(t), m.torus_rank())};
      // x_t = e^(t) comp / [nt choose t]
      ModuleVec xt = scaled(chain[static_cast<std::size_t>(t)],
                            RationalScalar(TorusScalar(Int(1), m.torus_rank())) /
                                (fact * binom));
      auto [it, fresh] = parts.emplace(t, xt);
      if (!fresh) add_to(it->second, xt);
      Letter fdiv_t = lower_div;
      fdiv_t.a = t;
      ModuleVec back = m.apply_letter(fdiv_t, xt);
      for (std::size_t i = 0; i < comp.size(); ++i)
        comp[i] = comp[i] - back[i];
      if (--cap < 0)
        throw DomainError("string extraction does not terminate; module is not integrable");
    }
  }
  std::vector<StringPart> out;
  for (auto& [r, x] : parts)
    if (!is_zero_vec(x)) out.push_back({r, std::move(x)});
  return out;
}

ModuleVec kashiwara_f(const ModuleHandle& m, int node, const ModuleVec& v) {
  ModuleVec out = m.zero_vector();
  for (const StringPart& part : string_decompose(m, node, v)) {
    Letter fdiv{LetterKind::kFdiv, node, part.r + 1};
    add_to(out, m.apply_letter(fdiv, part.x));
  }
  return out;
}

ModuleVec kashiwara_e(const ModuleHandle& m, int node, const ModuleVec& v) {
  ModuleVec out = m.zero_vector();
  for (const StringPart& part : string_decompose(m, node, v)) {
    if (part.r == 0) continue;
    Letter fdiv{LetterKind::kFdiv, node, part.r - 1};
    add_to(out, m.apply_letter(fdiv, part.x));
  }
  return out;
}

ModuleVec braid_T(const ModuleHandle& m, int node, const ModuleVec& v,
                  int sign) {
  if (sign != 1 && sign != -1) throw DomainError("braid sign must be +-1");
  ModuleVec out = m.zero_vector();
  for (const StringPart& part : string_decompose(m, node, v)) {
    // Highest-weight components of x live at wt + r*alpha; all basis terms
    // of part.x share that weight by construction.
    for (const auto& [mu, comp] : m.weight_split(part.x)) {
      const Int n_int = m.string_pairing(node, mu);
      if (n_int < 0 || n_int < part.r)
        throw DomainError("string bound violated; module is not integrable");
      const long n = static_cast<long>(n_int);
      const long r = part.r;
      long qexp;
      int sgn;
      if (sign == 1) {
        qexp = (n - r) * (r + 1);
        sgn = (n - r) % 2 ? -1 : 1;
      } else {
        qexp = -r * (n - r + 1);
        sgn = r % 2 ? -1 : 1;
      }
      Letter fdiv{LetterKind::kFdiv, node, n - r};
      ModuleVec moved = m.apply_letter(fdiv, comp);
      add_to(out, scaled(moved, RationalScalar(TorusScalar(
                                    BarLaurent::monomial(
                                        static_cast<int>(qexp), sgn),
                                    m.torus_rank()))));
    }
  }
  return out;
}

ModuleVec braid_word(const ModuleHandle& m, const std::vector<int>& nodes,
                     int sign, const ModuleVec& v) {
  if (sign != 1 && sign != -1) throw DomainError("braid sign must be +-1");
  ModuleVec out = v;
  if (sign == 1) {
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
      out = braid_T(m, *it, out, 1);
  } else {
    for (int node : nodes) out = braid_T(m, node, out, -1);
  }
  return out;
}

// -----------------------------------------------------------------------
// Defining relations.

namespace {

// Truncated bivariate series with operator coefficients, indexed by the
// (z, w) exponent pair.
using OpSeries = std::map<std::pair<int, int>, OpExpr>;

OpSeries shift(const OpSeries& s, int dz, int dw, const BarLaurent& c) {
  OpSeries out;
  for (const auto& [key, x] : s)
    out.emplace(std::make_pair(key.first + dz, key.second + dw), c * x);
  return out;
}

OpSeries add(OpSeries a, const OpSeries& b) {
  for (const auto& [key, x] : b) {
    auto [it, fresh] = a.emplace(key, x);
    if (!fresh) it->second = it->second + x;
  }
  return a;
}

OpSeries mul(const OpSeries& a, const OpSeries& b) {
  OpSeries out;
  for (const auto& [ka, xa] : a)
    for (const auto& [kb, xb] : b) {
      const auto key = std::make_pair(ka.first + kb.first, ka.second + kb.second);
      auto [it, fresh] = out.emplace(key, xa * xb);
      if (!fresh) it->second = it->second + (xa * xb);
    }
  return out;
}

// x_i^sigma carried by the variable slot: mode r at z^-r for either sign,
// |r| <= trunc.  Placing the lowering modes at z^r instead is incompatible
// with the mixed commutator: no Cartan tower satisfies both.
OpSeries x_series(int i, int sigma, int trunc, bool in_z) {
  OpSeries out;
  for (long r = -trunc; r <= trunc; ++r) {
    OpExpr letter = sigma > 0 ? gen::xp(i, r) : gen::xm(i, r);
    const int expo = static_cast<int>(-r);
    out.emplace(in_z ? std::make_pair(expo, 0) : std::make_pair(0, expo),
                std::move(letter));
  }
  return out;
}

// Cartan series k_j^eps in the w slot: modes 0..trunc.
OpSeries k_series(int j, int eps, int trunc) {
  OpSeries out;
  for (long r = 0; r <= trunc; ++r) {
    OpExpr letter = eps > 0 ? gen::kp(j, r) : gen::km(j, r);
    out.emplace(std::make_pair(0, eps > 0 ? -static_cast<int>(r)
                                          : static_cast<int>(r)),
                std::move(letter));
  }
  return out;
}

struct Instance {
  std::string tag;
  OpExpr diff;
};

void series_identity_instances(const ModuleHandle& m, int window,
                               bool cartan_side, std::vector<Instance>& out) {
  const CartanDatum& d = m.datum();
  const int trunc = window + 2;
  for (int i = 0; i < d.rank(); ++i)
    for (int j = 0; j < d.rank(); ++j)
      for (int sigma : {1, -1}) {
        if (cartan_side) {
          for (int eps : {1, -1}) {
            // (w - q^{sigma a_ji} z) k_j^eps(w) x_i^sigma(z)
            //   = (q^{sigma a_ji} w - z) x_i^sigma(z) k_j^eps(w)
            const int aji = static_cast<int>(d.cartan()[j][i]) * sigma;
            const OpSeries kx = mul(k_series(j, eps, trunc), x_series(i, sigma, trunc, true));
            const OpSeries xk = mul(x_series(i, sigma, trunc, true), k_series(j, eps, trunc));
            OpSeries lhs = add(shift(kx, 0, 1, BarLaurent(1)),
                               shift(kx, 1, 0, -BarLaurent::q(aji)));
            OpSeries rhs = add(shift(xk, 0, 1, BarLaurent::q(aji)),
                               shift(xk, 1, 0, -BarLaurent(1)));
            OpSeries diff = add(std::move(lhs), shift(rhs, 0, 0, BarLaurent(-1)));
            for (const auto& [key, x] : diff) {
              if (std::abs(key.first) > window || std::abs(key.second) > window)
                continue;
              std::ostringstream tag;
              tag << "i=" << i << " j=" << j << " sign=" << sigma
                  << " side=" << eps << " ze=" << key.first << " we=" << key.second;
              out.push_back({tag.str(), x});
            }
          }
        } else {
          // (z - q^{sigma a_ij} w) x_i(z) x_j(w) = (q^{sigma a_ij} z - w) x_j(w) x_i(z)
          const int aij = static_cast<int>(d.cartan()[i][j]) * sigma;
          const OpSeries xixj = mul(x_series(i, sigma, trunc, true), x_series(j, sigma, trunc, false));
          const OpSeries xjxi = mul(x_series(j, sigma, trunc, false), x_series(i, sigma, trunc, true));
          OpSeries lhs = add(shift(xixj, 1, 0, BarLaurent(1)),
                             shift(xixj, 0, 1, -BarLaurent::q(aij)));
          OpSeries rhs = add(shift(xjxi, 1, 0, BarLaurent::q(aij)),
                             shift(xjxi, 0, 1, -BarLaurent(1)));
          OpSeries diff = add(std::move(lhs), shift(rhs, 0, 0, BarLaurent(-1)));
          for (const auto& [key, x] : diff) {
            if (std::abs(key.first) > window || std::abs(key.second) > window)
              continue;
            std::ostringstream tag;
            tag << "i=" << i << " j=" << j << " sign=" << sigma
                << " ze=" << key.first << " we=" << key.second;
            out.push_back({tag.str(), x});
          }
        }
      }
}

std::vector<Instance> build_instances(const ModuleHandle& m,
                                      const std::string& id, int window) {
  const CartanDatum& d = m.datum();
  std::vector<Instance> out;
  if (id == "cartan-invertibility") {
    for (int i = 0; i < d.rank(); ++i) {
      out.push_back({"k" + std::to_string(i) + " right",
                     gen::k(i) * gen::k(i, -1) - OpExpr::one()});
      out.push_back({"k" + std::to_string(i) + " left",
                     gen::k(i, -1) * gen::k(i) - OpExpr::one()});
    }
    for (int i = 0; i < d.rank(); ++i)
      for (int j = 0; j < d.rank(); ++j)
        for (int e1 : {1, -1})
          for (int e2 : {1, -1})
            for (long r = 0; r <= window; ++r)
              for (long s = 0; s <= window; ++s) {
                OpExpr a = e1 > 0 ? gen::kp(i, r) : gen::km(i, r);
                OpExpr b = e2 > 0 ? gen::kp(j, s) : gen::km(j, s);
                std::ostringstream tag;
                tag << "commute i=" << i << " j=" << j << " e1=" << e1
                    << " e2=" << e2 << " r=" << r << " s=" << s;
                out.push_back({tag.str(), a * b - b * a});
              }
  } else if (id == "cartan-conjugation") {
    for (int i = 0; i < d.rank(); ++i)
      for (int j = 0; j < d.rank(); ++j)
        for (int sigma : {1, -1})
          for (long r = -window; r <= window; ++r) {
            const int aij = static_cast<int>(d.cartan()[i][j]) * sigma;
            OpExpr x = sigma > 0 ? gen::xp(j, r) : gen::xm(j, r);
            std::ostringstream tag;
            tag << "i=" << i << " j=" << j << " sign=" << sigma << " r=" << r;
            out.push_back(
                {tag.str(), gen::k(i) * x * gen::k(i, -1) - BarLaurent::q(aij) * x});
          }
  } else if (id == "loop-cartan-exchange") {
    series_identity_instances(m, window, true, out);
  } else if (id == "vertex-exchange") {
    series_identity_instances(m, window, false, out);
  } else if (id == "raising-lowering") {
    // (q - q^-1) [x+_{ir}, x-_{js}] = delta_ij (K+_{r+s} - K-_{r+s}) with the
    // missing-side modes read as zero.
    const BarLaurent qdiff = BarLaurent::q(1) - BarLaurent::q(-1);
    for (int i = 0; i < d.rank(); ++i)
      for (int j = 0; j < d.rank(); ++j)
        for (long r = -window; r <= window; ++r)
          for (long s = -window; s <= window; ++s) {
            OpExpr lhs = qdiff * (gen::xp(i, r) * gen::xm(j, s) -
                                  gen::xm(j, s) * gen::xp(i, r));
            OpExpr rhs;
            if (i == j) {
              const long n = r + s;
              if (n >= 0) rhs = rhs + gen::kp(i, n);
              if (n <= 0) rhs = rhs - gen::km(i, -n);
            }
            std::ostringstream tag;
            tag << "i=" << i << " j=" << j << " r=" << r << " s=" << s;
            out.push_back({tag.str(), lhs - rhs});
          }
  } else if (id == "serre") {
    for (int i = 0; i < d.rank(); ++i)
      for (int j = 0; j < d.rank(); ++j) {
        if (i == j || d.cartan()[i][j] == 0) continue;
        const long mdeg = 1 - static_cast<long>(d.cartan()[i][j]);
        // Windowed loop indices r_1..r_m, s; ADE adjacency gives mdeg = 2.
        std::vector<long> idx(static_cast<std::size_t>(mdeg), -window);
        for (;;) {
          for (long s = -window; s <= window; ++s)
            for (int sigma : {1, -1}) {
              OpExpr total;
              std::vector<int> perm(static_cast<std::size_t>(mdeg));
              for (std::size_t t = 0; t < perm.size(); ++t) perm[t] = static_cast<int>(t);
              do {
                for (long pcut = 0; pcut <= mdeg; ++pcut) {
                  BarLaurent coeff = qbinom(mdeg, pcut);
                  if (pcut % 2) coeff = -coeff;
                  OpExpr word = OpExpr::one();
                  for (long t = 0; t < pcut; ++t) {
                    const long rr = idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
                    word = word * (sigma > 0 ? gen::xp(i, rr) : gen::xm(i, rr));
                  }
                  word = word * (sigma > 0 ? gen::xp(j, s) : gen::xm(j, s));
                  for (long t = pcut; t < mdeg; ++t) {
                    const long rr = idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
                    word = word * (sigma > 0 ? gen::xp(i, rr) : gen::xm(i, rr));
                  }
                  total = total + coeff * word;
                }
              } while (std::next_permutation(perm.begin(), perm.end()));
              std::ostringstream tag;
              tag << "i=" << i << " j=" << j << " sign=" << sigma << " r=(";
              for (std::size_t t = 0; t < idx.size(); ++t)
                tag << (t ? "," : "") << idx[t];
              tag << ") s=" << s;
              out.push_back({tag.str(), total});
            }
          // advance the multi-index
          std::size_t pos = 0;
          while (pos < idx.size() && ++idx[pos] > window) idx[pos++] = -window;
          if (pos == idx.size()) break;
        }
      }
  } else {
    throw DomainError("unknown relation id: " + id);
  }
  return out;
}

}  // namespace

std::vector<std::string> relation_ids() {
  return {"cartan-invertibility", "cartan-conjugation", "loop-cartan-exchange",
          "vertex-exchange",      "raising-lowering",   "serre"};
}

RelationReport relation_check(const ModuleHandle& m,
                              const std::string& relation_id, int window) {
  RelationReport report;
  report.relation_id = relation_id;
  const std::vector<Instance> instances = build_instances(m, relation_id, window);
  for (const Instance& inst : instances) {
    ++report.instances_checked;
    for (int b = 0; b < m.dim(); ++b) {
      if (is_zero_vec(m.eval(inst.diff, m.basis_vector(b)))) continue;
      report.failures.push_back(relation_id + "[" + inst.tag + "] on " + m.label(b));
    }
  }
  return report;
}

}  // namespace qloop
