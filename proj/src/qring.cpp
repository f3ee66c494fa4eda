#include "qloop/qring.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace qloop {

Int int_gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// ---------------------------------------------------------------------------
// BarLaurent

BarLaurent::BarLaurent(Int c) {
  if (c != 0) terms_[0] = std::move(c);
}

BarLaurent BarLaurent::monomial(int exp, Int coeff) {
  BarLaurent p;
  if (coeff != 0) p.terms_[exp] = std::move(coeff);
  return p;
}

void BarLaurent::put(int exp, Int c) {
  auto it = terms_.find(exp);
  if (it == terms_.end()) {
    if (c != 0) terms_.emplace(exp, std::move(c));
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Int BarLaurent::coeff(int exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? Int(0) : it->second;
}

int BarLaurent::min_exp() const {
  if (terms_.empty()) throw InternalError("min_exp of zero polynomial");
  return terms_.begin()->first;
}

int BarLaurent::max_exp() const {
  if (terms_.empty()) throw InternalError("max_exp of zero polynomial");
  return terms_.rbegin()->first;
}

BarLaurent BarLaurent::bar() const {
  BarLaurent r;
  for (const auto& [e, c] : terms_) r.terms_[-e] = c;
  return r;
}

BarLaurent BarLaurent::operator-() const {
  BarLaurent r;
  for (const auto& [e, c] : terms_) r.terms_[e] = -c;
  return r;
}

BarLaurent& BarLaurent::operator+=(const BarLaurent& o) {
  for (const auto& [e, c] : o.terms_) put(e, c);
  return *this;
}

BarLaurent& BarLaurent::operator-=(const BarLaurent& o) {
  for (const auto& [e, c] : o.terms_) put(e, -c);
  return *this;
}

BarLaurent operator*(const BarLaurent& a, const BarLaurent& b) {
  BarLaurent r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.put(ea + eb, ca * cb);
  return r;
}

bool BarLaurent::divide_exact(const BarLaurent& num, const BarLaurent& den,
                              BarLaurent& quot) {
  quot = BarLaurent();
  if (den.is_zero()) throw InternalError("division by zero polynomial");
  if (num.is_zero()) return true;
  BarLaurent r = num;
  const int de = den.max_exp();
  const Int& dc = den.terms_.rbegin()->second;
  // Exact quotients live between these exponents; drifting below means the
  // division does not terminate, i.e. the quotient is not a Laurent polynomial.
  const int qfloor = num.min_exp() - den.min_exp();
  while (!r.is_zero()) {
    int re = r.max_exp();
    if (re - de < qfloor) return false;
    Int rc = r.terms_.rbegin()->second;
    if (rc % dc != 0) return false;
    Int qc = rc / dc;
    int qe = re - de;
    quot.put(qe, qc);
    r -= BarLaurent::monomial(qe, qc) * den;
  }
  return true;
}

static std::string coeff_prefix(const Int& c, bool lead, bool bare) {
  // bare: the monomial part is empty, so the number must always appear.
  Int a = c < 0 ? Int(-c) : c;
  std::string s;
  if (lead) {
    if (c < 0) s += "-";
  } else {
    s += c < 0 ? " - " : " + ";
  }
  if (bare || a != 1) {
    s += a.str();
    if (!bare) s += "*";
  }
  return s;
}

static std::string power_str(const std::string& v, int e) {
  if (e == 1) return v;
  return v + "^" + std::to_string(e);
}

std::string BarLaurent::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool lead = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    s += coeff_prefix(c, lead, e == 0);
    if (e != 0) s += power_str("q", e);
    lead = false;
  }
  return s;
}

BarLaurent qint(long n) {
  if (n < 0) return -qint(-n);
  BarLaurent p;
  for (long e = 1 - n; e <= n - 1; e += 2) p += BarLaurent::q(static_cast<int>(e));
  return p;
}

BarLaurent qfact(long n) {
  if (n < 0) throw DomainError("qfact of negative argument");
  BarLaurent p(Int(1));
  for (long k = 2; k <= n; ++k) p = p * qint(k);
  return p;
}

BarLaurent qbinom(long m, long p) {
  if (m < 0 || p < 0 || p > m) throw DomainError("qbinom out of range");
  BarLaurent den = qfact(p) * qfact(m - p);
  BarLaurent quot;
  if (!BarLaurent::divide_exact(qfact(m), den, quot))
    throw InternalError("qbinom: factorial division left a remainder");
  return quot;
}

// ---------------------------------------------------------------------------
// TailSeries

TailSeries::TailSeries(const BarLaurent& p, int order) : order_(order) {
  for (const auto& [e, c] : p.terms())
    if (e >= order_) terms_[e] = c;
}

Int TailSeries::coeff(int exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? Int(0) : it->second;
}

int TailSeries::max_exp() const {
  if (terms_.empty()) throw InternalError("max_exp of empty series");
  return terms_.rbegin()->first;
}

void TailSeries::set(int exp, Int c) {
  if (exp < order_ || c == 0)
    terms_.erase(exp);
  else
    terms_[exp] = std::move(c);
}

TailSeries TailSeries::operator-() const {
  TailSeries r(order_);
  for (const auto& [e, c] : terms_) r.terms_[e] = -c;
  return r;
}

TailSeries operator+(const TailSeries& a, const TailSeries& b) {
  TailSeries r(std::max(a.order_, b.order_));
  for (const auto& [e, c] : a.terms_)
    if (e >= r.order_) r.terms_[e] = c;
  for (const auto& [e, c] : b.terms_) {
    if (e < r.order_) continue;
    auto it = r.terms_.find(e);
    if (it == r.terms_.end()) {
      r.terms_[e] = c;
    } else {
      it->second += c;
      if (it->second == 0) r.terms_.erase(it);
    }
  }
  return r;
}

TailSeries operator-(const TailSeries& a, const TailSeries& b) { return a + (-b); }

TailSeries operator*(const TailSeries& a, const TailSeries& b) {
  // Unknown tails pollute the product up to order + other factor's top.
  int ma = a.terms_.empty() ? a.order_ : a.terms_.rbegin()->first;
  int mb = b.terms_.empty() ? b.order_ : b.terms_.rbegin()->first;
  int ord = std::max({a.order_, b.order_, a.order_ + mb, b.order_ + ma});
  TailSeries r(ord);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      int e = ea + eb;
      if (e < ord) continue;
      auto it = r.terms_.find(e);
      if (it == r.terms_.end()) {
        r.terms_[e] = ca * cb;
        if (r.terms_[e] == 0) r.terms_.erase(e);
      } else {
        it->second += ca * cb;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
  return r;
}

bool TailSeries::is_one_mod_qinv() const {
  for (const auto& [e, c] : terms_) {
    if (e > 0) return false;
    if (e == 0 && c != 1) return false;
  }
  return coeff(0) == 1;
}

bool TailSeries::is_qinv_tail() const {
  return terms_.empty() || terms_.rbegin()->first < 0;
}

std::string TailSeries::str() const {
  std::string s;
  bool lead = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    s += coeff_prefix(c, lead, e == 0);
    if (e != 0) s += power_str("q", e);
    lead = false;
  }
  if (lead) s = "0";
  s += " + O(q^" + std::to_string(order_ - 1) + ")";
  return s;
}

// ---------------------------------------------------------------------------
// TorusScalar

TorusScalar::TorusScalar(Int c, int rank) : rank_(rank) {
  if (c != 0) terms_[Mono{0, std::vector<int>(rank, 0)}] = std::move(c);
}

TorusScalar::TorusScalar(const BarLaurent& p, int rank) : rank_(rank) {
  for (const auto& [e, c] : p.terms())
    terms_[Mono{e, std::vector<int>(rank, 0)}] = c;
}

TorusScalar TorusScalar::monomial(Mono m, Int coeff) {
  TorusScalar r;
  r.rank_ = static_cast<int>(m.z.size());
  if (coeff != 0) r.terms_[std::move(m)] = std::move(coeff);
  return r;
}

TorusScalar TorusScalar::var(int rank, int var, int ze, int qe) {
  if (var < 0 || var >= rank) throw DomainError("torus variable out of range");
  Mono m{qe, std::vector<int>(rank, 0)};
  m.z[var] = ze;
  return monomial(std::move(m));
}

void TorusScalar::put(Mono m, Int c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), std::move(c));
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Int TorusScalar::coeff(const Mono& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Int(0) : it->second;
}

const Mono& TorusScalar::lead_mono() const {
  if (terms_.empty()) throw InternalError("lead_mono of zero");
  return terms_.rbegin()->first;
}

Int TorusScalar::lead_coeff() const {
  if (terms_.empty()) throw InternalError("lead_coeff of zero");
  return terms_.rbegin()->second;
}

void TorusScalar::unify(TorusScalar& a, TorusScalar& b) {
  if (a.rank_ == b.rank_) return;
  if (a.rank_ < b.rank_)
    a = a.extend_rank(b.rank_);
  else
    b = b.extend_rank(a.rank_);
}

TorusScalar TorusScalar::extend_rank(int new_rank) const {
  if (new_rank == rank_) return *this;
  if (new_rank < rank_) throw InternalError("extend_rank cannot shrink");
  TorusScalar r;
  r.rank_ = new_rank;
  for (const auto& [m, c] : terms_) {
    Mono n{m.q, m.z};
    n.z.resize(new_rank, 0);
    r.terms_.emplace(std::move(n), c);
  }
  return r;
}

TorusScalar TorusScalar::remap(const std::vector<int>& where, int new_rank) const {
  if (static_cast<int>(where.size()) != rank_) throw DomainError("remap arity");
  TorusScalar r;
  r.rank_ = new_rank;
  for (const auto& [m, c] : terms_) {
    Mono n{m.q, std::vector<int>(new_rank, 0)};
    for (int i = 0; i < rank_; ++i) {
      if (m.z[i] == 0) continue;
      if (where[i] < 0 || where[i] >= new_rank) throw DomainError("remap target");
      n.z[where[i]] += m.z[i];
    }
    r.put(std::move(n), c);
  }
  return r;
}

TorusScalar TorusScalar::bar() const {
  TorusScalar r;
  r.rank_ = rank_;
  for (const auto& [m, c] : terms_) r.terms_.emplace(Mono{-m.q, m.z}, c);
  return r;
}

TorusScalar TorusScalar::dagger() const {
  TorusScalar r;
  r.rank_ = rank_;
  for (const auto& [m, c] : terms_) {
    Mono n{m.q, m.z};
    for (int& e : n.z) e = -e;
    r.terms_.emplace(std::move(n), c);
  }
  return r;
}

TorusScalar TorusScalar::inv_all() const {
  TorusScalar r;
  r.rank_ = rank_;
  for (const auto& [m, c] : terms_) {
    Mono n{-m.q, m.z};
    for (int& e : n.z) e = -e;
    r.terms_.emplace(std::move(n), c);
  }
  return r;
}

bool TorusScalar::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() != 1) return false;
  const Mono& m = terms_.begin()->first;
  if (m.q != 0) return false;
  return std::all_of(m.z.begin(), m.z.end(), [](int e) { return e == 0; });
}

BarLaurent TorusScalar::partial() const {
  BarLaurent p;
  for (const auto& [m, c] : terms_) {
    bool trivial = std::all_of(m.z.begin(), m.z.end(), [](int e) { return e == 0; });
    if (trivial) p += BarLaurent::monomial(m.q, c);
  }
  return p;
}

TorusScalar TorusScalar::q_slice(int e) const {
  TorusScalar r;
  r.rank_ = rank_;
  for (const auto& [m, c] : terms_)
    if (m.q == e) r.terms_.emplace(Mono{0, m.z}, c);
  return r;
}

int TorusScalar::max_q_exp() const {
  if (terms_.empty()) throw InternalError("max_q_exp of zero");
  int m = terms_.begin()->first.q;
  for (const auto& [mo, c] : terms_) m = std::max(m, mo.q);
  return m;
}

int TorusScalar::min_q_exp() const {
  if (terms_.empty()) throw InternalError("min_q_exp of zero");
  int m = terms_.begin()->first.q;
  for (const auto& [mo, c] : terms_) m = std::min(m, mo.q);
  return m;
}

TorusScalar TorusScalar::operator-() const {
  TorusScalar r;
  r.rank_ = rank_;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

TorusScalar& TorusScalar::operator+=(const TorusScalar& o) {
  TorusScalar b = o;
  unify(*this, b);
  for (auto& [m, c] : b.terms_) put(m, c);
  return *this;
}

TorusScalar& TorusScalar::operator-=(const TorusScalar& o) {
  TorusScalar b = o;
  unify(*this, b);
  for (auto& [m, c] : b.terms_) put(m, -c);
  return *this;
}

TorusScalar operator*(const TorusScalar& a, const TorusScalar& b) {
  TorusScalar x = a, y = b;
  TorusScalar::unify(x, y);
  TorusScalar r;
  r.rank_ = x.rank_;
  for (const auto& [ma, ca] : x.terms_)
    for (const auto& [mb, cb] : y.terms_) {
      Mono m{ma.q + mb.q, ma.z};
      for (int i = 0; i < r.rank_; ++i) m.z[i] += mb.z[i];
      r.put(std::move(m), ca * cb);
    }
  return r;
}

bool TorusScalar::operator==(const TorusScalar& o) const {
  if (rank_ == o.rank_) return terms_ == o.terms_;
  TorusScalar a = *this, b = o;
  unify(a, b);
  return a.terms_ == b.terms_;
}

Int TorusScalar::content() const {
  Int g = 0;
  for (const auto& [m, c] : terms_) g = int_gcd(g, c);
  return g;
}

Mono TorusScalar::monomial_content() const {
  if (terms_.empty()) throw InternalError("monomial_content of zero");
  Mono mc = terms_.begin()->first;
  for (const auto& [m, c] : terms_) {
    mc.q = std::min(mc.q, m.q);
    for (int i = 0; i < rank_; ++i) mc.z[i] = std::min(mc.z[i], m.z[i]);
  }
  return mc;
}

// --- exact multivariate division ------------------------------------------
// Work on exponent tuples (q first, then z), all shifted nonnegative.
// Recursion on the first variable: split into top-degree slices and divide
// coefficient polynomials; degree in the main variable strictly drops.

namespace {

using ETuple = std::vector<int>;
using EMap = std::map<ETuple, Int>;

void emap_sub_mul(EMap& acc, const ETuple& shift, const Int& coeff, const EMap& den) {
  for (const auto& [e, c] : den) {
    ETuple t = e;
    for (size_t i = 0; i < t.size(); ++i) t[i] += shift[i];
    auto it = acc.find(t);
    Int v = coeff * c;
    if (it == acc.end()) {
      if (v != 0) acc.emplace(std::move(t), -v);
    } else {
      it->second -= v;
      if (it->second == 0) acc.erase(it);
    }
  }
}

int emap_deg(const EMap& p, size_t var) {
  int d = 0;
  bool first = true;
  for (const auto& [e, c] : p) {
    if (first || e[var] > d) d = e[var];
    first = false;
  }
  return d;
}

EMap emap_slice(const EMap& p, size_t var, int deg) {
  EMap s;
  for (const auto& [e, c] : p)
    if (e[var] == deg) {
      ETuple t = e;
      t[var] = 0;
      s.emplace(std::move(t), c);
    }
  return s;
}

bool div_rec(EMap num, const EMap& den, size_t var, size_t nvars, EMap& quot) {
  quot.clear();
  if (den.empty()) throw InternalError("division by zero scalar");
  if (var == nvars) {
    // All variables consumed: both are single constants.
    const Int& d = den.begin()->second;
    if (num.empty()) return true;
    const Int& n = num.begin()->second;
    if (n % d != 0) return false;
    quot.emplace(ETuple(nvars, 0), n / d);
    return true;
  }
  const int dd = emap_deg(den, var);
  const EMap dtop = emap_slice(den, var, dd);
  while (!num.empty()) {
    int nd = emap_deg(num, var);
    if (nd < dd) return false;
    EMap ntop = emap_slice(num, var, nd);
    EMap c;
    if (!div_rec(std::move(ntop), dtop, var + 1, nvars, c)) return false;
    for (auto& [e, v] : c) {
      ETuple t = e;
      t[var] = nd - dd;
      emap_sub_mul(num, t, v, den);
      quot.emplace(std::move(t), v);
    }
    if (emap_deg(num, var) >= nd && !num.empty()) {
      // The top slice failed to cancel: coefficient division was wrong.
      throw InternalError("exact division top slice did not cancel");
    }
  }
  return true;
}

}  // namespace

bool TorusScalar::divide_exact(const TorusScalar& num, const TorusScalar& den,
                               TorusScalar& quot) {
  TorusScalar a = num, b = den;
  unify(a, b);
  quot = TorusScalar(Int(0), a.rank_);
  if (b.is_zero()) throw InternalError("division by zero scalar");
  if (a.is_zero()) return true;
  const size_t nvars = static_cast<size_t>(a.rank_) + 1;
  Mono mca = a.monomial_content(), mcb = b.monomial_content();
  EMap na, nb;
  for (const auto& [m, c] : a.terms_) {
    ETuple e(nvars);
    e[0] = m.q - mca.q;
    for (int i = 0; i < a.rank_; ++i) e[i + 1] = m.z[i] - mca.z[i];
    na.emplace(std::move(e), c);
  }
  for (const auto& [m, c] : b.terms_) {
    ETuple e(nvars);
    e[0] = m.q - mcb.q;
    for (int i = 0; i < b.rank_; ++i) e[i + 1] = m.z[i] - mcb.z[i];
    nb.emplace(std::move(e), c);
  }
  EMap qmap;
  if (!div_rec(std::move(na), nb, 0, nvars, qmap)) return false;
  TorusScalar out;
  out.rank_ = a.rank_;
  for (auto& [e, c] : qmap) {
    Mono m{e[0] + mca.q - mcb.q, std::vector<int>(a.rank_)};
    for (int i = 0; i < a.rank_; ++i) m.z[i] = e[i + 1] + mca.z[i] - mcb.z[i];
    out.terms_.emplace(std::move(m), c);
  }
  quot = std::move(out);
  return true;
}

std::string TorusScalar::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool lead = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::vector<std::string> parts;
    if (m.q != 0) parts.push_back(power_str("q", m.q));
    for (int i = 0; i < rank_; ++i)
      if (m.z[i] != 0) parts.push_back(power_str("z" + std::to_string(i + 1), m.z[i]));
    s += coeff_prefix(c, lead, parts.empty());
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i) s += "*";
      s += parts[i];
    }
    lead = false;
  }
  return s;
}

// ---------------------------------------------------------------------------
// RationalScalar

RationalScalar::RationalScalar(TorusScalar num, TorusScalar den)
    : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void RationalScalar::normalize() {
  if (den_.is_zero()) throw InternalError("rational scalar with zero denominator");
  TorusScalar::unify(num_, den_);
  if (num_.is_zero()) {
    den_ = TorusScalar(Int(1), den_.rank());
    return;
  }
  // Shared integer content.
  Int g = int_gcd(num_.content(), den_.content());
  if (g > 1) {
    for (auto& [m, c] : num_.terms_) c /= g;
    for (auto& [m, c] : den_.terms_) c /= g;
  }
  // Fold the denominator's monomial content (a unit) into the numerator.
  Mono mc = den_.monomial_content();
  bool shift = mc.q != 0;
  for (int e : mc.z) shift = shift || e != 0;
  if (shift) {
    TorusScalar num2, den2;
    num2.rank_ = num_.rank_;
    den2.rank_ = den_.rank_;
    for (const auto& [m, c] : num_.terms_) {
      Mono n{m.q - mc.q, m.z};
      for (int i = 0; i < num_.rank_; ++i) n.z[i] -= mc.z[i];
      num2.terms_.emplace(std::move(n), c);
    }
    for (const auto& [m, c] : den_.terms_) {
      Mono n{m.q - mc.q, m.z};
      for (int i = 0; i < den_.rank_; ++i) n.z[i] -= mc.z[i];
      den2.terms_.emplace(std::move(n), c);
    }
    num_ = std::move(num2);
    den_ = std::move(den2);
  }
  if (den_.lead_coeff() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (den_.is_constant() && den_.lead_coeff() == 1) return;
  // Collapse when the denominator divides exactly (kept cheap: skip the
  // attempt on huge denominators; equality never depends on it).
  if (den_.terms_.size() <= 512) {
    TorusScalar q;
    if (TorusScalar::divide_exact(num_, den_, q)) {
      num_ = std::move(q);
      den_ = TorusScalar(Int(1), num_.rank());
    }
  }
}

RationalScalar RationalScalar::bar() const { return {num_.bar(), den_.bar()}; }
RationalScalar RationalScalar::dagger() const { return {num_.dagger(), den_.dagger()}; }
RationalScalar RationalScalar::inv_all() const { return {num_.inv_all(), den_.inv_all()}; }

RationalScalar RationalScalar::inverse() const {
  if (num_.is_zero()) throw InternalError("inverse of zero scalar");
  return {den_, num_};
}

RationalScalar RationalScalar::operator-() const {
  RationalScalar r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

RationalScalar operator+(const RationalScalar& a, const RationalScalar& b) {
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalScalar operator-(const RationalScalar& a, const RationalScalar& b) {
  return a + (-b);
}

RationalScalar operator*(const RationalScalar& a, const RationalScalar& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalScalar operator/(const RationalScalar& a, const RationalScalar& b) {
  if (b.num_.is_zero()) throw InternalError("division by zero scalar");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

bool RationalScalar::operator==(const RationalScalar& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

TorusScalar RationalScalar::to_torus() const {
  TorusScalar q;
  if (!TorusScalar::divide_exact(num_, den_, q))
    throw InternalError("rational scalar is not integral: " + str());
  return q;
}

std::string RationalScalar::str() const {
  if (den_.is_constant() && den_.lead_coeff() == 1) return num_.str();
  return "(" + num_.str() + ") / (" + den_.str() + ")";
}

// ---------------------------------------------------------------------------
// Series expansions along one torus variable or along q.

namespace {

// Exponent accessor: axis -1 is the q direction, otherwise a z index.
int axis_exp(const Mono& m, int axis) { return axis < 0 ? m.q : m.z[axis]; }

void axis_set(Mono& m, int axis, int e) {
  if (axis < 0)
    m.q = e;
  else
    m.z[axis] = e;
}

// Expand num/den keeping axis-exponents >= floor (sign-flipped for the
// toward-zero direction so that "extreme" always means maximal).
std::map<int, TorusScalar> expand_axis(const RationalScalar& r, int axis,
                                       Direction dir, int order) {
  TorusScalar num = r.num(), den = r.den();
  const int rank = den.rank();
  const bool flip = dir == Direction::kToZero;
  auto ext = [&](const TorusScalar& p) {
    int best = 0;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
      int e = axis_exp(m, axis);
      if (flip) e = -e;
      if (first || e > best) best = e;
      first = false;
    }
    return best;
  };
  auto slice = [&](const TorusScalar& p, int e0) {
    TorusScalar s(Int(0), rank);
    for (const auto& [m, c] : p.terms()) {
      int e = axis_exp(m, axis);
      if (flip) e = -e;
      if (e == e0) {
        Mono n = m;
        axis_set(n, axis, 0);
        s += TorusScalar::monomial(std::move(n), c);
      }
    }
    return s;
  };
  if (den.is_zero()) throw InternalError("expansion of 1/0");
  const int dtop = ext(den);
  TorusScalar lead = slice(den, dtop);
  if (!lead.is_monomial() || (lead.lead_coeff() != 1 && lead.lead_coeff() != -1))
    throw ExpansionError("denominator leading term is not invertible here");
  Mono lm = lead.lead_mono();
  axis_set(lm, axis, flip ? -dtop : dtop);
  const Int lc = lead.lead_coeff();
  // den = L*(1 - t) with t carrying strictly negative axis weight.
  Mono lmInv{-lm.q, lm.z};
  for (int& e : lmInv.z) e = -e;
  TorusScalar linv = TorusScalar::monomial(lmInv, lc);  // lc = +-1, so 1/lc = lc
  TorusScalar t = TorusScalar(Int(1), rank) - den * linv;
  // Accumulate num * linv * (1 + t + t^2 + ...) down to the cutoff.
  std::map<int, TorusScalar> out;
  if (num.is_zero()) return out;
  TorusScalar acc = num * linv;
  const int floor_w = -order;
  int guard = 0;
  while (!acc.is_zero()) {
    int top = ext(acc);
    if (top < floor_w) break;
    for (const auto& [m, c] : acc.terms()) {
      int e = axis_exp(m, axis);
      int w = flip ? -e : e;
      if (w < floor_w) continue;
      Mono n = m;
      axis_set(n, axis, 0);
      out[e] += TorusScalar::monomial(std::move(n), c);
    }
    if (t.is_zero()) break;
    // The rest of the sum is acc*t, acc*t^2, ...; every multiply by t drops
    // the top axis weight by at least one, so the cutoff is reached.
    acc = acc * t;
    if (++guard > 4 * (std::abs(order) + std::abs(dtop) + 64))
      throw InternalError("series expansion failed to converge");
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero())
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

}  // namespace

std::map<int, TorusScalar> series_expand(const RationalScalar& r, int var,
                                         Direction dir, int order) {
  if (var < 0 || var >= std::max(r.num().rank(), r.den().rank()))
    throw DomainError("series variable out of range");
  return expand_axis(r, var, dir, order);
}

std::map<int, TorusScalar> q_tail_expand(const RationalScalar& r, int order) {
  return expand_axis(r, -1, Direction::kToInfinity, -order);
}

TailSeries partial_tail(const RationalScalar& r, int order) {
  auto slices = q_tail_expand(r, order);
  TailSeries t(order);
  for (const auto& [e, s] : slices) {
    BarLaurent p = s.partial();
    t.set(e, p.coeff(0));
  }
  return t;
}

}  // namespace qloop
