#include "qloop/rootkit.hpp"

#include <algorithm>
#include <set>

namespace qloop {

// ---------------------------------------------------------------------------
// WeylElement

WeylElement WeylElement::identity(const CartanDatum& d) {
  WeylElement e;
  int n = d.rank();
  e.m_.assign(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i) e.m_[i][i] = 1;
  return e;
}

WeylElement WeylElement::simple(const CartanDatum& d, int i) {
  if (i < 0 || i >= d.rank()) throw DomainError("simple reflection index");
  WeylElement e = identity(d);
  // s_i(alpha_j) = alpha_j - a_{ij} alpha_i: only row i changes.
  for (int j = 0; j < d.rank(); ++j) e.m_[i][j] -= d.cartan()[i][j];
  e.word_ = {i};
  return e;
}

WeylElement WeylElement::from_word(const CartanDatum& d, const std::vector<int>& word) {
  WeylElement e = identity(d);
  for (int i : word) e = e * simple(d, i);
  e.word_ = word;
  return e;
}

RootVec WeylElement::apply(const RootVec& v) const {
  int n = static_cast<int>(m_.size());
  if (static_cast<int>(v.a.size()) != n) throw DomainError("rank mismatch");
  RootVec out;
  out.a.assign(n, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.a[r] += m_[r][c] * v.a[c];
  return out;
}

WeightVec WeylElement::apply(const CartanDatum& d, const WeightVec& v) const {
  if (static_cast<int>(v.w.size()) != d.rank()) throw DomainError("rank mismatch");
  WeightVec out = v;
  // Rightmost letter first; s_i(v) = v - v_i * alpha_i with
  // alpha_i = sum_k a_{ik} omega_k.
  for (auto it = word_.rbegin(); it != word_.rend(); ++it) {
    int i = *it;
    Int vi = out.w[i];
    if (vi == 0) continue;
    for (int k = 0; k < d.rank(); ++k) out.w[k] -= vi * d.cartan()[i][k];
  }
  return out;
}

WeylElement WeylElement::operator*(const WeylElement& o) const {
  int n = static_cast<int>(m_.size());
  WeylElement r;
  r.m_.assign(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (m_[i][k] == 0) continue;
      for (int j = 0; j < n; ++j) r.m_[i][j] += m_[i][k] * o.m_[k][j];
    }
  r.word_ = word_;
  r.word_.insert(r.word_.end(), o.word_.begin(), o.word_.end());
  return r;
}

// ---------------------------------------------------------------------------
// CartanDatum

static std::vector<std::vector<int>> build_matrix(char type, int rank) {
  auto bad = [&] {
    return DomainError(std::string("no such Cartan datum: ") + type +
                       std::to_string(rank));
  };
  if (rank < 1) throw bad();
  std::vector<std::vector<int>> a(rank, std::vector<int>(rank, 0));
  for (int i = 0; i < rank; ++i) a[i][i] = 2;
  auto join = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
  switch (type) {
    case 'A':
      for (int i = 0; i + 1 < rank; ++i) join(i, i + 1);
      break;
    case 'D':
      if (rank < 4) throw bad();
      for (int i = 0; i + 2 < rank; ++i) join(i, i + 1);
      join(rank - 3, rank - 1);
      break;
    case 'E':
      if (rank < 6 || rank > 8) throw bad();
      // Chain 0-1-2-3-4(-5)(-6) with the extra node hanging off position 2.
      for (int i = 0; i + 2 < rank; ++i) join(i, i + 1);
      join(2, rank - 1);
      break;
    default:
      throw bad();
  }
  return a;
}

CartanDatum::CartanDatum(char type, int rank)
    : type_(type), rank_(rank), cartan_(build_matrix(type, rank)) {
  validate();
  build();
}

CartanDatum::CartanDatum(std::vector<std::vector<int>> cartan)
    : rank_(static_cast<int>(cartan.size())), cartan_(std::move(cartan)) {
  validate();
  // Classify by branch structure; validate() already forced an ADE diagram.
  int branch = -1;
  for (int i = 0; i < rank_ && branch < 0; ++i) {
    int deg = 0;
    for (int j = 0; j < rank_; ++j) deg += (j != i && cartan_[i][j] != 0);
    if (deg >= 3) branch = i;
  }
  if (branch < 0) {
    type_ = 'A';
  } else {
    // Leg lengths from the branch vertex: (1,1,*) is D, (1,2,*) is E.
    std::vector<int> legs;
    std::vector<bool> seen(rank_, false);
    seen[branch] = true;
    for (int j = 0; j < rank_; ++j) {
      if (j == branch || cartan_[branch][j] == 0) continue;
      int len = 0, cur = j;
      while (cur >= 0) {
        seen[cur] = true;
        ++len;
        int next = -1;
        for (int k = 0; k < rank_; ++k)
          if (!seen[k] && cartan_[cur][k] != 0) next = k;
        cur = next;
      }
      legs.push_back(len);
    }
    std::sort(legs.begin(), legs.end());
    type_ = (legs.size() == 3 && legs[0] == 1 && legs[1] == 1) ? 'D' : 'E';
  }
  build();
}

void CartanDatum::validate() const {
  int n = rank_;
  if (n < 1 || static_cast<int>(cartan_.size()) != n) throw DomainError("bad rank");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(cartan_[i].size()) != n) throw DomainError("ragged matrix");
    if (cartan_[i][i] != 2) throw DomainError("diagonal must be 2");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (cartan_[i][j] != cartan_[j][i]) throw DomainError("matrix not symmetric");
      if (cartan_[i][j] != 0 && cartan_[i][j] != -1)
        throw DomainError("off-diagonal entries must be 0 or -1");
    }
  }
  // Connected?
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j)
      if (cartan_[v][j] != 0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw DomainError("Dynkin diagram not connected");
  // Positive definiteness singles out the finite ADE diagrams.
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<Rat>> m(k, std::vector<Rat>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m[i][j] = cartan_[i][j];
    Rat det = 1;
    for (int c = 0; c < k; ++c) {
      int p = -1;
      for (int r = c; r < k; ++r)
        if (m[r][c] != 0) {
          p = r;
          break;
        }
      if (p < 0) {
        det = 0;
        break;
      }
      if (p != c) {
        std::swap(m[p], m[c]);
        det = -det;
      }
      det *= m[c][c];
      for (int r = c + 1; r < k; ++r) {
        Rat f = m[r][c] / m[c][c];
        for (int j = c; j < k; ++j) m[r][j] -= f * m[c][j];
      }
    }
    if (det <= 0) throw DomainError("matrix is not of finite ADE type");
  }
}

void CartanDatum::build() {
  const int n = rank_;
  // Root closure under simple reflections.
  std::set<RootVec> roots;
  std::vector<RootVec> frontier;
  for (int i = 0; i < n; ++i) {
    RootVec e;
    e.a.assign(n, 0);
    e.a[i] = 1;
    roots.insert(e);
    frontier.push_back(e);
  }
  while (!frontier.empty()) {
    std::vector<RootVec> next;
    for (const RootVec& r : frontier)
      for (int i = 0; i < n; ++i) {
        Int s = 0;
        for (int j = 0; j < n; ++j) s += cartan_[i][j] * r.a[j];
        RootVec t = r;
        t.a[i] -= s;
        if (roots.insert(t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  for (const RootVec& r : roots) {
    bool pos = false, neg = false;
    for (const Int& c : r.a) {
      if (c > 0) pos = true;
      if (c < 0) neg = true;
    }
    if (pos && !neg) pos_roots_.push_back(r);
  }
  auto height = [](const RootVec& r) {
    Int h = 0;
    for (const Int& c : r.a) h += c;
    return h;
  };
  std::sort(pos_roots_.begin(), pos_roots_.end(),
            [&](const RootVec& x, const RootVec& y) {
              Int hx = height(x), hy = height(y);
              if (hx != hy) return hx < hy;
              return x < y;
            });
  theta_ = pos_roots_.back();
  coxeter_ = 1 + height(theta_);

  // Longest element: walk rho to -rho, recording the reduced word.
  std::vector<Int> v(n, 1);
  std::vector<int> word;
  for (;;) {
    int i = -1;
    for (int k = 0; k < n; ++k)
      if (v[k] > 0) {
        i = k;
        break;
      }
    if (i < 0) break;
    Int vi = v[i];
    for (int k = 0; k < n; ++k) v[k] -= vi * cartan_[i][k];
    word.push_back(i);
  }
  // v is now w(rho) traversed from the left: rho, s_{i1} rho, ... so the
  // element with rightmost-first convention is the reverse word.
  std::reverse(word.begin(), word.end());
  w0_ = WeylElement::from_word(*this, word);

  bar_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    RootVec e;
    e.a.assign(n, 0);
    e.a[i] = 1;
    RootVec im = w0_.apply(e);
    for (int j = 0; j < n; ++j)
      if (im.a[j] != 0) {
        if (im.a[j] != -1) throw InternalError("w0 does not negate a simple root");
        bar_[i] = j;
      }
  }

  // Inverse Cartan matrix, exact.
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = cartan_[i][j];
    m[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (m[p][c] == 0) ++p;
    std::swap(m[p], m[c]);
    Rat d = m[c][c];
    for (int j = 0; j < 2 * n; ++j) m[c][j] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rat f = m[r][c];
      for (int j = 0; j < 2 * n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  cartan_inv_.assign(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cartan_inv_[i][j] = m[i][n + j];
}

std::vector<RootVec> CartanDatum::all_roots() const {
  std::vector<RootVec> all = pos_roots_;
  for (const RootVec& r : pos_roots_) {
    RootVec m = r;
    for (Int& c : m.a) c = -c;
    all.push_back(m);
  }
  return all;
}

WeightVec CartanDatum::rho() const {
  WeightVec r;
  r.w.assign(rank_, 1);
  return r;
}

RootVec CartanDatum::simple_root(int i) const {
  if (i < 0 || i >= rank_) throw DomainError("root index");
  RootVec e;
  e.a.assign(rank_, 0);
  e.a[i] = 1;
  return e;
}

WeightVec CartanDatum::fundamental_weight(int i) const {
  if (i < 0 || i >= rank_) throw DomainError("weight index");
  WeightVec e;
  e.w.assign(rank_, 0);
  e.w[i] = 1;
  return e;
}

WeightVec CartanDatum::weight_of(const RootVec& a) const {
  if (static_cast<int>(a.a.size()) != rank_) throw DomainError("rank mismatch");
  WeightVec w;
  w.w.assign(rank_, 0);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) w.w[i] += cartan_[i][j] * a.a[j];
  return w;
}

RootVec CartanDatum::root_of(const WeightVec& w) const {
  if (static_cast<int>(w.w.size()) != rank_) throw DomainError("rank mismatch");
  RootVec a;
  a.a.assign(rank_, 0);
  for (int i = 0; i < rank_; ++i) {
    Rat v = 0;
    for (int j = 0; j < rank_; ++j) v += cartan_inv_[i][j] * Rat(w.w[j]);
    if (denominator(v) != 1) throw DomainError("weight is not in the root lattice");
    a.a[i] = numerator(v);
  }
  return a;
}

bool CartanDatum::in_root_lattice(const WeightVec& w) const {
  try {
    root_of(w);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

bool CartanDatum::is_positive_root(const RootVec& a) const {
  return std::binary_search(pos_roots_.begin(), pos_roots_.end(), a,
                            [&](const RootVec& x, const RootVec& y) {
                              Int hx = 0, hy = 0;
                              for (const Int& c : x.a) hx += c;
                              for (const Int& c : y.a) hy += c;
                              if (hx != hy) return hx < hy;
                              return x < y;
                            });
}

bool CartanDatum::is_root(const RootVec& a) const {
  if (is_positive_root(a)) return true;
  RootVec m = a;
  for (Int& c : m.a) c = -c;
  return is_positive_root(m);
}

// ---------------------------------------------------------------------------
// Pairings

Rat pairing(const CartanDatum& d, const WeightVec& x, const WeightVec& y) {
  if (static_cast<int>(x.w.size()) != d.rank() ||
      static_cast<int>(y.w.size()) != d.rank())
    throw DomainError("pairing rank mismatch");
  // (omega_i, omega_j) = (A^{-1})_{ij}.
  Rat s = 0;
  for (int i = 0; i < d.rank(); ++i)
    for (int j = 0; j < d.rank(); ++j)
      s += Rat(x.w[i]) * d.cartan_inverse()[i][j] * Rat(y.w[j]);
  return s;
}

Int pairing(const CartanDatum& d, const WeightVec& x, const RootVec& y) {
  if (static_cast<int>(x.w.size()) != d.rank() ||
      static_cast<int>(y.a.size()) != d.rank())
    throw DomainError("pairing rank mismatch");
  Int s = 0;
  for (int i = 0; i < d.rank(); ++i) s += x.w[i] * y.a[i];
  return s;
}

Int pairing(const CartanDatum& d, const RootVec& x, const WeightVec& y) {
  return pairing(d, y, x);
}

Int pairing(const CartanDatum& d, const RootVec& x, const RootVec& y) {
  if (static_cast<int>(x.a.size()) != d.rank() ||
      static_cast<int>(y.a.size()) != d.rank())
    throw DomainError("pairing rank mismatch");
  Int s = 0;
  for (int i = 0; i < d.rank(); ++i)
    for (int j = 0; j < d.rank(); ++j) s += x.a[i] * Int(d.cartan()[i][j]) * y.a[j];
  return s;
}

Int pairing(const CartanDatum& d, const AffineRoot& x, const RootVec& y) {
  return pairing(d, x.finite, y);
}

Int norm2(const RootVec& a) {
  Int s = 0;
  for (const Int& c : a.a) s += c * c;
  return s;
}

bool affine_positive(const CartanDatum& d, const AffineRoot& r) {
  if (r.delta != 0) return r.delta > 0;
  return d.is_positive_root(r.finite);
}

// ---------------------------------------------------------------------------
// Wall-crossing sets and gamma

std::vector<AffineRoot> hat_delta_omega(const CartanDatum& d, int i) {
  if (i < 0 || i >= d.rank()) throw DomainError("index out of range");
  // Closed form: alpha + k delta for negative alpha, 1 <= k <= -(omega_i,alpha).
  std::vector<AffineRoot> closed;
  for (const RootVec& p : d.positive_roots()) {
    RootVec neg = p;
    for (Int& c : neg.a) c = -c;
    Int ai = -neg.a[i];  // -(omega_i, neg)
    for (Int k = 1; k <= ai; ++k) closed.push_back({neg, k});
  }
  // Direct: beta positive with translated image negative.
  Int bound = 1;
  for (const RootVec& p : d.positive_roots())
    if (p.a[i] > bound) bound = p.a[i];
  ++bound;
  std::vector<AffineRoot> direct;
  for (const RootVec& alpha : d.all_roots()) {
    Int w = alpha.a[i];  // (omega_i, alpha)
    for (Int k = -bound; k <= bound; ++k) {
      AffineRoot beta{alpha, k};
      AffineRoot pre{alpha, k + w};  // omega_i^{-1}(beta)
      if (affine_positive(d, beta) && !affine_positive(d, pre)) direct.push_back(beta);
    }
  }
  std::sort(closed.begin(), closed.end());
  std::sort(direct.begin(), direct.end());
  if (closed != direct)
    throw InternalError("wall-crossing enumerations disagree at node " +
                        std::to_string(i));
  return closed;
}

AffineRoot gamma(const CartanDatum& d, int i) {
  AffineRoot g;
  g.finite.a.assign(d.rank(), 0);
  g.delta = 0;
  for (const AffineRoot& b : hat_delta_omega(d, i)) {
    for (int k = 0; k < d.rank(); ++k) g.finite.a[k] += b.finite.a[k];
    g.delta += b.delta;
  }
  return g;
}

bool lemma_gamma_check(const CartanDatum& d, int i) {
  return pairing(d, gamma(d, i), d.simple_root(i)) == -d.coxeter_number();
}

std::vector<int> sign_assignment(const CartanDatum& d) {
  const int n = d.rank();
  std::vector<int> o(n, 0);
  std::vector<int> stack{0};
  o[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (j == v || d.cartan()[v][j] == 0) continue;
      if (o[j] == 0) {
        o[j] = -o[v];
        stack.push_back(j);
      } else if (o[j] != -o[v]) {
        throw InternalError("diagram is not bipartite");
      }
    }
  }
  Int c = d.coxeter_number();
  int parity = (c % 2 == 0) ? 1 : -1;
  for (int i = 0; i < n; ++i)
    if (o[i] * o[d.bar_index(i)] != parity)
      throw InternalError("sign assignment fails the w0 parity identity");
  return o;
}

RootVec w_star(const CartanDatum& d, const WeylElement& w, const RootVec& alpha,
               const WeightVec& lambda) {
  WeightVec wl = w.apply(d, lambda);
  WeightVec diff;
  diff.w.resize(d.rank());
  for (int i = 0; i < d.rank(); ++i) diff.w[i] = lambda.w[i] - wl.w[i];
  RootVec out = d.root_of(diff);  // lambda - w(lambda) is always in Q
  RootVec wa = w.apply(alpha);
  for (int i = 0; i < d.rank(); ++i) out.a[i] += wa.a[i];
  return out;
}

std::vector<RootVec> inversion_set(const CartanDatum& d, const WeylElement& w) {
  std::vector<RootVec> inv;
  for (const RootVec& p : d.positive_roots()) {
    RootVec im = w.apply(p);
    if (!affine_positive(d, AffineRoot{im, 0})) inv.push_back(p);
  }
  return inv;
}

Rat length_stat_a(const CartanDatum& d, const WeylElement& w, int i) {
  if (i < 0 || i >= d.rank()) throw DomainError("index out of range");
  Int s = 0;
  RootVec ai = d.simple_root(i);
  for (const RootVec& alpha : inversion_set(d, w)) {
    Int p = pairing(d, ai, alpha);
    s += p * p;
  }
  return Rat(s, 2);
}

std::vector<WeylElement> enumerate_weyl(const CartanDatum& d) {
  std::vector<WeylElement> out;
  std::set<std::vector<std::vector<Int>>> seen;
  std::vector<WeylElement> frontier{WeylElement::identity(d)};
  seen.insert(frontier[0].matrix());
  while (!frontier.empty()) {
    std::vector<WeylElement> next;
    for (const WeylElement& w : frontier) {
      out.push_back(w);
      for (int i = 0; i < d.rank(); ++i) {
        WeylElement x = w * WeylElement::simple(d, i);
        if (seen.insert(x.matrix()).second) next.push_back(x);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace qloop
