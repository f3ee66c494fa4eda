#include "qloop/quadmaps.hpp"

#include <random>
#include <utility>

namespace qloop {

namespace {

int mod2(const Int& v) { return static_cast<int>(((v % 2) + 2) % 2); }

// Edges of the diagram, each undirected pair once, lexicographic order.
std::vector<std::pair<int, int>> diagram_edges(const CartanDatum& d) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < d.rank(); ++i)
    for (int j = i + 1; j < d.rank(); ++j)
      if (d.cartan()[i][j] < 0) edges.emplace_back(i, j);
  return edges;
}

bool convention_holds(const CartanDatum& d, const OrientationData& o) {
  const bool even = mod2(d.coxeter_number()) == 0;
  for (int i = 0; i < d.rank(); ++i)
    for (int j = 0; j < d.rank(); ++j) {
      const int bi = d.bar_index(i), bj = d.bar_index(j);
      const Int& want = even ? o.n[bi][bj] : o.nbar[bi][bj];
      if (o.n[i][j] != want) return false;
    }
  return true;
}

}  // namespace

OrientationData choose_orientation(const CartanDatum& datum) {
  const int n = datum.rank();
  const auto edges = diagram_edges(datum);
  if (edges.size() >= 63) throw InternalError("diagram too large to orient");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size());
       ++mask) {
    OrientationData o;
    o.n.assign(n, std::vector<Int>(n, 0));
    for (std::size_t k = 0; k < edges.size(); ++k) {
      auto [i, j] = edges[k];
      if (mask & (std::uint64_t{1} << k))
        o.n[j][i] = 1;
      else
        o.n[i][j] = 1;
    }
    o.nbar.assign(n, std::vector<Int>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) o.nbar[i][j] = o.n[j][i];
    if (convention_holds(datum, o)) return o;
  }
  throw InternalError("no orientation satisfies the folding convention");
}

RankBooks rank_books(const CartanDatum& datum, const OrientationData& orient,
                     const WeightVec& lambda, const RootVec& alpha, int i) {
  const RootVec ai = datum.simple_root(i);
  RankBooks b;
  b.f = pairing(datum, ai, lambda) - pairing(datum, ai, alpha);
  b.v = alpha.a[i];  // (omega_i, alpha)
  b.f_minus = -b.v;
  b.f_plus = b.f - b.f_minus;
  Int arrows_out = 0, arrows_in = 0;
  for (int j = 0; j < datum.rank(); ++j) {
    arrows_out += orient.n[i][j] * alpha.a[j];
    arrows_in += orient.nbar[i][j] * alpha.a[j];
  }
  b.r_plus = pairing(datum, lambda, ai) - alpha.a[i] + arrows_out;
  b.r_minus = -alpha.a[i] + arrows_in;
  b.d = 2 * pairing(datum, lambda, alpha) - pairing(datum, alpha, alpha);
  b.t = b.d / 2 + norm2(alpha);
  return b;
}

Int dim_pair(const CartanDatum& datum, const WeightVec& lambda,
             const RootVec& alpha, const RootVec& alpha_prime) {
  const Int da = 2 * pairing(datum, lambda, alpha) - pairing(datum, alpha, alpha);
  const Int db = 2 * pairing(datum, lambda, alpha_prime) -
                 pairing(datum, alpha_prime, alpha_prime);
  if (mod2(da + db) != 0) throw InternalError("odd dimension sum");
  return (da + db) / 2;
}

Int g_increment(const CartanDatum& datum, const OrientationData& orient,
                const WeightVec& lambda, const RootVec& alpha, int i) {
  const Int c = datum.coxeter_number();
  const int ib = datum.bar_index(i);
  const RootVec star = w_star(datum, datum.longest_element(), alpha, lambda);
  const RankBooks at_star = rank_books(datum, orient, lambda, star, ib);
  const RankBooks here = rank_books(datum, orient, lambda, alpha, i);
  return -1 + (c - 1) * at_star.f_plus + here.f_plus - c * at_star.f_minus;
}

int h_increment(const CartanDatum& datum, const OrientationData& orient,
                const WeightVec& lambda, const RootVec& alpha, int i) {
  const int ib = datum.bar_index(i);
  const RootVec star = w_star(datum, datum.longest_element(), alpha, lambda);
  RootVec star_down = star;
  star_down.a[ib] -= 1;
  const RankBooks at_star = rank_books(datum, orient, lambda, star, ib);
  const RankBooks here = rank_books(datum, orient, lambda, alpha, i);
  return mod2(at_star.r_plus + dim_pair(datum, lambda, star_down, star) +
              here.r_minus);
}

QuadMaps::QuadMaps(const CartanDatum& datum, OrientationData orient,
                   WeightVec lambda)
    : datum_(&datum), orient_(std::move(orient)), lambda_(std::move(lambda)) {
  const int n = datum.rank();
  const Int c = datum.coxeter_number();
  WeightVec lo = datum.longest_element().apply(datum, lambda_);
  WeightVec diff;
  diff.w.resize(n);
  for (int i = 0; i < n; ++i) diff.w[i] = lambda_.w[i] - lo.w[i];
  nu_ = datum.root_of(diff);
  for (int j = 0; j < n; ++j)
    if (nu_.a[j] != nu_.a[datum.bar_index(j)])
      throw InternalError("nu is not involution symmetric");

  coeffs_.qform.assign(n, std::vector<Rat>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      coeffs_.qform[i][j] =
          (Rat(1) - Rat(c, 2)) * datum.cartan()[i][j] +
          (i == j ? Rat(c - 1) : Rat(0));
    }
  coeffs_.linear.resize(n);
  for (int i = 0; i < n; ++i)
    coeffs_.linear[i] = (c - 2) * lambda_.w[i] + (1 - c) * nu_.a[i];
  const Rat lam2 = pairing(datum, lambda_, lambda_);
  const Rat a_rat = Rat(c - 1) * norm2(nu_) - Rat(c) * lam2;
  if (denominator(a_rat) != 1)
    throw InternalError("constant term is not an integer");
  coeffs_.constant = numerator(a_rat);

  // The increment c*v_{i;nu} - g_{i;alpha} is affine in alpha and so is the
  // difference x(alpha + alpha_i) - x(alpha) of the closed form.  Matching
  // them at 0 and at every simple root pins the identity on all of Q.
  std::vector<RootVec> base;
  RootVec zero;
  zero.a.assign(n, 0);
  base.push_back(zero);
  for (int j = 0; j < n; ++j) base.push_back(datum.simple_root(j));
  for (int i = 0; i < n; ++i) {
    const Int vi = pairing(datum, datum.fundamental_weight(i), nu_);
    for (const RootVec& al : base) {
      RootVec up = al;
      up.a[i] += 1;
      if (x(up) - x(al) != c * vi - g_increment(datum, orient_, lambda_, al, i))
        throw InternalError("closed form disagrees with increments");
    }
  }
  if (x(nu_) != coeffs_.constant)
    throw InternalError("closed form disagrees at nu");
}

Int QuadMaps::x(const RootVec& alpha) const {
  const int n = datum_->rank();
  if (static_cast<int>(alpha.a.size()) != n)
    throw DomainError("rank mismatch");
  Rat total = coeffs_.constant;
  for (int i = 0; i < n; ++i) {
    total += Rat(coeffs_.linear[i]) * alpha.a[i];
    for (int j = 0; j < n; ++j)
      total += coeffs_.qform[i][j] * alpha.a[i] * alpha.a[j];
  }
  if (denominator(total) != 1)
    throw InternalError("x is not integral at this point");
  return numerator(total);
}

// Walks from nu to alpha one coordinate at a time, accumulating step values
// through `step(beta, i)` = F(beta + alpha_i) - F(beta).
namespace {
template <typename Acc, typename Step>
Acc integrate_path(const RootVec& nu, const RootVec& alpha, Acc start,
                   const Step& step) {
  RootVec cur = nu;
  Acc acc = start;
  for (std::size_t j = 0; j < cur.a.size(); ++j) {
    while (cur.a[j] < alpha.a[j]) {
      acc += step(cur, static_cast<int>(j));
      cur.a[j] += 1;
    }
    while (cur.a[j] > alpha.a[j]) {
      cur.a[j] -= 1;
      acc -= step(cur, static_cast<int>(j));
    }
  }
  return acc;
}
}  // namespace

Int QuadMaps::x_by_increments(const RootVec& alpha) const {
  const Int c = datum_->coxeter_number();
  std::vector<Int> vnu(datum_->rank());
  for (int i = 0; i < datum_->rank(); ++i)
    vnu[i] = pairing(*datum_, datum_->fundamental_weight(i), nu_);
  return integrate_path(nu_, alpha, coeffs_.constant,
                        [&](const RootVec& beta, int i) {
                          return c * vnu[i] -
                                 g_increment(*datum_, orient_, lambda_, beta, i);
                        });
}

int QuadMaps::y(const RootVec& alpha) const {
  const Int total = integrate_path(
      nu_, alpha, Int(0), [&](const RootVec& beta, int i) {
        return Int(h_increment(*datum_, orient_, lambda_, beta, i));
      });
  return mod2(total);
}

RootVec QuadMaps::star(const RootVec& alpha) const {
  return w_star(*datum_, datum_->longest_element(), alpha, lambda_);
}

bool appendix_check(const QuadMaps& maps, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-10, 10);
  const int n = maps.datum().rank();
  for (int s = 0; s < samples; ++s) {
    RootVec alpha;
    alpha.a.resize(n);
    for (int j = 0; j < n; ++j) alpha.a[j] = coord(rng);
    const RootVec mirror = maps.star(alpha);
    if (maps.x(mirror) != maps.x(alpha)) return false;
    if (maps.y(mirror) != maps.y(alpha)) return false;
  }
  return true;
}

}  // namespace qloop
