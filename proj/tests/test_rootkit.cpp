#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qloop/rootkit.hpp"

using namespace qloop;

namespace {

std::vector<CartanDatum> all_data_up_to_rank8() {
  std::vector<CartanDatum> v;
  for (int n = 1; n <= 8; ++n) v.emplace_back('A', n);
  for (int n = 4; n <= 8; ++n) v.emplace_back('D', n);
  for (int n = 6; n <= 8; ++n) v.emplace_back('E', n);
  return v;
}

}  // namespace

TEST_CASE("datum validation") {
  CHECK_THROWS_AS(CartanDatum('A', 0), DomainError);
  CHECK_THROWS_AS(CartanDatum('D', 3), DomainError);
  CHECK_THROWS_AS(CartanDatum('E', 9), DomainError);
  CHECK_THROWS_AS(CartanDatum('B', 2), DomainError);
  // Affine A1 matrix: not positive definite.
  CHECK_THROWS_AS(CartanDatum({{2, -2}, {-2, 2}}), DomainError);
  // Affine E8: a 9-node chain with the branch at position 2 has det 0.
  {
    std::vector<std::vector<int>> m(9, std::vector<int>(9, 0));
    for (int i = 0; i < 9; ++i) m[i][i] = 2;
    for (int i = 0; i + 2 < 9; ++i) m[i][i + 1] = m[i + 1][i] = -1;
    m[2][8] = m[8][2] = -1;
    CHECK_THROWS_AS((CartanDatum{m}), DomainError);
  }
  // The raw-matrix path classifies the label.
  CHECK(CartanDatum(CartanDatum('D', 5).cartan()).label() == "D5");
  CHECK(CartanDatum(CartanDatum('E', 7).cartan()).label() == "E7");
  CHECK(CartanDatum(CartanDatum('A', 4).cartan()).label() == "A4");
}

TEST_CASE("pairing") {
  CartanDatum a1('A', 1), a2('A', 2);
  for (const CartanDatum* d : {&a1, &a2})
    for (int i = 0; i < d->rank(); ++i)
      for (int j = 0; j < d->rank(); ++j)
        CHECK(pairing(*d, d->fundamental_weight(i), d->simple_root(j)) ==
              Int(i == j ? 1 : 0));
  CHECK(pairing(a1, a1.simple_root(0), a1.simple_root(0)) == 2);
  CHECK(pairing(a1, a1.fundamental_weight(0), a1.fundamental_weight(0)) == Rat(1, 2));
  CHECK(pairing(a2, a2.simple_root(0), a2.simple_root(1)) == -1);
  CHECK_THROWS_AS(pairing(a2, a1.simple_root(0), a2.simple_root(0)), DomainError);

  // Symmetry across the two bases: (x, y) agrees when computed either way.
  for (int i = 0; i < 2; ++i) {
    WeightVec wi = a2.weight_of(a2.simple_root(i));
    for (int j = 0; j < 2; ++j)
      CHECK(pairing(a2, wi, a2.fundamental_weight(j)) ==
            Rat(pairing(a2, a2.simple_root(i), a2.fundamental_weight(j))));
  }
}

TEST_CASE("norm2") {
  CartanDatum a1('A', 1), a2('A', 2);
  CHECK(norm2(RootVec{{0}}) == 0);
  CHECK(norm2(a1.simple_root(0)) == 1);
  RootVec t = a2.simple_root(0);
  t.a[1] += 1;
  CHECK(norm2(t) == 2);
}

TEST_CASE("roots, theta, coxeter number") {
  struct Expect {
    char t;
    int n;
    long c;
  };
  for (auto [t, n, c] : {Expect{'A', 1, 2}, Expect{'A', 2, 3}, Expect{'D', 4, 6},
                         Expect{'E', 6, 12}, Expect{'E', 7, 18}, Expect{'E', 8, 30}}) {
    CartanDatum d(t, n);
    CHECK(d.coxeter_number() == c);
  }
  for (const CartanDatum& d : all_data_up_to_rank8()) {
    // |Delta_+| = n c / 2.
    Int np = Int(d.rank()) * d.coxeter_number();
    CHECK(Int(2 * d.positive_roots().size()) == np);
    CHECK(d.is_positive_root(d.highest_root()));
    for (const RootVec& r : d.positive_roots()) CHECK(d.is_root(r));
  }
  CHECK(CartanDatum('E', 8).positive_roots().size() == 120);
}

TEST_CASE("longest element and bar involution") {
  for (const CartanDatum& d : all_data_up_to_rank8()) {
    const WeylElement& w0 = d.longest_element();
    CHECK(w0.word().size() == d.positive_roots().size());
    CHECK(w0 * w0 == WeylElement::identity(d));
    for (int i = 0; i < d.rank(); ++i) {
      int b = d.bar_index(i);
      CHECK(d.bar_index(b) == i);
      for (int j = 0; j < d.rank(); ++j)
        CHECK(d.cartan()[i][j] == d.cartan()[d.bar_index(i)][d.bar_index(j)]);
    }
  }
  CartanDatum a1('A', 1), a2('A', 2), a3('A', 3), d4('D', 4);
  CHECK(a1.bar_index(0) == 0);
  CHECK(a2.bar_index(0) == 1);
  CHECK(a3.bar_index(0) == 2);
  CHECK(a3.bar_index(1) == 1);
  for (int i = 0; i < 4; ++i) CHECK(d4.bar_index(i) == i);
}

TEST_CASE("wall-crossing sets") {
  CartanDatum a1('A', 1);
  auto s = hat_delta_omega(a1, 0);
  REQUIRE(s.size() == 1);
  CHECK(s[0].finite.a == std::vector<Int>{-1});
  CHECK(s[0].delta == 1);

  // Size equals the translation length sum_{alpha>0} (omega_i, alpha).
  for (const CartanDatum& d :
       {CartanDatum('A', 2), CartanDatum('A', 3), CartanDatum('D', 4), CartanDatum('E', 6)})
    for (int i = 0; i < d.rank(); ++i) {
      Int len = 0;
      for (const RootVec& p : d.positive_roots()) len += p.a[i];
      CHECK(Int(hat_delta_omega(d, i).size()) == len);
    }
  // A2, node 1: two negative roots meet the wall, multiplicity one each.
  CartanDatum a2('A', 2);
  CHECK(hat_delta_omega(a2, 0).size() == 2);
}

TEST_CASE("gamma and the Coxeter pairing") {
  CartanDatum a1('A', 1);
  AffineRoot g = gamma(a1, 0);
  CHECK(g.finite.a == std::vector<Int>{-1});
  CHECK(g.delta == 1);
  CHECK(pairing(a1, g, a1.simple_root(0)) == -2);

  CartanDatum a2('A', 2);
  CHECK(pairing(a2, gamma(a2, 0), a2.simple_root(0)) == -3);

  for (const CartanDatum& d : all_data_up_to_rank8())
    for (int i = 0; i < d.rank(); ++i) CHECK(lemma_gamma_check(d, i));

  // Killing identity: sum_{alpha>0} (omega_i,alpha)(alpha_i,alpha) = c.
  for (const CartanDatum& d :
       {CartanDatum('A', 1), CartanDatum('A', 3), CartanDatum('D', 5), CartanDatum('E', 7)})
    for (int i = 0; i < d.rank(); ++i) {
      Int s = 0;
      for (const RootVec& p : d.positive_roots())
        s += p.a[i] * pairing(d, d.simple_root(i), p);
      CHECK(s == d.coxeter_number());
    }
}

TEST_CASE("sign assignment") {
  CartanDatum a1('A', 1), a2('A', 2);
  CHECK(sign_assignment(a1) == std::vector<int>{1});
  CHECK(sign_assignment(a2) == std::vector<int>{1, -1});
  for (const CartanDatum& d : all_data_up_to_rank8()) {
    auto o = sign_assignment(d);
    Int c = d.coxeter_number();
    int parity = (c % 2 == 0) ? 1 : -1;
    for (int i = 0; i < d.rank(); ++i) {
      CHECK(o[i] * o[d.bar_index(i)] == parity);
      for (int j = 0; j < d.rank(); ++j)
        if (i != j && d.cartan()[i][j] < 0) CHECK(o[i] + o[j] == 0);
    }
  }
}

TEST_CASE("w_star affine action") {
  CartanDatum a1('A', 1);
  for (long ell = 1; ell <= 4; ++ell) {
    WeightVec lam{{Int(ell)}};
    RootVec zero{{0}};
    RootVec nu = w_star(a1, a1.longest_element(), zero, lam);
    CHECK(nu.a == std::vector<Int>{Int(ell)});
    CHECK(w_star(a1, WeylElement::identity(a1), nu, lam) == nu);
  }

  CartanDatum a2('A', 2);
  std::mt19937_64 rng(3);
  auto group = enumerate_weyl(a2);
  std::uniform_int_distribution<size_t> pick(0, group.size() - 1);
  std::uniform_int_distribution<int> coord(-2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const WeylElement &w = group[pick(rng)], &x = group[pick(rng)];
    WeightVec lam{{Int(coord(rng) + 3), Int(coord(rng) + 3)}};
    RootVec alpha{{Int(coord(rng)), Int(coord(rng))}};
    CHECK(w_star(a2, w * x, alpha, lam) == w_star(a2, w, w_star(a2, x, alpha, lam), lam));
  }
}

TEST_CASE("length statistic") {
  CartanDatum a1('A', 1);
  CHECK(length_stat_a(a1, WeylElement::identity(a1), 0) == 0);
  CHECK(length_stat_a(a1, WeylElement::simple(a1, 0), 0) == 2);

  // a(w0 s_ibar, ibar) = c - 2.
  for (const CartanDatum& d :
       {CartanDatum('A', 1), CartanDatum('A', 2), CartanDatum('A', 3), CartanDatum('D', 4)})
    for (int i = 0; i < d.rank(); ++i) {
      int ib = d.bar_index(i);
      WeylElement w = d.longest_element() * WeylElement::simple(d, ib);
      CHECK(length_stat_a(d, w, ib) == Rat(d.coxeter_number() - 2));
    }

  // Recursions across whole small groups.
  for (const CartanDatum& d : {CartanDatum('A', 2), CartanDatum('A', 3)}) {
    auto group = enumerate_weyl(d);
    auto len = [&](const WeylElement& w) { return inversion_set(d, w).size(); };
    for (const WeylElement& x : group)
      for (int i = 0; i < d.rank(); ++i)
        for (int k = 0; k < d.rank(); ++k) {
          if (i != k && d.cartan()[i][k] == 0) {
            WeylElement w = x * WeylElement::simple(d, k);
            if (len(w) == len(x) + 1)
              CHECK(length_stat_a(d, w, i) == length_stat_a(d, x, i));
          }
          if (d.cartan()[i][k] == -1) {
            WeylElement w = x * WeylElement::simple(d, i) * WeylElement::simple(d, k);
            if (len(w) == len(x) + 2)
              CHECK(length_stat_a(d, w, i) == length_stat_a(d, x, k) + 1);
          }
        }
  }
}

TEST_CASE("weyl group enumeration and lattice round trips") {
  CHECK(enumerate_weyl(CartanDatum('A', 1)).size() == 2);
  CHECK(enumerate_weyl(CartanDatum('A', 2)).size() == 6);
  CHECK(enumerate_weyl(CartanDatum('A', 3)).size() == 24);

  CartanDatum d('D', 4);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(-5, 5);
  for (int t = 0; t < 30; ++t) {
    RootVec a{{Int(coord(rng)), Int(coord(rng)), Int(coord(rng)), Int(coord(rng))}};
    CHECK(d.root_of(d.weight_of(a)) == a);
  }
  CHECK_FALSE(d.in_root_lattice(d.fundamental_weight(3)));
  CHECK(d.in_root_lattice(d.weight_of(d.highest_root())));
}
