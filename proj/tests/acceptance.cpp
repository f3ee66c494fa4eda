// End-to-end acceptance checks.  Each check prints exactly one line,
// "PASS <name>" or "FAIL <name>", and the binary exits nonzero if any fail.

#include <exception>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qloop/qring.hpp"
#include "qloop/quadmaps.hpp"

namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

std::vector<Check>& registry() {
  static std::vector<Check> r;
  return r;
}

bool add_check(const std::string& name, std::function<bool()> f) {
  registry().push_back({name, std::move(f)});
  return true;
}

}  // namespace

#define ACCEPT(name)                                              \
  static bool run_##name();                                       \
  static const bool reg_##name = add_check(#name, run_##name);    \
  static bool run_##name()

ACCEPT(quantum_integer_arithmetic) {
  using namespace qloop;
  if (qint(2).str() != "q + q^-1") return false;
  if (qint(3).str() != "q^2 + 1 + q^-2") return false;
  if (qbinom(4, 2).str() != "q^4 + q^2 + 2 + q^-2 + q^-4") return false;
  for (long m = 2; m <= 10; ++m)
    for (long p = 1; p < m; ++p) {
      BarLaurent rhs = BarLaurent::q(static_cast<int>(p)) * qbinom(m - 1, p) +
                       BarLaurent::q(static_cast<int>(p - m)) * qbinom(m - 1, p - 1);
      if (qbinom(m, p) != rhs) return false;
      if (qbinom(m, p).bar() != qbinom(m, p)) return false;
    }
  return true;
}

ACCEPT(weyl_translation_weight_pairing) {
  using namespace qloop;
  std::vector<std::pair<char, int>> types;
  for (int n = 1; n <= 7; ++n) types.emplace_back('A', n);
  for (int n = 4; n <= 7; ++n) types.emplace_back('D', n);
  for (int n = 6; n <= 8; ++n) types.emplace_back('E', n);
  for (auto [fam, n] : types) {
    CartanDatum d(fam, n);
    for (int i = 0; i < d.rank(); ++i)
      if (!lemma_gamma_check(d, i)) return false;
  }
  return true;
}

ACCEPT(bipartite_sign_constant) {
  using namespace qloop;
  std::vector<std::pair<char, int>> types;
  for (int n = 1; n <= 7; ++n) types.emplace_back('A', n);
  for (int n = 4; n <= 7; ++n) types.emplace_back('D', n);
  for (int n = 6; n <= 8; ++n) types.emplace_back('E', n);
  for (auto [fam, n] : types) {
    CartanDatum d(fam, n);
    const int parity = d.coxeter_number() % 2 == 0 ? 1 : -1;
    std::vector<int> o = sign_assignment(d);
    for (int flip : {1, -1})
      for (int i = 0; i < d.rank(); ++i)
        if (flip * o[i] * flip * o[d.bar_index(i)] != parity) return false;
  }
  return true;
}

ACCEPT(quadratic_map_mirror_symmetry) {
  using namespace qloop;
  std::mt19937_64 rng(90210);
  std::uniform_int_distribution<int> coeff(0, 3);
  std::vector<CartanDatum> data;
  data.emplace_back('A', 2);
  data.emplace_back('A', 3);
  data.emplace_back('D', 4);
  data.emplace_back('E', 6);
  for (const CartanDatum& d : data) {
    WeightVec random_lam;
    random_lam.w.resize(d.rank());
    for (auto& c : random_lam.w) c = coeff(rng);
    for (const WeightVec& lam : {d.rho(), random_lam}) {
      const QuadMaps maps = solve_xy(d, choose_orientation(d), lam);
      if (!appendix_check(maps, 100, 424242)) return false;
      std::uniform_int_distribution<int> coord(-8, 8);
      for (int s = 0; s < 10; ++s) {
        RootVec al;
        al.a.resize(d.rank());
        for (auto& c : al.a) c = coord(rng);
        if (maps.x(al) != maps.x_by_increments(al)) return false;
      }
    }
  }
  return true;
}

ACCEPT(increment_cocycles) {
  using namespace qloop;
  std::mt19937_64 rng(31337);
  std::vector<CartanDatum> data;
  for (int n = 1; n <= 6; ++n) data.emplace_back('A', n);
  for (int n = 4; n <= 6; ++n) data.emplace_back('D', n);
  data.emplace_back('E', 6);
  for (const CartanDatum& d : data) {
    const OrientationData o = choose_orientation(d);
    const WeightVec rho = d.rho();
    std::uniform_int_distribution<int> coord(-8, 8);
    for (int s = 0; s < 50; ++s) {
      RootVec al;
      al.a.resize(d.rank());
      for (auto& c : al.a) c = coord(rng);
      for (int i = 0; i < d.rank(); ++i)
        for (int j = 0; j < d.rank(); ++j) {
          RootVec ai = al, aj = al;
          ai.a[i] += 1;
          aj.a[j] += 1;
          const Int g_lhs = g_increment(d, o, rho, aj, i) + g_increment(d, o, rho, al, j);
          const Int g_rhs = g_increment(d, o, rho, ai, j) + g_increment(d, o, rho, al, i);
          if (g_lhs != g_rhs) return false;
          const int h_lhs = h_increment(d, o, rho, aj, i) + h_increment(d, o, rho, al, j);
          const int h_rhs = h_increment(d, o, rho, ai, j) + h_increment(d, o, rho, al, i);
          if (h_lhs % 2 != h_rhs % 2) return false;
        }
    }
  }
  return true;
}

int main() {
  int failed = 0;
  for (const auto& c : registry()) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::cout << "FAIL " << c.name << "  (exception: " << e.what() << ")\n";
      ++failed;
      continue;
    }
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << "\n";
    if (!ok) ++failed;
  }
  std::cout << (failed ? "ACCEPTANCE: FAILED " + std::to_string(failed) + " check(s)"
                       : "ACCEPTANCE: all checks passed")
            << "\n";
  return failed ? 1 : 0;
}
