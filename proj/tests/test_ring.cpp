#include <random>

#include "doctest.h"
#include "gen.hpp"
#include "ring.hpp"

using namespace pa;

TEST_SUITE("ring") {
  TEST_CASE("ring axioms on random exact triples") {
    std::mt19937_64 rng(101);
    for (const auto& G : gen::groups()) {
      const ExactElement one = ExactElement::constant(G, 1);
      for (int t = 0; t < 1000; ++t) {
        ExactElement a = gen::poly(G, rng), b = gen::poly(G, rng), c = gen::poly(G, rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * one == a);
        CHECK(one * a == a);
        CHECK((a - a).is_zero());
        if (G.is_lattice()) CHECK(a * b == b * a);
      }
    }
  }

  TEST_CASE("involution reverses products and norms are submultiplicative") {
    std::mt19937_64 rng(202);
    for (const auto& G : gen::groups()) {
      for (int t = 0; t < 1000; ++t) {
        ExactElement g = gen::poly(G, rng), h = gen::poly(G, rng);
        CHECK(adjoint(g * h) == adjoint(h) * adjoint(g));
        CHECK(adjoint(adjoint(g)) == g);
        CHECK((g * h).l1() <= g.l1() * h.l1() * (1 + 1e-12) + 1e-12);
        CHECK(adjoint(g).l1() == doctest::Approx(g.l1()));
      }
    }
  }

  TEST_CASE("heisenberg ring is not commutative") {
    const auto H = GroupDescriptor::heisenberg();
    ExactElement u1 = ExactElement::monomial(GroupElement::generator(H, 1));
    ExactElement u2 = ExactElement::monomial(GroupElement::generator(H, 2));
    ExactElement u3 = ExactElement::monomial(GroupElement::generator(H, 3));
    CHECK(u1 * u2 != u2 * u1);
    CHECK(u2 * u1 == u1 * u2 * u3);
  }

  TEST_CASE("split into positive and negative parts") {
    std::mt19937_64 rng(7);
    const auto G = GroupDescriptor::lattice(2);
    for (int t = 0; t < 200; ++t) {
      ExactElement g = gen::poly(G, rng);
      auto [pos, neg] = split_pos_neg(g);
      CHECK(pos + neg == g);
      for (const auto& [e, c] : pos.terms()) CHECK(c > 0);
      for (const auto& [e, c] : neg.terms()) CHECK(c < 0);
      CHECK(pos.l1() + neg.l1() == doctest::Approx(g.l1()));
    }
  }

  TEST_CASE("powers agree with repeated products") {
    const auto H = GroupDescriptor::heisenberg();
    std::mt19937_64 rng(8);
    ExactElement g = gen::poly(H, rng, 3, 1);
    ExactElement acc = ExactElement::constant(H, 1);
    for (int n = 0; n < 5; ++n) {
      CHECK(power(g, n) == acc);
      acc = acc * g;
    }
  }

  TEST_CASE("pruning accounts for the dropped mass") {
    const auto G = GroupDescriptor::lattice(1);
    RealElement g(G);
    g.add_term(GroupElement(G, {0}), 1.0);
    g.add_term(GroupElement(G, {1}), 1e-9);
    g.add_term(GroupElement(G, {2}), -3e-9);
    TruncatedSeries s = prune(g, 1e-8, 0.5);
    CHECK(s.value.size() == 1);
    CHECK(s.l1_error == doctest::Approx(0.5 + 4e-9));
  }

  TEST_CASE("rho composes in reverse order") {
    // rho^{gh} v = v (gh)* = rho^g rho^h v on sites where both sides are defined.
    const auto G = GroupDescriptor::heisenberg();
    std::mt19937_64 rng(17);
    ExactElement g = gen::poly(G, rng, 3, 1), h = gen::poly(G, rng, 3, 1);
    Window w = box(G, 3);
    Configuration v{w, std::vector<double>(w.size()), ValueKind::real};
    std::uniform_real_distribution<double> u(-1, 1);
    for (double& x : v.values) x = u(rng);
    Configuration lhs = apply_rho(to_real(g * h), v);
    Configuration rhs = apply_rho(to_real(g), apply_rho(to_real(h), v));
    std::size_t compared = 0;
    for (std::size_t i = 0; i < rhs.window.size(); ++i) {
      if (!lhs.window.contains(rhs.window[i])) continue;
      CHECK(lhs.at(rhs.window[i]) == doctest::Approx(rhs.values[i]).epsilon(1e-12));
      ++compared;
    }
    CHECK(compared > 0);
  }

  TEST_CASE("rho and lambda are adjoint shifts") {
    const auto G = GroupDescriptor::lattice(1);
    Window w = box(G, 5);
    Configuration v{w, std::vector<double>(w.size()), ValueKind::real};
    for (std::size_t i = 0; i < w.size(); ++i) v.values[i] = static_cast<double>(i);
    RealElement u = RealElement::monomial(GroupElement(G, {1}));
    Configuration r = apply_rho(u, v), l = apply_lambda(u, v);
    CHECK(r.at(GroupElement(G, {0})) == v.at(GroupElement(G, {1})));
    CHECK(l.at(GroupElement(G, {0})) == v.at(GroupElement(G, {-1})));
  }

  TEST_CASE("torus distance") {
    CHECK(torus_distance(0.05, 0.95) == doctest::Approx(0.1));
    CHECK(torus_distance(0.25, 0.75) == doctest::Approx(0.5));
    CHECK(torus_distance(1.2, 0.2) == doctest::Approx(0.0));
  }
}
