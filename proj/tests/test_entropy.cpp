#include <cmath>
#include <complex>

#include "doctest.h"
#include "entropy.hpp"
#include "expr.hpp"
#include "oracles.hpp"

using namespace pa;

namespace {

const GroupDescriptor Z = GroupDescriptor::lattice(1);
const GroupDescriptor Z2 = GroupDescriptor::lattice(2);

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("greedy separated sets") {
    std::vector<std::vector<double>> pts = {{0.1, 0.1}, {0.1, 0.1}, {0.12, 0.1}, {0.5, 0.1}, {0.95, 0.1}, {0.1, 0.9}};
    // (0.95, 0.1) is 0.15 from (0.1, 0.1) on the circle.
    CHECK(sep_count(pts, 0.05) == 4);
    CHECK(sep_count(pts, 0.3) == 2);
    CHECK(sep_count({}, 0.1) == 0);
    CHECK_THROWS_AS(sep_count(pts, 0.0), InvalidArgument);
    CHECK_THROWS_AS(sep_count({{0.1}, {0.1, 0.2}}, 0.1), InvalidArgument);
  }

  TEST_CASE("roots reproduce the polynomial") {
    ExactElement f = parse_expression("u^4 - u^3 - u^2 - u + 1", Z);
    auto roots = polynomial_roots(f);
    REQUIRE(roots.size() == 4);
    // Expand prod (z - r) and compare with the monic coefficients.
    std::vector<std::complex<double>> c = {1.0};
    for (const auto& r : roots) {
      std::vector<std::complex<double>> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= r * c[i];
      }
      c = next;
    }
    const double expected[5] = {1, -1, -1, -1, 1};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(c[static_cast<std::size_t>(i)] - expected[i]) < 1e-12);
    CHECK(largest_root_modulus(f) == doctest::Approx(1.7220838057).epsilon(1e-9));
    CHECK(std::abs(roots.front()) == doctest::Approx(1 / 1.7220838057).epsilon(1e-9));
  }

  TEST_CASE("Mahler measure by roots and by quadrature") {
    CHECK(mahler_measure_roots(parse_expression("u - 2", Z)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(mahler_measure(parse_expression("u - 2", Z)) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    ExactElement salem = parse_expression("u^4 - u^3 - u^2 - u + 1", Z);
    CHECK(mahler_measure_roots(salem) == doctest::Approx(std::log(largest_root_modulus(salem))).epsilon(1e-12));
    // Two roots on the unit circle: log singularities slow the quadrature.
    CHECK(mahler_measure(salem) == doctest::Approx(mahler_measure_roots(salem)).epsilon(1e-4));
    ExactElement mixed = parse_expression("3u^2 - 7u + 2", Z);  // roots 2 and 1/3
    CHECK(mahler_measure_roots(mixed) == doctest::Approx(std::log(6.0)).epsilon(1e-12));
    CHECK(mahler_measure(parse_expression("3 - u1 - u2", Z2)) == doctest::Approx(std::log(3.0)).epsilon(1e-9));
  }

  TEST_CASE("Mahler measure of 1 - x - y by three routes") {
    const double clausen = oracle::mahler_1_plus_x_plus_y();
    LSeries L = dirichlet_L_chi3(100000);
    CHECK(L.lower <= L.upper);
    CHECK(L.entropy == doctest::Approx(clausen).epsilon(1e-9));
    CHECK(clausen == doctest::Approx(0.3230659472).epsilon(1e-9));
    const double quad = mahler_measure(parse_expression("1 - u1 - u2", Z2), 512);
    CHECK(std::fabs(quad - clausen) < 1e-3);
  }

  TEST_CASE("L-series bracket") {
    LSeries a = dirichlet_L_chi3(1000), b = dirichlet_L_chi3(10000);
    CHECK(b.lower >= a.lower);
    CHECK(b.upper <= a.upper);
    CHECK(std::fabs(a.value - b.value) <= a.tail_bound);
    CHECK_THROWS_AS(dirichlet_L_chi3(999), InvalidArgument);
  }

  TEST_CASE("entropy estimate of u - 2") {
    EntropyOptions o;
    o.n = 16;
    o.samples = 400;
    o.seed = 3;
    EntropyEstimate e = entropy_estimate(parse_expression("u - 2", Z), o);
    CHECK(e.estimate == doctest::Approx(std::log(2.0)).epsilon(0.1));
    CHECK(e.oracle == doctest::Approx(std::log(2.0)));
    CHECK(e.window_size == 17);
    EntropyEstimate again = entropy_estimate(parse_expression("u - 2", Z), o);
    CHECK(again.estimate == e.estimate);
    CHECK(again.sep_count == e.sep_count);
  }

  TEST_CASE("entropy estimation is limited to Z and Z^2") {
    EntropyOptions o;
    o.seed = 1;
    CHECK_THROWS_AS(entropy_estimate(parse_expression("4 - u1 - u2", GroupDescriptor::heisenberg()), o), InvalidArgument);
    CHECK_THROWS_AS(entropy_estimate(parse_expression("4 - u1 - u2 - u3", GroupDescriptor::lattice(3)), o), InvalidArgument);
    o.n = 0;
    CHECK_THROWS_AS(entropy_estimate(parse_expression("u - 2", Z), o), InvalidArgument);
  }
}
