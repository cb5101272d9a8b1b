#include <cmath>
#include <random>

#include "doctest.h"
#include "series.hpp"

using namespace pa;

namespace {

// (1-c)^k sum_n |[x^n] (c-x)^3 sum_m C(m+k,k) x^m| c^n, summed term by term with
// coefficients in log space.
double phi_abs_oracle(double c, long k) {
  auto log_binom = [](double n, double r) { return std::lgamma(n + 1) - std::lgamma(r + 1) - std::lgamma(n - r + 1); };
  const double lc = std::log(c), l1c = std::log1p(-c);
  double total = 0;
  for (long n = 0; n < 200000; ++n) {
    // [x^n] = sum_j C(3,j) c^(3-j) (-1)^j C(n-j+k, k)
    double coef = 0;
    const double w[4] = {1, 3, 3, 1};
    for (int j = 0; j <= 3 && j <= n; ++j) {
      const double mag = w[j] * std::exp((3 - j) * lc + log_binom(static_cast<double>(n - j + k), static_cast<double>(k)) +
                                         n * lc + k * l1c);
      coef += (j % 2 ? -mag : mag);
    }
    total += std::fabs(coef);
    if (n > 10 * k + 1000 && std::fabs(coef) < 1e-22 * total) break;
  }
  return total;
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("reference points and closed form at c = 1/2, k = 100") {
    const long double r = std::sqrt(50.0L + 1.0L / 12);
    CHECK(static_cast<double>(gk_reference_point(0.5L, 100, 0.5L, 1)) == doctest::Approx(static_cast<double>(98 + 2 * r)));
    CHECK(static_cast<double>(gk_reference_point(0.5L, 100, 0.5L, -1)) == doctest::Approx(static_cast<double>(98 - 2 * r)));
    const long double plus = gk_factored(0.5L, 100, gk_reference_point(0.5L, 100, 0.5L, 1));
    const long double minus = gk_factored(0.5L, 100, gk_reference_point(0.5L, 100, 0.5L, -1));
    CHECK(plus > 0);
    CHECK(minus < 0);
    CHECK(static_cast<double>(gk_closed_form(0.5L, 100, 0.5L, 1)) == doctest::Approx(75 + 708.9).epsilon(1e-3));
    CHECK(static_cast<double>(plus) == doctest::Approx(static_cast<double>(gk_closed_form(0.5L, 100, 0.5L, 1))).epsilon(1e-12));
  }

  TEST_CASE("factored and expanded forms agree exactly") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 100; ++t) {
      mpq_class c(static_cast<long>(1 + rng() % 99), 100), x(static_cast<long>(rng() % 2001) - 1000, static_cast<long>(1 + rng() % 9));
      c.canonicalize();
      x.canonicalize();
      const mpq_class k(static_cast<long>(1 + rng() % 500));
      CHECK(gk_factored_exact(c, k, x) == gk_expanded_exact(c, k, x));
      const long double cf = c.get_d(), xf = x.get_d(), kf = k.get_d();
      CHECK(static_cast<double>(gk_expanded(cf, kf, xf)) ==
            doctest::Approx(static_cast<double>(gk_factored(cf, kf, xf))).epsilon(1e-9).scale(1e3));
    }
  }

  TEST_CASE("closed form at the reference points, exactly and in binary128") {
    std::mt19937_64 rng(62);
    for (int t = 0; t < 200; ++t) {
      mpq_class c(static_cast<long>(1 + rng() % 999), 1000);
      c.canonicalize();
      const long k = static_cast<long>(1 + rng() % 3000);
      const mpq_class eta = t % 2 ? c : mpq_class(4 * c);
      const int sign = rng() % 2 ? 1 : -1;
      QuadraticSurd s = gk_at_reference_exact(c, k, eta, sign);
      CHECK(s.p == (c * c + c) * k);
      CHECK(s.q == sign * ((3 * c - eta) * k + mpq_class(2, 3) * (c - 1) * (c - 1)));
      CHECK(s.d == eta * k + (1 - c) * (1 - c) / 3);
      CHECK(gk_closed_form_gap(c.get_d(), k, eta.get_d(), sign) < 1e-9);
    }
  }

  TEST_CASE("interlaced roots from k_c on") {
    for (double c : {0.1, 0.25, 0.5, 0.75}) {
      const long kc = gk_threshold(c);
      CHECK(kc >= 1);
      for (long k = kc; k <= kc + 50; ++k) {
        GkRootReport r = gk_roots(c, k);
        CHECK(r.has_roots);
        CHECK(r.interlaced);
        CHECK(r.y[0] > 1);
        for (int i = 0; i < 3; ++i) {
          CHECK(r.y[i] < r.t[i]);
          CHECK(r.t[i] < r.y[i + 1]);
          CHECK(std::fabs(static_cast<double>(gk_factored(c, k, r.t[i]))) <
                1e-6 * std::fabs(static_cast<double>(gk_factored(c, k, r.y[i]))) + 1e-6);
        }
      }
      CHECK(gk_sign_conditions(c, kc));
    }
  }

  TEST_CASE("|phi_k| by closed form, direct sum and coefficient oracle") {
    for (double c : {0.25, 0.5}) {
      for (long k : {50L, 100L, 400L}) {
        const double oracle = phi_abs_oracle(c, k);
        const double direct = phi_k_abs_direct(c, k).value;
        CHECK(direct == doctest::Approx(oracle).epsilon(1e-9));
        if (k >= gk_threshold(c)) CHECK(phi_k_abs_closed(c, k).value == doctest::Approx(direct).epsilon(1e-9));
      }
    }
    CHECK(phi_k_abs_at(0.25, 100, 0.25) == doctest::Approx(phi_k_abs_direct(0.25, 100).value).epsilon(1e-12));
  }

  TEST_CASE("decay exponent near -3/2") {
    for (double c : {0.25, 0.5}) {
      SeriesDiagnostics d = decay_slope(c, 100, 1000, 32);
      CHECK(d.slope >= -1.7);
      CHECK(d.slope <= -1.3);
    }
  }

  TEST_CASE("log-log slope of a pure power law") {
    std::vector<double> x, y;
    for (int i = 1; i <= 20; ++i) {
      x.push_back(i);
      y.push_back(3 * std::pow(i, -1.5));
    }
    double b = 0;
    CHECK(loglog_slope(x, y, &b) == doctest::Approx(-1.5));
    CHECK(b == doctest::Approx(std::log(3.0)));
  }
}
