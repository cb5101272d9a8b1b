#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace pa {

// The cubic g_k(x) = -(x+1)(x+2)(x+3) + 3c(x+k+1)(x+2)(x+3)
//                    - 3c^2(x+k+1)(x+k+2)(x+3) + c^3(x+k+1)(x+k+2)(x+k+3)
// controls the sign of the coefficients of phi_k(x) = (c-x)^3 sum_m C(m+k,k) x^m.

long double gk_factored(long double c, long double k, long double x);
long double gk_expanded(long double c, long double k, long double x);
mpq_class gk_factored_exact(const mpq_class& c, const mpq_class& k, const mpq_class& x);
mpq_class gk_expanded_exact(const mpq_class& c, const mpq_class& k, const mpq_class& x);

/// y_{k,eta,+-} = ck/(1-c) - 2 +- sqrt(eta k + (1-c)^2/3)/(1-c).
long double gk_reference_point(long double c, long double k, long double eta, int sign);
/// Closed form of g_k(y_{k,eta,+-}): (c^2+c)k +- ((3c-eta)k + 2/3 (c-1)^2) sqrt(eta k + (1-c)^2/3).
long double gk_closed_form(long double c, long double k, long double eta, int sign);

/// |g_k(y) - closed form| / max(1, |closed form|) at y = y_{k,eta,sign}, both
/// evaluated in binary128 so the cubic's cancellation near y ~ ck/(1-c) is absorbed.
double gk_closed_form_gap(double c, long k, double eta, int sign);

/// Element P + Q sqrt(D) of Q(sqrt D), enough to evaluate g_k at y_{k,eta,+-} exactly.
struct QuadraticSurd {
  mpq_class p, q, d;
};
/// g_k(y_{k,eta,sign}) computed exactly; compare with (c^2+c)k and sign*((3c-eta)k + 2/3 (c-1)^2).
QuadraticSurd gk_at_reference_exact(const mpq_class& c, long k, const mpq_class& eta, int sign);

/// The four sign conditions that force three interlaced real roots at k.
bool gk_sign_conditions(long double c, long k);
/// Smallest k_c with the sign conditions holding for every k in [k_c, scan limit].
long gk_threshold(double c);

struct GkRootReport {
  double c = 0;
  long k = 0;
  long k_c = 0;
  bool has_roots = false;
  long double t[3] = {0, 0, 0};
  // y_{k,4c,-}, y_{k,c,-}, y_{k,c,+}, y_{k,4c,+}
  long double y[4] = {0, 0, 0, 0};
  bool interlaced = false;
  std::vector<std::string> failures;
};

/// Roots of g_k by bracketing between the reference points. Throws
/// LemmaViolation if k >= k_c and the brackets fail.
GkRootReport gk_roots(double c, long k);

/// (1-c)^k |phi_k|(c).
struct PhiAbs {
  double value = 0;
  std::string method;      // "closed_form" or "direct"
  double tail_bound = 0;   // truncation bound for the direct sum
};
PhiAbs phi_k_abs(double c, long k, const std::string& method = "auto");
/// Direct summation of the absolute coefficients, independent of the roots.
PhiAbs phi_k_abs_direct(double c, long k);
PhiAbs phi_k_abs_closed(double c, long k);
/// |phi_k| evaluated at an arbitrary 0 <= x < 1, times (1-c)^k (direct route).
double phi_k_abs_at(double c, long k, double x);

struct SeriesDiagnostics {
  std::vector<long> ks;
  std::vector<double> values;
  double slope = 0;
  double intercept = 0;
  long k_c = 0;
};

/// Least-squares slope of log(value) against log(k) over [k_min, k_max].
SeriesDiagnostics decay_slope(double c, long k_min, long k_max, long points = 64);
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept = nullptr);

/// Coefficient b_{k,m} of x^{m+3} in phi_k, times c^{m+3}(1-c)^k, in long double.
long double scaled_b(long double c, long k, long m);

}  // namespace pa
