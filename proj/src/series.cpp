#include "series.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace pa {

long double gk_factored(long double c, long double k, long double x) {
  const long double a = x + 1, b = x + 2, d = x + 3;
  const long double k1 = x + k + 1, k2 = x + k + 2, k3 = x + k + 3;
  return -a * b * d + 3 * c * k1 * b * d - 3 * c * c * k1 * k2 * d + c * c * c * k1 * k2 * k3;
}

long double gk_expanded(long double c, long double k, long double x) {
  const long double e = c - 1;
  const long double e3 = e * e * e;
  const long double a3 = e3;
  const long double a2 = 3 * c * e * e * k + 6 * e3;
  const long double a1 = 3 * c * c * e * k * k + 3 * c * e * (4 * c - 5) * k + 11 * e3;
  const long double a0 = c * c * c * k * k * k + (6 * c * c * c - 9 * c * c) * k * k +
                         (11 * c * c * c - 27 * c * c + 18 * c) * k + 6 * e3;
  return ((a3 * x + a2) * x + a1) * x + a0;
}

mpq_class gk_factored_exact(const mpq_class& c, const mpq_class& k, const mpq_class& x) {
  mpq_class a = x + 1, b = x + 2, d = x + 3;
  mpq_class k1 = x + k + 1, k2 = x + k + 2, k3 = x + k + 3;
  mpq_class r = -a * b * d + 3 * c * k1 * b * d - 3 * c * c * k1 * k2 * d + c * c * c * k1 * k2 * k3;
  return r;
}

namespace {

struct ExpandedCoefficients {
  mpq_class a3, a2, a1, a0;
};

ExpandedCoefficients expanded_coefficients(const mpq_class& c, const mpq_class& k) {
  mpq_class e = c - 1;
  mpq_class e3 = e * e * e;
  ExpandedCoefficients r;
  r.a3 = e3;
  r.a2 = 3 * c * e * e * k + 6 * e3;
  r.a1 = 3 * c * c * e * k * k + 3 * c * e * (4 * c - 5) * k + 11 * e3;
  r.a0 = c * c * c * k * k * k + (6 * c * c * c - 9 * c * c) * k * k + (11 * c * c * c - 27 * c * c + 18 * c) * k + 6 * e3;
  return r;
}

QuadraticSurd surd_mul(const QuadraticSurd& x, const QuadraticSurd& y) {
  return {x.p * y.p + x.q * y.q * x.d, x.p * y.q + x.q * y.p, x.d};
}

QuadraticSurd surd_add(QuadraticSurd x, const mpq_class& r) {
  x.p += r;
  return x;
}

}  // namespace

mpq_class gk_expanded_exact(const mpq_class& c, const mpq_class& k, const mpq_class& x) {
  auto a = expanded_coefficients(c, k);
  mpq_class r = ((a.a3 * x + a.a2) * x + a.a1) * x + a.a0;
  return r;
}

long double gk_reference_point(long double c, long double k, long double eta, int sign) {
  return c * k / (1 - c) - 2 + sign * std::sqrt(eta * k + (1 - c) * (1 - c) / 3) / (1 - c);
}

long double gk_closed_form(long double c, long double k, long double eta, int sign) {
  const long double root = std::sqrt(eta * k + (1 - c) * (1 - c) / 3);
  return (c * c + c) * k + sign * ((3 * c - eta) * k + 2.0L / 3.0L * (c - 1) * (c - 1)) * root;
}

double gk_closed_form_gap(double c, long k, double eta, int sign) {
  using quad = __float128;
  const quad cq = c, kq = static_cast<quad>(k), eq = eta;
  const quad D = eq * kq + (1 - cq) * (1 - cq) / 3;
  quad root = std::sqrt(static_cast<long double>(D));
  for (int i = 0; i < 3; ++i) root = (root + D / root) / 2;
  const quad x = cq * kq / (1 - cq) - 2 + sign * root / (1 - cq);
  const quad a = x + 1, b = x + 2, d = x + 3;
  const quad k1 = x + kq + 1, k2 = x + kq + 2, k3 = x + kq + 3;
  const quad direct = -a * b * d + 3 * cq * k1 * b * d - 3 * cq * cq * k1 * k2 * d + cq * cq * cq * k1 * k2 * k3;
  const quad closed = (cq * cq + cq) * kq + sign * ((3 * cq - eq) * kq + quad(2) / 3 * (cq - 1) * (cq - 1)) * root;
  quad diff = direct - closed;
  if (diff < 0) diff = -diff;
  quad scale = closed < 0 ? -closed : closed;
  if (scale < 1) scale = 1;
  return static_cast<double>(diff / scale);
}

QuadraticSurd gk_at_reference_exact(const mpq_class& c, long k, const mpq_class& eta, int sign) {
  mpq_class kq(k);
  mpq_class d = eta * kq + (1 - c) * (1 - c) / 3;
  QuadraticSurd y{c * kq / (1 - c) - 2, mpq_class(sign) / (1 - c), d};
  auto a = expanded_coefficients(c, kq);
  QuadraticSurd acc{a.a3, 0, d};
  acc = surd_add(surd_mul(acc, y), a.a2);
  acc = surd_add(surd_mul(acc, y), a.a1);
  acc = surd_add(surd_mul(acc, y), a.a0);
  acc.p.canonicalize();
  acc.q.canonicalize();
  return acc;
}

bool gk_sign_conditions(long double c, long k) {
  const long double kk = static_cast<long double>(k);
  return gk_reference_point(c, kk, 4 * c, -1) > 1 && gk_closed_form(c, kk, 4 * c, -1) > 0 &&
         gk_closed_form(c, kk, c, -1) < 0 && gk_closed_form(c, kk, 4 * c, +1) < 0;
}

long gk_threshold(double c) {
  if (!(c > 0 && c < 1)) throw InvalidArgument("c must lie in (0,1)");
  const long limit = static_cast<long>(std::ceil(4000.0 / c)) + 1000;
  long last_fail = 0;
  for (long k = 1; k <= limit; ++k) {
    if (!gk_sign_conditions(c, k)) last_fail = k;
  }
  return last_fail + 1;
}

namespace {

long double bisect(long double c, long double k, long double lo, long double hi) {
  long double glo = gk_factored(c, k, lo);
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    long double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    long double gm = gk_factored(c, k, mid);
    if (gm == 0) return mid;
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

}  // namespace

GkRootReport gk_roots(double c, long k) {
  if (!(c > 0 && c < 1)) throw InvalidArgument("c must lie in (0,1)");
  if (k < 0) throw InvalidArgument("k must be nonnegative");
  GkRootReport r;
  r.c = c;
  r.k = k;
  r.k_c = gk_threshold(c);
  const long double cl = c, kl = static_cast<long double>(k);
  r.y[0] = gk_reference_point(cl, kl, 4 * cl, -1);
  r.y[1] = gk_reference_point(cl, kl, cl, -1);
  r.y[2] = gk_reference_point(cl, kl, cl, +1);
  r.y[3] = gk_reference_point(cl, kl, 4 * cl, +1);
  const long double g0 = gk_factored(cl, kl, r.y[0]), g1 = gk_factored(cl, kl, r.y[1]);
  const long double g2 = gk_factored(cl, kl, r.y[2]), g3 = gk_factored(cl, kl, r.y[3]);
  bool brackets = g0 > 0 && g1 < 0 && g2 > 0 && g3 < 0;
  if (!brackets) {
    if (k >= r.k_c) {
      throw LemmaViolation("g_k sign brackets failed at c=" + std::to_string(c) + ", k=" + std::to_string(k) +
                           " although k >= k_c=" + std::to_string(r.k_c));
    }
    r.failures.push_back("sign brackets do not hold below k_c");
    return r;
  }
  r.has_roots = true;
  r.t[0] = bisect(cl, kl, r.y[0], r.y[1]);
  r.t[1] = bisect(cl, kl, r.y[1], r.y[2]);
  r.t[2] = bisect(cl, kl, r.y[2], r.y[3]);
  const long double chain[8] = {1, r.y[0], r.t[0], r.y[1], r.t[1], r.y[2], r.t[2], r.y[3]};
  r.interlaced = true;
  for (int i = 0; i + 1 < 8; ++i) {
    if (!(chain[i] < chain[i + 1])) {
      r.interlaced = false;
      r.failures.push_back("interlacing fails between positions " + std::to_string(i) + " and " + std::to_string(i + 1));
    }
  }
  if (!r.interlaced && k >= r.k_c) {
    throw LemmaViolation("root interlacing fails at c=" + std::to_string(c) + ", k=" + std::to_string(k));
  }
  return r;
}

namespace {

long double log_binom(long double n, long double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// sign * exp(log) of x^{m+3}(1-c)^k b_{k,m}.
long double scaled_b_at(long double c, long k, long m, long double x) {
  const long double g = gk_factored(c, static_cast<long double>(k), static_cast<long double>(m));
  if (g == 0 || x == 0) return 0;
  const long double md = static_cast<long double>(m);
  long double lg = static_cast<long double>(m + 3) * std::log(x) + static_cast<long double>(k) * std::log1p(-c) +
                   log_binom(md + k, static_cast<long double>(k)) + std::log(std::fabs(g)) -
                   std::log((md + 1) * (md + 2) * (md + 3));
  long double v = std::exp(lg);
  return g > 0 ? v : -v;
}

PhiAbs direct_sum(double c, long k, double x) {
  const long double cl = c, kl = static_cast<long double>(k), xl = x;
  const long double scale = std::exp(kl * std::log1p(-cl));
  const long double e1 = cl * cl * cl * (kl + 1) - 3 * cl * cl;
  const long double e2 = cl * cl * cl * (kl + 1) * (kl + 2) / 2 - 3 * cl * cl * (kl + 1) + 3 * cl;
  long double sum = scale * (cl * cl * cl + xl * std::fabs(e1) + xl * xl * std::fabs(e2));
  PhiAbs out;
  out.method = "direct";
  if (x == 0) {
    out.value = static_cast<double>(sum);
    return out;
  }
  const long double peak = xl * kl / (1 - xl);
  long double prev = 0;
  for (long m = 0;; ++m) {
    long double term = std::fabs(scaled_b_at(cl, k, m, xl));
    sum += term;
    if (m > 3 * static_cast<long>(peak) + 60 && prev > 0) {
      long double ratio = term / prev;
      if (ratio < 0.999L && term <= 1e-22L * sum) {
        out.tail_bound = static_cast<double>(2 * term * ratio / (1 - ratio));
        break;
      }
    }
    if (m > 50000000) throw Error(ErrorCode::internal, "direct |phi_k| summation did not converge");
    prev = term;
  }
  out.value = static_cast<double>(sum);
  return out;
}

}  // namespace

long double scaled_b(long double c, long k, long m) { return scaled_b_at(c, k, m, c); }

PhiAbs phi_k_abs_direct(double c, long k) {
  if (!(c > 0 && c < 1)) throw InvalidArgument("c must lie in (0,1)");
  if (k < 0) throw InvalidArgument("k must be nonnegative");
  return direct_sum(c, k, c);
}

double phi_k_abs_at(double c, long k, double x) {
  if (!(c > 0 && c < 1)) throw InvalidArgument("c must lie in (0,1)");
  if (!(x >= 0 && x < 1)) throw InvalidArgument("x must lie in [0,1)");
  return direct_sum(c, k, x).value;
}

namespace {

bool closed_form_applies(double c, long k, long k_c) {
  const long double cl = c, kl = static_cast<long double>(k);
  return k >= k_c && cl * cl * cl * (kl + 1) - 3 * cl * cl > 0 &&
         cl * cl * cl * (kl + 1) * (kl + 2) / 2 - 3 * cl * cl * (kl + 1) + 3 * cl > 0;
}

// (1-c)^k f_k(m)
long double h_k(long double c, long k, long m) {
  const long double md = static_cast<long double>(m), kl = static_cast<long double>(k);
  const long double lead = std::exp(md * std::log(c) + kl * std::log1p(-c) + log_binom(md + kl, kl));
  const long double r1 = c * (md + kl + 1) / (md + 1);
  const long double r2 = r1 * c * (md + kl + 2) / (md + 2);
  return lead * (1 - 2 * r1 + r2);
}

}  // namespace

PhiAbs phi_k_abs_closed(double c, long k) {
  if (!(c > 0 && c < 1)) throw InvalidArgument("c must lie in (0,1)");
  const long k_c = gk_threshold(c);
  if (!closed_form_applies(c, k, k_c)) {
    throw InvalidArgument("closed form needs k >= k_c=" + std::to_string(k_c) + " and positive low-order coefficients");
  }
  GkRootReport roots = gk_roots(c, k);
  if (!roots.has_roots) throw LemmaViolation("no bracketed roots for k >= k_c");
  const long m1 = static_cast<long>(std::floor(roots.t[0]));
  const long m2 = static_cast<long>(std::ceil(roots.t[1]));
  const long m3 = static_cast<long>(std::floor(roots.t[2]));
  const long double cl = c;
  const long double v = 2 * cl * cl * cl * (h_k(cl, k, m1 + 1) - h_k(cl, k, m2) + h_k(cl, k, m3 + 1));
  PhiAbs out;
  out.value = static_cast<double>(v);
  out.method = "closed_form";
  return out;
}

PhiAbs phi_k_abs(double c, long k, const std::string& method) {
  if (method == "direct") return phi_k_abs_direct(c, k);
  if (method == "closed_form") return phi_k_abs_closed(c, k);
  if (method != "auto") throw InvalidArgument("unknown method '" + method + "'");
  if (!(c > 0 && c < 1)) throw InvalidArgument("c must lie in (0,1)");
  static thread_local std::pair<double, long> cache{-1.0, 0};
  if (cache.first != c) cache = {c, gk_threshold(c)};
  if (closed_form_applies(c, k, cache.second)) return phi_k_abs_closed(c, k);
  return phi_k_abs_direct(c, k);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw InvalidArgument("log-log fit needs positive data");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw InvalidArgument("slope fit needs distinct abscissae");
  const double slope = (n * sxy - sx * sy) / den;
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

SeriesDiagnostics decay_slope(double c, long k_min, long k_max, long points) {
  if (k_min < 1 || k_max <= k_min) throw InvalidArgument("need 1 <= k_min < k_max");
  SeriesDiagnostics d;
  d.k_c = gk_threshold(c);
  std::set<long> ks;
  points = std::max<long>(points, 2);
  for (long i = 0; i < points; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(points - 1);
    ks.insert(std::lround(std::exp(std::log(static_cast<double>(k_min)) * (1 - t) + std::log(static_cast<double>(k_max)) * t)));
  }
  std::vector<double> xs;
  for (long k : ks) {
    d.ks.push_back(k);
    d.values.push_back(phi_k_abs(c, k).value);
    xs.push_back(static_cast<double>(k));
  }
  d.slope = loglog_slope(xs, d.values, &d.intercept);
  return d;
}

}  // namespace pa
