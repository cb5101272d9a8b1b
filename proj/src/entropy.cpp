#include "entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coding.hpp"

namespace pa {

std::size_t sep_count(const std::vector<std::vector<double>>& points, double eps) {
  if (!(eps > 0)) throw InvalidArgument("eps must be positive");
  std::vector<const std::vector<double>*> kept;
  for (const auto& p : points) {
    if (!kept.empty() && p.size() != kept.front()->size()) throw InvalidArgument("points live on different windows");
    bool separated = true;
    for (const auto* q : kept) {
      bool far = false;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (torus_distance(p[i], (*q)[i]) > eps) {
          far = true;
          break;
        }
      }
      if (!far) {
        separated = false;
        break;
      }
    }
    if (separated) kept.push_back(&p);
  }
  return kept.size();
}

// ---------------------------------------------------------------------------
// Bowen-ball volume estimator.
//
// For the window F and free parameters theta of the sampling plan, the lifted
// difference y = A theta of two nearby points must satisfy |y_t| <= eps at
// every site. Rescaled to eps = 1 this is a polytope P in [-1,1]^k, and
// log sep ~ -log(eps^k vol P). Processing sites in plan order,
// vol P = 2^k prod_s p_s where p_s is the probability that the new site stays
// in [-1,1] given all earlier constraints. Each p_s is estimated by a particle
// population kept uniform on the current polytope by resampling and
// hit-and-run moves. Directions are differences of two other particles (which
// adapt to the polytope's shape) or coordinate directions of a free parameter.

namespace {

struct BallResult {
  std::vector<double> rates;  // per processing position; 0 for free sites
  std::vector<bool> is_free;
  double log_volume = 0;
};

BallResult ball_volume(const SamplingPlan& plan, std::size_t M, std::size_t moves, std::uint64_t seed) {
  const std::size_t n = plan.window().size();
  const auto& order = plan.order();
  std::vector<std::size_t> pos_of(n);
  for (std::size_t p = 0; p < n; ++p) pos_of[order[p]] = p;
  // Dependencies by processing position.
  std::vector<std::vector<std::pair<std::size_t, double>>> deps(n);
  std::vector<bool> is_free(n);
  std::vector<std::size_t> free_positions;
  for (std::size_t p = 0; p < n; ++p) {
    is_free[p] = plan.is_free(order[p]);
    if (is_free[p]) free_positions.push_back(p);
    for (const auto& [site, w] : plan.dependencies(order[p])) deps[p].emplace_back(pos_of[site], w);
  }
  // Column of A for each free parameter: dy/dtheta_c.
  std::vector<std::vector<double>> column(free_positions.size(), std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < free_positions.size(); ++c) {
    auto& col = column[c];
    for (std::size_t p = 0; p < n; ++p) {
      if (is_free[p]) {
        col[p] = p == free_positions[c] ? 1.0 : 0.0;
      } else {
        double s = 0;
        for (const auto& [q, w] : deps[p]) s += w * col[q];
        col[p] = s;
      }
    }
  }

  UniformStream rng(seed);
  auto uniform_index = [&](std::size_t m) { return static_cast<std::size_t>(rng.next() * static_cast<double>(m)) % m; };
  std::vector<double> Y(M * n, 0.0), Ynew(M * n, 0.0), dy(n);
  std::vector<std::size_t> survivors;
  BallResult res;
  res.rates.assign(n, 0.0);
  res.is_free = is_free;
  std::size_t free_seen = 0;

  for (std::size_t p = 0; p < n; ++p) {
    if (is_free[p]) {
      for (std::size_t i = 0; i < M; ++i) Y[i * n + p] = 2.0 * rng.next() - 1.0;
      res.log_volume += std::log(2.0);
      ++free_seen;
      continue;
    }
    survivors.clear();
    for (std::size_t i = 0; i < M; ++i) {
      double v = 0;
      for (const auto& [q, w] : deps[p]) v += w * Y[i * n + q];
      Y[i * n + p] = v;
      if (std::fabs(v) <= 1.0) survivors.push_back(i);
    }
    if (survivors.empty()) {
      throw InvalidArgument("ball estimator lost every particle at site " + plan.window()[order[p]].to_string() +
                            "; increase the particle count");
    }
    const double ps = static_cast<double>(survivors.size()) / static_cast<double>(M);
    res.rates[p] = -std::log(ps);
    res.log_volume += std::log(ps);
    // Systematic resampling from the survivors.
    const double u0 = rng.next();
    for (std::size_t i = 0; i < M; ++i) {
      const std::size_t k = std::min(survivors.size() - 1,
                                     static_cast<std::size_t>((static_cast<double>(i) + u0) * ps));
      std::copy_n(&Y[survivors[k] * n], p + 1, &Ynew[i * n]);
    }
    std::swap(Y, Ynew);
    // Hit-and-run on the polytope of the first p+1 positions.
    const std::size_t len = p + 1;
    for (std::size_t sweep = 0; sweep < moves; ++sweep) {
      for (std::size_t i = 0; i < M; ++i) {
        double* y = &Y[i * n];
        const double* d = nullptr;
        bool coordinate = M < 3 || rng.next() < 0.25;
        if (!coordinate) {
          std::size_t j = uniform_index(M - 1), k = uniform_index(M - 2);
          if (j >= i) ++j;
          if (k >= std::min(i, j)) ++k;
          if (k >= std::max(i, j)) ++k;
          const double* yj = &Y[j * n];
          const double* yk = &Y[k * n];
          double norm = 0;
          for (std::size_t q = 0; q < len; ++q) {
            dy[q] = yj[q] - yk[q];
            norm += std::fabs(dy[q]);
          }
          if (norm == 0.0) {
            coordinate = true;
          } else {
            d = dy.data();
          }
        }
        if (coordinate) d = column[uniform_index(free_seen)].data();
        double lo = -1e300, hi = 1e300;
        for (std::size_t q = 0; q < len; ++q) {
          if (d[q] == 0.0) continue;
          double t1 = (-1.0 - y[q]) / d[q], t2 = (1.0 - y[q]) / d[q];
          if (t1 > t2) std::swap(t1, t2);
          lo = std::max(lo, t1);
          hi = std::min(hi, t2);
        }
        if (!(hi > lo)) continue;
        const double t = lo + (hi - lo) * rng.next();
        for (std::size_t q = 0; q < len; ++q) y[q] = std::clamp(y[q] + t * d[q], -1.0, 1.0);
      }
    }
  }
  return res;
}

}  // namespace

EntropyEstimate entropy_estimate(const ExactElement& f, const EntropyOptions& opt) {
  const auto& group = f.group();
  if (!group.is_lattice() || group.rank > 2) {
    throw InvalidArgument("entropy estimation supports Z and Z^2 only (got " + group.name() + ")");
  }
  if (opt.n < 1) throw InvalidArgument("window size n must be >= 1");
  if (opt.samples < 1) throw InvalidArgument("samples must be >= 1");
  const std::int64_t radius = std::max<std::int64_t>(1, opt.n / 2);
  const Window F = box(group, radius);
  SamplingPlan plan(f, F);

  EntropyEstimate est;
  est.group = group.name();
  est.n = opt.n;
  est.window_size = F.size();
  est.eps = opt.eps;
  est.samples = opt.samples;
  est.seed = opt.seed;
  est.method = "bowen-ball sequential monte carlo (linearized, eps-rescaled); greedy separated set reported alongside";

  // Greedy separated set over sampled points.
  std::vector<std::vector<double>> pts(opt.samples);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    UniformStream rng(derive_seed(opt.seed, i));
    std::vector<double> free(plan.free_count());
    for (double& v : free) v = rng.next();
    pts[i] = plan.solve(free);
  }
  est.sep_count = sep_count(pts, opt.eps);
  est.log_sep = std::log(static_cast<double>(est.sep_count));
  est.sep_rate = est.log_sep / static_cast<double>(F.size());
  est.sep_saturated = est.sep_count == opt.samples;

  // Ball estimator.
  est.particles = opt.particles ? opt.particles : std::clamp<std::size_t>(opt.samples / 2, 256, 2000);
  est.moves = opt.moves ? opt.moves : 10;
  BallResult ball = ball_volume(plan, est.particles, est.moves, derive_seed(opt.seed, 0xBA11));
  est.log_ball_volume = ball.log_volume;
  est.free_sites = plan.free_count();
  const std::int64_t inner = radius / 2;
  std::vector<double> deep;
  for (std::size_t p = 0; p < F.size(); ++p) {
    if (ball.is_free[p]) continue;
    est.site_rates.push_back(ball.rates[p]);
    const GroupElement& g = F[plan.order()[p]];
    bool in = true;
    for (int i = 0; i < group.rank; ++i) in = in && std::abs(g[i]) <= inner;
    if (in) deep.push_back(ball.rates[p]);
  }
  if (deep.empty()) throw InvalidArgument("window too small: no determined sites in the inner half");
  double mean = 0;
  for (double v : deep) mean += v;
  mean /= static_cast<double>(deep.size());
  double var = 0;
  for (double v : deep) var += (v - mean) * (v - mean);
  est.estimate = mean;
  est.estimate_stderr = deep.size() > 1 ? std::sqrt(var / static_cast<double>(deep.size() - 1) / static_cast<double>(deep.size())) : 0.0;
  est.deep_sites = deep.size();

  if (group.rank == 1) {
    est.oracle = mahler_measure_roots(f);
    est.oracle_method = "mahler measure from polynomial roots (Jensen)";
  } else {
    est.oracle = mahler_measure(f);
    est.oracle_method = "mahler measure by torus quadrature";
  }
  return est;
}

// ---------------------------------------------------------------------------
// Mahler measure and roots

double mahler_measure(const ExactElement& f, std::size_t points_per_dim) {
  const auto& group = f.group();
  if (!group.is_lattice() || group.rank > 2) throw InvalidArgument("Mahler quadrature supports Z and Z^2");
  if (f.is_zero()) throw InvalidArgument("Mahler measure of zero is undefined");
  const int d = group.rank;
  const std::size_t N = points_per_dim ? points_per_dim : (d == 1 ? 4096 : 1024);
  struct Term {
    std::int64_t e0, e1;
    double c;
  };
  std::vector<Term> terms;
  for (const auto& [g, c] : f.terms()) terms.push_back({g[0], d > 1 ? g[1] : 0, c.get_d()});
  const int offsets = 8;
  const double two_pi = 2 * std::numbers::pi;
  double total = 0;
  for (int o = 0; o < offsets; ++o) {
    // Stratified offsets: the two coordinates use different shifts so zeros on the diagonal are avoided.
    const double off0 = (static_cast<double>(o) + 0.5) / offsets;
    const double off1 = (static_cast<double>((3 * o + 1) % offsets) + 0.5) / offsets;
    std::vector<std::complex<double>> phase0(N), phase1(N);
    for (std::size_t i = 0; i < N; ++i) {
      phase0[i] = std::polar(1.0, two_pi * (static_cast<double>(i) + off0) / static_cast<double>(N));
      phase1[i] = std::polar(1.0, two_pi * (static_cast<double>(i) + off1) / static_cast<double>(N));
    }
    auto pw = [](std::complex<double> z, std::int64_t e) {
      return e >= 0 ? std::pow(z, static_cast<int>(e)) : std::pow(std::conj(z), static_cast<int>(-e));
    };
    double sum = 0;
    if (d == 1) {
      for (std::size_t i = 0; i < N; ++i) {
        std::complex<double> z = 0;
        for (const auto& t : terms) z += t.c * pw(phase0[i], t.e0);
        sum += std::log(std::abs(z));
      }
      total += sum / static_cast<double>(N);
    } else {
      std::vector<std::vector<std::complex<double>>> p1(terms.size(), std::vector<std::complex<double>>(N));
      for (std::size_t k = 0; k < terms.size(); ++k)
        for (std::size_t j = 0; j < N; ++j) p1[k][j] = terms[k].c * pw(phase1[j], terms[k].e1);
      std::vector<std::complex<double>> p0(terms.size());
      for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = 0; k < terms.size(); ++k) p0[k] = pw(phase0[i], terms[k].e0);
        double row = 0;
        for (std::size_t j = 0; j < N; ++j) {
          std::complex<double> z = 0;
          for (std::size_t k = 0; k < terms.size(); ++k) z += p0[k] * p1[k][j];
          row += std::log(std::abs(z));
        }
        sum += row;
      }
      total += sum / (static_cast<double>(N) * static_cast<double>(N));
    }
  }
  return total / offsets;
}

namespace {

// Coefficients a_0..a_D of u^{-min} f as an ordinary polynomial.
std::vector<double> ordinary_coefficients(const ExactElement& f) {
  if (!f.group().is_lattice() || f.group().rank != 1) throw InvalidArgument("root finding needs a polynomial over Z");
  if (f.is_zero()) throw InvalidArgument("zero polynomial has no roots");
  const std::int64_t lo = f.terms().begin()->first[0], hi = f.terms().rbegin()->first[0];
  std::vector<double> a(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [g, c] : f.terms()) a[static_cast<std::size_t>(g[0] - lo)] = c.get_d();
  return a;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(const ExactElement& f) {
  const std::vector<double> a = ordinary_coefficients(f);
  const std::size_t D = a.size() - 1;
  if (D == 0) return {};
  using cld = std::complex<long double>;
  std::vector<cld> mon(D + 1);
  for (std::size_t i = 0; i <= D; ++i) mon[i] = static_cast<long double>(a[i] / a[D]);
  auto eval = [&](cld z) {
    cld v = 1;
    for (std::size_t i = D; i-- > 0;) v = v * z + mon[i];
    return v;
  };
  auto deriv = [&](cld z) {
    cld v = static_cast<long double>(D);
    for (std::size_t i = D - 1; i >= 1; --i) v = v * z + static_cast<long double>(i) * mon[i];
    return v;
  };
  long double bound = 1;
  for (std::size_t i = 0; i < D; ++i) bound = std::max(bound, 1 + std::abs(mon[i]));
  std::vector<cld> z(D);
  for (std::size_t i = 0; i < D; ++i) {
    z[i] = std::polar(bound * 0.9L, static_cast<long double>(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(D) + 0.4));
  }
  for (int it = 0; it < 2000; ++it) {
    long double change = 0;
    for (std::size_t i = 0; i < D; ++i) {
      cld den = 1;
      for (std::size_t j = 0; j < D; ++j)
        if (j != i) den *= z[i] - z[j];
      if (std::abs(den) == 0) den = 1e-30L;
      cld step = eval(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-18L) break;
  }
  for (auto& r : z) {
    for (int it = 0; it < 5; ++it) {
      cld dv = deriv(r);
      if (std::abs(dv) == 0) break;
      r -= eval(r) / dv;
    }
  }
  std::vector<std::complex<double>> out;
  for (const auto& r : z) out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y) : std::arg(x) < std::arg(y);
  });
  return out;
}

double mahler_measure_roots(const ExactElement& f) {
  const std::vector<double> a = ordinary_coefficients(f);
  double m = std::log(std::fabs(a.back()));
  for (const auto& r : polynomial_roots(f)) m += std::max(0.0, std::log(std::abs(r)));
  return m;
}

double largest_root_modulus(const ExactElement& f) {
  auto roots = polynomial_roots(f);
  if (roots.empty()) throw InvalidArgument("constant polynomial has no roots");
  return std::abs(roots.back());
}

LSeries dirichlet_L_chi3(std::size_t terms) {
  if (terms < 1000) throw InvalidArgument("need at least 1000 terms");
  LSeries out;
  // Round down to a full period so the bracket S_{3k+1} >= L >= S_{3k+2} applies.
  const std::size_t k = terms / 3;
  double s = 0;
  for (std::size_t n = 1; n <= 3 * k; ++n) {
    const double nn = static_cast<double>(n);
    switch (n % 3) {
      case 1: s += 1.0 / (nn * nn); break;
      case 2: s -= 1.0 / (nn * nn); break;
      default: break;
    }
  }
  const double a = static_cast<double>(3 * k + 1);
  const double b = static_cast<double>(3 * k + 2);
  out.upper = s + 1.0 / (a * a);
  out.lower = out.upper - 1.0 / (b * b);
  out.value = 0.5 * (out.upper + out.lower);
  out.tail_bound = 0.5 * (out.upper - out.lower);
  out.terms = 3 * k + 2;
  out.entropy = 3.0 * std::sqrt(3.0) / (4.0 * std::numbers::pi) * out.value;
  return out;
}

}  // namespace pa
