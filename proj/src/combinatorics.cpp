#include "combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

namespace pa {

bool scatters(const SetFamily& family, std::uint32_t J) {
  const int bits = std::popcount(J);
  if (bits > 20) throw InvalidArgument("scatters: |J| must be at most 20");
  std::unordered_set<std::uint32_t> traces;
  for (auto c : family.members) traces.insert(c & J);
  return traces.size() == (std::size_t{1} << bits);
}

mpz_class binomial_prefix(int n, int k) {
  mpz_class sum = 0, term = 1;  // C(n, 0)
  for (int i = 0; i < k && i <= n; ++i) {
    sum += term;
    term = term * (n - i) / (i + 1);
  }
  return sum;
}

std::uint32_t sauer_shelah_witness(const SetFamily& family, int k) {
  if (family.n < 1 || family.n > 16) throw InvalidArgument("ground set size must be in 1..16");
  if (k < 0 || k > family.n) throw InvalidArgument("k must lie in 0..n");
  std::vector<std::uint32_t> members = family.members;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  const mpz_class needed = binomial_prefix(family.n, k);
  if (mpz_class(static_cast<unsigned long>(members.size())) <= needed) {
    throw HypothesisNotMet("family has " + std::to_string(members.size()) + " members, needs more than " + needed.get_str());
  }
  SetFamily distinct{family.n, members};
  if (k == 0) return 0;
  // Gosper's hack over all k-subsets.
  const std::uint32_t limit = std::uint32_t{1} << family.n;
  for (std::uint32_t J = (std::uint32_t{1} << k) - 1; J < limit;) {
    if (scatters(distinct, J)) return J;
    std::uint32_t c = J & (~J + 1);
    std::uint32_t r = J + c;
    J = (((r ^ J) >> 2) / c) | r;
  }
  throw LemmaViolation("no scattered " + std::to_string(k) + "-subset although the family is large enough");
}

SetFamily random_family(int n, std::size_t size, std::mt19937_64& rng) {
  if (n < 1 || n > 20) throw InvalidArgument("ground set size must be in 1..20");
  const std::size_t universe = std::size_t{1} << n;
  if (size > universe) throw InvalidArgument("family larger than the power set");
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(universe - 1));
  std::unordered_set<std::uint32_t> seen;
  SetFamily f{n, {}};
  while (f.members.size() < size) {
    auto m = pick(rng);
    if (seen.insert(m).second) f.members.push_back(m);
  }
  return f;
}

double binary_entropy(double beta) {
  if (beta <= 0 || beta >= 1) return 0;
  return -beta * std::log(beta) - (1 - beta) * std::log1p(-beta);
}

namespace {

double log_mpz(const mpz_class& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

StirlingReport stirling_bound_check(double beta, long m_lo, long m_hi) {
  if (!(beta > 0 && beta < 0.5)) throw InvalidArgument("beta must lie in (0, 1/2)");
  if (m_lo < 1 || m_hi < m_lo) throw InvalidArgument("need 1 <= m_lo <= m_hi");
  StirlingReport r;
  r.beta = beta;
  r.kappa = binary_entropy(beta);
  r.m_lo = m_lo;
  r.m_hi = m_hi;
  std::vector<bool> ok(static_cast<std::size_t>(m_hi - m_lo + 1));
  for (long m = m_lo; m <= m_hi; ++m) {
    const long top = static_cast<long>(std::floor(beta * static_cast<double>(m)));
    mpz_class sum = 0, term = 1;
    for (long i = 0; i <= top; ++i) {
      sum += term;
      term = term * (m - i) / (i + 1);
    }
    ok[static_cast<std::size_t>(m - m_lo)] = log_mpz(sum) <= r.kappa * static_cast<double>(m);
  }
  r.m0 = m_hi + 1;
  for (long m = m_hi; m >= m_lo && ok[static_cast<std::size_t>(m - m_lo)]; --m) r.m0 = m;
  r.failures_above_m0 = 0;
  r.holds = r.m0 <= m_hi;
  return r;
}

bool fm_feasible(std::vector<Inequality> system, int dim) {
  for (int var = dim - 1; var >= 0; --var) {
    auto v = static_cast<std::size_t>(var);
    std::vector<Inequality> pos, neg, next;
    for (auto& q : system) {
      int s = sgn(q.a[v]);
      if (s > 0) {
        pos.push_back(std::move(q));
      } else if (s < 0) {
        neg.push_back(std::move(q));
      } else {
        next.push_back(std::move(q));
      }
    }
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        // (-n_v) * p + p_v * n has zero coefficient on v, both multipliers positive.
        mpq_class lp = -n.a[v], ln = p.a[v];
        Inequality c;
        c.a.resize(static_cast<std::size_t>(dim));
        for (std::size_t i = 0; i < c.a.size(); ++i) c.a[i] = lp * p.a[i] + ln * n.a[i];
        c.a[v] = 0;
        c.a0 = lp * p.a0 + ln * n.a0;
        c.strict = p.strict || n.strict;
        next.push_back(std::move(c));
      }
    }
    system = std::move(next);
  }
  for (const auto& q : system) {
    int s = sgn(q.a0);
    if (q.strict ? s >= 0 : s > 0) return false;
  }
  return true;
}

std::uint32_t empty_sign_pattern(const AffineSystem& sys) {
  const std::size_t k = sys.size();
  if (k == 0 || k > 20) throw InvalidArgument("affine system needs 1..20 functionals");
  if (static_cast<int>(k) <= sys.dim) throw InvalidArgument("need k > dim");
  for (std::uint32_t pattern = 0; pattern < (std::uint32_t{1} << k); ++pattern) {
    std::vector<Inequality> ineqs;
    for (std::size_t j = 0; j < k; ++j) {
      Inequality q;
      q.a = sys.coeffs[j];
      q.a0 = sys.offsets[j] - sys.thresholds[j];
      if (pattern >> j & 1) {
        // phi_j >= b_j  <=>  -(phi_j - b_j) <= 0
        for (auto& x : q.a) x = -x;
        q.a0 = -q.a0;
        q.strict = false;
      } else {
        q.strict = true;  // phi_j - b_j < 0
      }
      ineqs.push_back(std::move(q));
    }
    if (!fm_feasible(std::move(ineqs), sys.dim)) return pattern;
  }
  throw LemmaViolation("every sign pattern is feasible for k=" + std::to_string(k) + " > dim=" + std::to_string(sys.dim));
}

AffineSystem random_affine_system(int dim, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  auto dyadic = [&] {
    mpq_class v(static_cast<long>(std::lround(gauss(rng) * 1024.0)), 1024);
    v.canonicalize();
    return v;
  };
  AffineSystem s;
  s.dim = dim;
  for (int j = 0; j < k; ++j) {
    std::vector<mpq_class> row;
    for (int i = 0; i < dim; ++i) row.push_back(dyadic());
    s.coeffs.push_back(std::move(row));
    s.offsets.push_back(dyadic());
    s.thresholds.push_back(dyadic());
  }
  for (auto& row : s.coeffs) {
    for (auto& x : row) x.canonicalize();
  }
  for (auto& x : s.offsets) x.canonicalize();
  for (auto& x : s.thresholds) x.canonicalize();
  return s;
}

std::size_t exact_rank(std::vector<std::vector<mpz_class>> rows, std::size_t cols) {
  // Integer row reduction; each updated row is divided by its content so
  // entries stay small, and rows with a zero in the pivot column are untouched.
  std::size_t rank = 0;
  const std::size_t m = rows.size();
  for (std::size_t col = 0; col < cols && rank < m; ++col) {
    std::size_t piv = rank;
    while (piv < m && rows[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(rows[piv], rows[rank]);
    const std::vector<mpz_class>& p = rows[rank];
    for (std::size_t r = rank + 1; r < m; ++r) {
      if (rows[r][col] == 0) continue;
      const mpz_class a = p[col], b = rows[r][col];
      mpz_class content = 0;
      for (std::size_t c = col; c < cols; ++c) {
        rows[r][c] = a * rows[r][c] - b * p[c];
        if (rows[r][c] != 0) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), rows[r][c].get_mpz_t());
      }
      if (content > 1) {
        for (std::size_t c = col; c < cols; ++c) {
          if (rows[r][c] != 0) mpz_divexact(rows[r][c].get_mpz_t(), rows[r][c].get_mpz_t(), content.get_mpz_t());
        }
      }
    }
    ++rank;
  }
  return rank;
}

VqReport vq_dimension(const ExactElement& f, const Window& Q) {
  if (f.is_zero()) throw InvalidArgument("f must be nonzero");
  if (f.group() != Q.group()) throw InvalidArgument("f and Q live in different groups");
  if (Q.size() > 400) throw InvalidArgument("|Q| must be at most 400");
  const auto E = f.support();
  if (std::none_of(E.begin(), E.end(), [](const GroupElement& g) { return g.is_identity(); })) {
    throw InvalidArgument("the identity must belong to supp(f)");
  }
  Window inner = interior(Q, E);
  // Clear denominators; rank is unchanged by scaling.
  mpz_class lcm = 1;
  for (const auto& [g, c] : f.terms()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  std::vector<std::vector<mpz_class>> rows(inner.size(), std::vector<mpz_class>(Q.size(), 0));
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (const auto& [s, c] : f.terms()) {
      mpq_class scaled = c * lcm;
      rows[i][static_cast<std::size_t>(Q.index_of(mul(inner[i], s)))] += scaled.get_num();
    }
  }
  std::unordered_set<GroupElement, GroupElementHash> qe;
  for (const auto& q : Q.elements()) {
    for (const auto& s : E) qe.insert(mul(q, inv(s)));
  }
  VqReport r;
  r.q_size = Q.size();
  r.interior_size = inner.size();
  r.dim = Q.size() - exact_rank(std::move(rows), Q.size());
  r.bound = qe.size() - inner.size();
  if (r.dim > r.bound) {
    throw LemmaViolation("dim V_Q = " + std::to_string(r.dim) + " exceeds |QE^-1 \\ Int_E Q| = " + std::to_string(r.bound));
  }
  return r;
}

double combinatorial_log_value(double c, double x, double y) {
  const long double cl = c, xl = x, yl = y;
  return static_cast<double>(xl * std::log(cl) + yl * std::log1p(-cl) + (xl + yl) * std::log(xl + yl) -
                             xl * std::log(xl) - yl * std::log(yl));
}

CombinatorialReport combinatorial_bound_check(double c, std::size_t samples, std::uint64_t seed) {
  if (!(c > 0 && c < 1)) throw InvalidArgument("c must lie in (0,1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  CombinatorialReport r;
  r.c = c;
  r.samples = samples;
  constexpr double slack = 1e-12;
  for (std::size_t i = 0; i < samples; ++i) {
    double x = 1000.0 - u(rng), y = 1000.0 - u(rng);  // (0, 1000]
    double v = combinatorial_log_value(c, x, y);
    r.max_log_value = std::max(r.max_log_value, v);
    if (v > slack) throw LemmaViolation("combinatorial bound exceeds 1 at x=" + std::to_string(x) + ", y=" + std::to_string(y));
    double peak = combinatorial_log_value(c, c * y / (1 - c), y);
    r.max_at_peak = std::max(r.max_at_peak, std::fabs(peak));
    if (std::fabs(peak) > slack) throw LemmaViolation("bound is not attained at x = cy/(1-c)");
    if (i < 64) {
      // Sampled unimodality in x around the peak.
      const double xp = c * y / (1 - c);
      double prev = -1e300;
      for (int j = 1; j <= 32; ++j) {
        double v2 = combinatorial_log_value(c, xp * j / 32.0, y);
        if (v2 < prev - slack) r.unimodal = false;
        prev = v2;
      }
      prev = 1e300;
      for (int j = 0; j <= 32; ++j) {
        double v2 = combinatorial_log_value(c, xp * (1.0 + j / 8.0), y);
        if (v2 > prev + slack) r.unimodal = false;
        prev = v2;
      }
    }
  }
  if (!r.unimodal) throw LemmaViolation("combinatorial expression is not unimodal in x");
  return r;
}

}  // namespace pa
