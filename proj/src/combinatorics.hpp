#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ring.hpp"

namespace pa {

/// Family of subsets of {0..n-1}, n <= 20, as bitmasks.
struct SetFamily {
  int n = 0;
  std::vector<std::uint32_t> members;
};

/// Every subset of J appears as C & J for some member C.
bool scatters(const SetFamily& family, std::uint32_t J);

/// Sum_{i<k} C(n, i).
mpz_class binomial_prefix(int n, int k);

/// A scattered J with |J| = k, found by exhaustive search. Throws
/// HypothesisNotMet if |family| <= sum_{i<k} C(n,i), LemmaViolation if the
/// search fails under the hypothesis.
std::uint32_t sauer_shelah_witness(const SetFamily& family, int k);

/// Random family of the given size (distinct members) on n points.
SetFamily random_family(int n, std::size_t size, std::mt19937_64& rng);

double binary_entropy(double beta);

struct StirlingReport {
  double beta = 0;
  double kappa = 0;
  long m_lo = 0, m_hi = 0;
  long m0 = 0;            // smallest m0 with the bound holding on [m0, m_hi]
  long failures_above_m0 = 0;
  bool holds = false;
};
/// Checks sum_{i <= floor(beta m)} C(m, i) <= exp(kappa(beta) m) exactly for m in [m_lo, m_hi].
StirlingReport stirling_bound_check(double beta, long m_lo, long m_hi);

/// dim-dimensional affine functionals phi_j(x) = a_j . x + a0_j with thresholds b_j.
struct AffineSystem {
  int dim = 0;
  std::vector<std::vector<mpq_class>> coeffs;  // k rows of length dim
  std::vector<mpq_class> offsets;              // a0_j
  std::vector<mpq_class> thresholds;           // b_j
  std::size_t size() const { return coeffs.size(); }
};

/// Linear constraint sum a_i x_i + a0 (< or <=) 0 over the rationals.
struct Inequality {
  std::vector<mpq_class> a;
  mpq_class a0;
  bool strict = false;
};

/// Fourier-Motzkin feasibility for a mixed strict/non-strict system.
bool fm_feasible(std::vector<Inequality> system, int dim);

/// Pattern a in {0,1}^k with {phi_j < b_j : a_j = 0} and {phi_j >= b_j : a_j = 1}
/// jointly infeasible. Returns it as a bitmask (bit j = a_j).
std::uint32_t empty_sign_pattern(const AffineSystem& sys);
AffineSystem random_affine_system(int dim, int k, std::mt19937_64& rng);

struct VqReport {
  std::size_t q_size = 0;
  std::size_t interior_size = 0;
  std::size_t dim = 0;    // dim V_Q
  std::size_t bound = 0;  // |Q E^-1 \ Int_E Q|
};
/// Kernel dimension of v -> (v f*) restricted to Int_E Q, with exact rank.
VqReport vq_dimension(const ExactElement& f, const Window& Q);
/// Rank over Q by fraction-free elimination.
std::size_t exact_rank(std::vector<std::vector<mpz_class>> rows, std::size_t cols);

/// log(c^x (1-c)^y (x+y)^(x+y) / (x^x y^y)).
double combinatorial_log_value(double c, double x, double y);
struct CombinatorialReport {
  double c = 0;
  std::size_t samples = 0;
  double max_log_value = -1e300;
  double max_at_peak = 0;  // |log value| at x = cy/(1-c)
  bool unimodal = true;
};
CombinatorialReport combinatorial_bound_check(double c, std::size_t samples, std::uint64_t seed);

}  // namespace pa
