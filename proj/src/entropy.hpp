#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ring.hpp"

namespace pa {

/// Size of a greedy maximal (d_T, eps)-separated subfamily: a point joins when
/// its sup torus distance to every kept point exceeds eps. Input order matters.
std::size_t sep_count(const std::vector<std::vector<double>>& points, double eps);

struct EntropyOptions {
  std::int64_t n = 16;          // window side; the window is the box of radius n/2
  double eps = 0.05;            // separation scale for the greedy count
  std::size_t samples = 2000;   // points for the greedy count
  std::size_t particles = 0;    // ball estimator population (0: derived from samples)
  std::size_t moves = 0;        // hit-and-run steps per particle per site (0: default)
  std::uint64_t seed = 0;
};

struct EntropyEstimate {
  std::string group;
  std::int64_t n = 0;
  std::size_t window_size = 0;
  double eps = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  // Greedy separated set over sampled points.
  std::size_t sep_count = 0;
  double log_sep = 0;
  double sep_rate = 0;  // log(sep)/|F|
  bool sep_saturated = false;
  // Bowen-ball volume estimator.
  double estimate = 0;
  double estimate_stderr = 0;
  double log_ball_volume = 0;
  std::size_t deep_sites = 0;
  std::size_t free_sites = 0;
  std::size_t particles = 0;
  std::size_t moves = 0;
  std::vector<double> site_rates;  // -log survival per determined site, processing order
  // Oracle.
  double oracle = 0;
  std::string oracle_method;
  std::string method;
};

EntropyEstimate entropy_estimate(const ExactElement& f, const EntropyOptions& opt);

/// Mahler measure by midpoint quadrature on the torus (d <= 2) averaged over 8 grid offsets.
double mahler_measure(const ExactElement& f, std::size_t points_per_dim = 0);
/// Mahler measure of a one-variable Laurent polynomial from its roots (Jensen).
double mahler_measure_roots(const ExactElement& f);
/// Complex roots of a one-variable Laurent polynomial (Durand-Kerner with Newton polish).
std::vector<std::complex<double>> polynomial_roots(const ExactElement& f);
double largest_root_modulus(const ExactElement& f);

struct LSeries {
  double value = 0;
  double tail_bound = 0;
  std::size_t terms = 0;
  double upper = 0;  // S_{3k+1}
  double lower = 0;  // S_{3k+2}
  double entropy = 0;  // 3 sqrt(3) / (4 pi) L(2, chi_3)
};
/// L(2, chi_3) = sum chi_3(n)/n^2 with chi_3 = (1, -1, 0) mod 3.
LSeries dirichlet_L_chi3(std::size_t terms);

}  // namespace pa
