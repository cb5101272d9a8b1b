#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dense.hpp"
#include "ring.hpp"

namespace pa {

struct WellBalancedCheck {
  bool sums_to_zero = false;
  bool off_identity_nonpositive = false;
  bool symmetric = false;
  bool support_generates = false;  // checked on box(R)
  bool overall = false;
  std::int64_t radius = 0;
  std::string note;
};

/// Zero coefficient sum, nonpositive off-identity coefficients, f = f*, and
/// supp(f) generating the group (closure under products covering box(R)).
WellBalancedCheck check_well_balanced(const ExactElement& f, std::int64_t R);

/// Truncation of (f*)^-1 for a lopsided f = c0 s (1 - g), |g|_1 < 1, where c0 is
/// the coefficient of largest modulus, at s. l1_error covers the geometric
/// tail and every pruned mass.
TruncatedSeries neumann_inverse(const ExactElement& f, double tol = 1e-12, std::size_t max_terms = 10000);
/// |w f* - 1|_1 by direct convolution.
double inverse_residual(const RealElement& w, const ExactElement& f);

struct VarietyMin {
  double min_modulus = 0;
  std::vector<double> argmin;  // angles in [0, 2 pi)
  std::size_t grid_points = 0;
};
/// min over the unit torus of |f(e^{i theta})| by a grid scan refined with pattern search.
VarietyMin unitary_variety_min(const ExactElement& f, std::size_t grid_per_angle = 0);

struct GreenResult {
  std::string method;
  DenseField omega;
  double omega_identity = 0;
  std::size_t iterations = 0;
  /// sup |omega(1-p) - delta| over {g : g supp(p) in box}.
  double interior_residual = 0;
  double residual_at_identity = 0;
  /// Series method: l1 mass lost at the box boundary and a heuristic sup-norm
  /// estimate of the omitted tail sum_{j>J} p^j.
  double dropped_mass = 0;
  double tail_estimate = 0;
};

/// Symmetric probability p on a transient group (rejects Z and Z^2).
void require_transient_walk(const RealElement& p);
/// omega = sum_j p^j approximated on the box with the given radii.
/// "relaxation": conjugate gradients for omega - omega p = delta with omega = 0
/// outside the box, to relative residual tol. "series": sum_{j <= terms} p^j on
/// the box.
GreenResult green_function(const RealElement& p, const std::vector<std::int64_t>& radii, const std::string& method,
                           double tol = 1e-10, std::size_t terms = 0);

/// (1/4)(u1 + u1^-1 + u2 + u2^-1) on the Heisenberg group, or the simple
/// random walk on Z^d.
ExactElement simple_random_walk(const GroupDescriptor& group);

struct BallProfile {
  std::vector<std::int64_t> radius;
  std::vector<double> omega_mass;
  std::vector<double> damped_mass;  // (1-u3)^3 omega
  std::vector<double> damped_increment_ratio;  // increment(r+1)/increment(r)
};
/// Ball masses of omega and (1-u3)^3 omega on the Heisenberg group.
BallProfile heisenberg_green_profile(const GreenResult& green);

struct HomoclinicStep {
  std::size_t J = 0;
  double residual_left = 0;    // |f b_J - (1-u3)^3|_1, direct convolution
  double residual_right = 0;   // |b_J f - (1-u3)^3|_1
  double telescoped = 0;       // |p^{J+1} (1-u3)^3|_1
  double increment = 0;        // |b_J - b_{J'}|_1 to the previous checkpoint
  double dropped_mass = 0;     // cumulative mass lost at the box boundary
  double b_l1 = 0;
};
struct HomoclinicReport {
  std::vector<std::int64_t> radii;
  std::vector<HomoclinicStep> steps;
  double c = 0;                 // coefficient of u3 in p^4, by word enumeration
  std::size_t words = 0;
  std::size_t words_hitting = 0;
};
/// b_J = (1/4) sum_{j <= J} p^j (1-u3)^3 for f = 4 - u1 - u1^-1 - u2 - u2^-1.
HomoclinicReport heisenberg_homoclinic(const std::vector<std::size_t>& checkpoints, const std::vector<std::int64_t>& radii);

/// Coefficient of u3 in p^4 by enumerating the 256 words of length 4.
double p4_u3_coefficient(std::size_t* words = nullptr, std::size_t* hits = nullptr);

struct MultiplierReport {
  double l1_error = 0;
  double k_tail = 0;            // bound on sum_{k > K} |r^k Phi_k|_1
  bool k_tail_heuristic = false;
  double residual_left = 0;     // |a(1-(q+r)) - (c-q)^3|_1
  double residual_right = 0;    // |(1-(q+r))a - (c-q)^3|_1
  double a_l1 = 0;
  std::vector<double> phi_norms;   // |Phi_k|_1 as computed
  std::vector<double> r_norms;     // |R_k|_1
  std::size_t K = 0;
  double c = 0;
  std::vector<std::int64_t> radii;
};
/// a = sum_{k <= K} r^k (c-q)^3 (1-q)^{-(k+1)}. The Heisenberg instance uses
/// q = c u3, r = p^4 - q.
MultiplierReport cubic_multiplier(const RealElement& q, const RealElement& r, double c, std::size_t K, double prune_tol,
                                  const std::vector<std::int64_t>& radii);

}  // namespace pa
