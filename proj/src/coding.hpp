#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ring.hpp"

namespace pa {

enum class PartitionKind { B, C };

/// Symbol range {j_min..j_max} of the partition.
struct Alphabet {
  std::int64_t j_min = 0;
  std::int64_t j_max = 0;
  std::string kind;  // "B_full", "B_plus_only", "B_minus_only", "C"
  std::size_t size() const { return static_cast<std::size_t>(j_max - j_min + 1); }
};

Alphabet alphabet(const ExactElement& f, PartitionKind kind);

/// [c_f^-, c_f^+] = [min{0, 1 - |f^-|_1}, max{0, |f^+|_1 - 1}].
struct SymbolBounds {
  std::int64_t lo = 0, hi = 0;
};
SymbolBounds symbol_bounds(const ExactElement& f);

/// Solver for window points of X_f. Sites are visited in lexicographic order
/// (or reverse order when the pivot is the lex-minimal support element); a
/// site t is determined by the relation at t*pivot^-1 when that relation fits
/// in the window, and is a free parameter otherwise.
class SamplingPlan {
 public:
  SamplingPlan(const ExactElement& f, const Window& window);

  const Window& window() const { return window_; }
  const ExactElement& polynomial() const { return f_; }
  const GroupElement& pivot() const { return pivot_; }
  /// Site indices in processing order.
  const std::vector<std::size_t>& order() const { return order_; }
  bool is_free(std::size_t site) const { return free_slot_[site] >= 0; }
  /// Free-parameter slot of a free site, or -1.
  std::ptrdiff_t free_slot(std::size_t site) const { return free_slot_[site]; }
  std::size_t free_count() const { return free_sites_.size(); }
  const std::vector<std::size_t>& free_sites() const { return free_sites_; }
  /// x_site = sum w * x_dep (mod 1) for determined sites.
  const std::vector<std::pair<std::size_t, double>>& dependencies(std::size_t site) const { return deps_[site]; }

  /// Fills every site from the free parameters (one per free site, in slot order).
  std::vector<double> solve(const std::vector<double>& free_values) const;

 private:
  ExactElement f_;
  Window window_;
  GroupElement pivot_;
  std::vector<std::size_t> order_;
  std::vector<std::ptrdiff_t> free_slot_;
  std::vector<std::size_t> free_sites_;
  std::vector<std::vector<std::pair<std::size_t, double>>> deps_;
};

/// Deterministic uniform [0,1) stream (splitmix-seeded mt19937_64, 53-bit mantissa).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed);
  double next();
  std::uint64_t next_u64();

 private:
  std::uint64_t state_[4];
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Window representative x of a point of X_f with its integer image z = x f*.
struct CodedPoint {
  ExactElement f;
  Configuration x;  // torus values
  Configuration z;  // integer values on {d : d supp(f) in window}
};

CodedPoint sample_point(const ExactElement& f, const Window& window, std::uint64_t seed);
CodedPoint make_coded_point(const ExactElement& f, const Configuration& x);
/// max |(x f*)_d mod 1| distance to 0 over the relation window.
double relation_residual(const ExactElement& f, const Configuration& x);

Configuration encode_B(const CodedPoint& p);
Configuration encode_C(const CodedPoint& p);

struct DecodeResult {
  Configuration x;
  double error_bound = 0;  // |z|_inf * winv.l1_error
};
/// x = z * w (mod 1) where w = (f*)^-1 is given as a truncated series.
DecodeResult decode(const Configuration& z, const TruncatedSeries& winv, const ExactElement& f);

struct ItineraryReport {
  std::size_t pairs_requested = 0;
  std::size_t pairs_kept = 0;
  std::size_t pairs_rejected = 0;  // closer than eps_match
  std::size_t coincidences = 0;
  bool control_coincides = false;
  double min_distance_kept = 0;
  std::string pair_mode;
};
/// Pairs of sampled points at sup distance >= eps_match on the distance window
/// and the number whose itineraries on the horizon window coincide.
/// pair_mode "independent": two independent samples. "perturbed": the second
/// point perturbs the free data of the first by a log-uniform amplitude in
/// [1e-8, 1e-1], and distance is measured on the inner half of the window.
ItineraryReport itinerary_separation(const ExactElement& f, const Window& horizon, std::size_t pairs, double eps_match,
                                     PartitionKind kind, std::uint64_t seed, const std::string& pair_mode = "independent");

}  // namespace pa
