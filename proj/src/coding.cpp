#include "coding.hpp"

#include <algorithm>
#include <cmath>

namespace pa {

namespace {

std::int64_t integer_norm(const ExactElement& part) {
  mpq_class s = 0;
  for (const auto& [g, c] : part.terms()) s += abs(c);
  if (s.get_den() != 1) throw InvalidArgument("polynomial must have integer coefficients");
  return s.get_num().get_si();
}

void require_integer_polynomial(const ExactElement& f) {
  if (f.is_zero()) throw InvalidArgument("polynomial is zero");
  if (!has_integer_coefficients(f)) throw InvalidArgument("polynomial must have integer coefficients");
}

constexpr double kSnapTolerance = 1e-9;

}  // namespace

SymbolBounds symbol_bounds(const ExactElement& f) {
  require_integer_polynomial(f);
  auto [pos, neg] = split_pos_neg(f);
  return {std::min<std::int64_t>(0, 1 - integer_norm(neg)), std::max<std::int64_t>(0, integer_norm(pos) - 1)};
}

Alphabet alphabet(const ExactElement& f, PartitionKind kind) {
  require_integer_polynomial(f);
  if (kind == PartitionKind::C) return {0, integer_norm(f) - 1, "C"};
  auto [pos, neg] = split_pos_neg(f);
  const std::int64_t np = integer_norm(pos), nm = integer_norm(neg);
  if (np > 0 && nm > 0) return {1 - nm, np - 1, "B_full"};
  if (nm == 0) return {0, np - 1, "B_plus_only"};
  return {1 - nm, 0, "B_minus_only"};
}

// ---------------------------------------------------------------------------

SamplingPlan::SamplingPlan(const ExactElement& f, const Window& window) : f_(f), window_(window) {
  require_integer_polynomial(f);
  if (f.group() != window.group()) throw InvalidArgument("polynomial and window live on different groups");
  const auto& terms = f.terms();
  bool forward = true;
  auto unit = [](const mpq_class& c) { return abs(c) == 1; };
  if (unit(terms.rbegin()->second)) {
    pivot_ = terms.rbegin()->first;
  } else if (unit(terms.begin()->second)) {
    pivot_ = terms.begin()->first;
    forward = false;
  } else {
    throw UnsupportedStencil("no extreme coefficient of " + std::to_string(terms.size()) +
                             "-term polynomial is a unit; sampling would need rejection over rational divisors");
  }
  const double pivot_coef = f.coefficient(pivot_).get_d();
  const std::size_t n = window.size();
  order_.resize(n);
  for (std::size_t i = 0; i < n; ++i) order_[i] = forward ? i : n - 1 - i;
  free_slot_.assign(n, -1);
  deps_.assign(n, {});
  const GroupElement pivot_inv = inv(pivot_);
  for (std::size_t site : order_) {
    const GroupElement delta = mul(window[site], pivot_inv);
    std::vector<std::pair<std::size_t, double>> deps;
    bool fits = true;
    for (const auto& [s, c] : terms) {
      if (s == pivot_) continue;
      auto idx = window.index_of(mul(delta, s));
      if (idx < 0) {
        fits = false;
        break;
      }
      deps.emplace_back(static_cast<std::size_t>(idx), -c.get_d() / pivot_coef);
    }
    if (fits) {
      deps_[site] = std::move(deps);
    } else {
      free_slot_[site] = static_cast<std::ptrdiff_t>(free_sites_.size());
      free_sites_.push_back(site);
    }
  }
}

std::vector<double> SamplingPlan::solve(const std::vector<double>& free_values) const {
  if (free_values.size() != free_sites_.size()) throw InvalidArgument("wrong number of free parameters");
  std::vector<double> x(window_.size(), 0.0);
  for (std::size_t site : order_) {
    if (free_slot_[site] >= 0) {
      x[site] = mod1(free_values[static_cast<std::size_t>(free_slot_[site])]);
      continue;
    }
    double s = 0;
    for (const auto& [dep, w] : deps_[site]) s += w * x[dep];
    x[site] = mod1(s);
  }
  return x;
}

// ---------------------------------------------------------------------------

namespace {
std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

UniformStream::UniformStream(std::uint64_t seed) {
  for (auto& s : state_) s = splitmix64(seed);
}

std::uint64_t UniformStream::next_u64() {
  // xoshiro256**
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double UniformStream::next() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

// ---------------------------------------------------------------------------

namespace {

Configuration integer_image(const ExactElement& f, const Configuration& x) {
  Configuration z = apply_rho(to_real(f), x, false);
  for (double& v : z.values) {
    const double r = std::nearbyint(v);
    if (std::fabs(v - r) > kSnapTolerance) {
      throw InvalidPoint("relation value " + std::to_string(v) + " is not within 1e-9 of an integer");
    }
    v = r == 0.0 ? 0.0 : r;
  }
  z.kind = ValueKind::integer;
  return z;
}

void require_torus_values(const Configuration& x) {
  for (double v : x.values) {
    if (!(v >= 0.0 && v < 1.0)) throw InvalidPoint("torus value " + std::to_string(v) + " outside [0,1)");
  }
}

}  // namespace

CodedPoint make_coded_point(const ExactElement& f, const Configuration& x) {
  require_integer_polynomial(f);
  require_torus_values(x);
  CodedPoint p{f, x, integer_image(f, x)};
  p.x.kind = ValueKind::torus;
  return p;
}

CodedPoint sample_point(const ExactElement& f, const Window& window, std::uint64_t seed) {
  SamplingPlan plan(f, window);
  UniformStream rng(seed);
  std::vector<double> free(plan.free_count());
  for (double& v : free) v = rng.next();
  Configuration x{window, plan.solve(free), ValueKind::torus};
  return make_coded_point(f, x);
}

double relation_residual(const ExactElement& f, const Configuration& x) {
  Configuration r = apply_rho(to_real(f), x, false);
  double worst = 0;
  for (double v : r.values) worst = std::max(worst, std::fabs(v - std::nearbyint(v)));
  return worst;
}

Configuration encode_B(const CodedPoint& p) {
  require_torus_values(p.x);
  Configuration z = integer_image(p.f, p.x);
  const SymbolBounds b = symbol_bounds(p.f);
  for (double v : z.values) {
    if (v < static_cast<double>(b.lo) || v > static_cast<double>(b.hi)) {
      throw LemmaViolation("symbol " + std::to_string(static_cast<long long>(v)) + " outside [" + std::to_string(b.lo) +
                           ", " + std::to_string(b.hi) + "]");
    }
  }
  return z;
}

Configuration encode_C(const CodedPoint& p) {
  require_integer_polynomial(p.f);
  const std::int64_t cells = integer_norm(p.f);
  Configuration out{p.x.window, {}, ValueKind::integer};
  out.values.reserve(p.x.values.size());
  for (double v : p.x.values) {
    double j = std::floor(mod1(v) * static_cast<double>(cells));
    out.values.push_back(std::clamp(j, 0.0, static_cast<double>(cells - 1)));
  }
  return out;
}

DecodeResult decode(const Configuration& z, const TruncatedSeries& winv, const ExactElement& f) {
  require_integer_polynomial(f);
  if (winv.value.is_zero()) throw InvalidArgument("decode: inverse series is missing");
  if (winv.value.group() != z.window.group()) throw InvalidArgument("decode: inverse series on a different group");
  if (f.group() != z.window.group()) throw InvalidArgument("decode: polynomial on a different group");
  const double zmax = z.sup_norm();
  if (zmax > f.l1() / 2 + kSnapTolerance) {
    throw InvalidArgument("decode: |z|_inf = " + std::to_string(zmax) + " exceeds |f|_1/2");
  }
  // winv approximates (f*)^-1, and x = z (f*)^-1 = rho-bar applied with winv*.
  DecodeResult r;
  r.x = apply_rho(adjoint(winv.value), z, true);
  r.error_bound = zmax * winv.l1_error;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

double sup_torus_distance(const std::vector<double>& a, const std::vector<double>& b, const std::vector<std::size_t>& sites) {
  double d = 0;
  for (std::size_t i : sites) d = std::max(d, torus_distance(a[i], b[i]));
  return d;
}

std::vector<double> symbols(const ExactElement& f, const Configuration& x, PartitionKind kind) {
  CodedPoint p{f, x, {}};
  return kind == PartitionKind::B ? encode_B(p).values : encode_C(p).values;
}

}  // namespace

ItineraryReport itinerary_separation(const ExactElement& f, const Window& horizon, std::size_t pairs, double eps_match,
                                     PartitionKind kind, std::uint64_t seed, const std::string& pair_mode) {
  if (pair_mode != "independent" && pair_mode != "perturbed") {
    throw InvalidArgument("pair mode must be 'independent' or 'perturbed'");
  }
  SamplingPlan plan(f, horizon);
  ItineraryReport rep;
  rep.pairs_requested = pairs;
  rep.pair_mode = pair_mode;
  rep.min_distance_kept = 1.0;

  std::vector<std::size_t> dist_sites;
  if (pair_mode == "perturbed") {
    const auto& radii = horizon.radii();
    for (std::size_t i = 0; i < horizon.size(); ++i) {
      bool inner = true;
      for (int c = 0; c < horizon.group().rank && inner; ++c) {
        std::int64_t lim = radii[static_cast<std::size_t>(c)] / 2;
        inner = std::abs(horizon[i][c]) <= lim;
      }
      if (inner) dist_sites.push_back(i);
    }
  } else {
    dist_sites.resize(horizon.size());
    for (std::size_t i = 0; i < horizon.size(); ++i) dist_sites[i] = i;
  }

  auto draw_free = [&](UniformStream& rng) {
    std::vector<double> v(plan.free_count());
    for (double& t : v) t = rng.next();
    return v;
  };

  {
    UniformStream rng(derive_seed(seed, 0));
    Configuration x{horizon, plan.solve(draw_free(rng)), ValueKind::torus};
    rep.control_coincides = symbols(f, x, kind) == symbols(f, x, kind);
  }

  for (std::size_t t = 0; t < pairs; ++t) {
    UniformStream rng(derive_seed(seed, t + 1));
    std::vector<double> a = draw_free(rng);
    std::vector<double> b;
    if (pair_mode == "independent") {
      b = draw_free(rng);
    } else {
      const double amp = std::pow(10.0, -8.0 + 7.0 * rng.next());
      b = a;
      for (double& v : b) v = mod1(v + amp * (2.0 * rng.next() - 1.0));
    }
    Configuration x{horizon, plan.solve(a), ValueKind::torus};
    Configuration y{horizon, plan.solve(b), ValueKind::torus};
    const double d = sup_torus_distance(x.values, y.values, dist_sites);
    if (d < eps_match) {
      ++rep.pairs_rejected;
      continue;
    }
    ++rep.pairs_kept;
    rep.min_distance_kept = std::min(rep.min_distance_kept, d);
    if (symbols(f, x, kind) == symbols(f, y, kind)) ++rep.coincidences;
  }
  if (rep.pairs_kept == 0) rep.min_distance_kept = 0;
  return rep;
}

}  // namespace pa
