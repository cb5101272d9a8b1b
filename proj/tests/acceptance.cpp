// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coding.hpp"
#include "combinatorics.hpp"
#include "entropy.hpp"
#include "expr.hpp"
#include "harmonic.hpp"
#include "oracles.hpp"
#include "series.hpp"

using namespace pa;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

GroupElement random_element(const GroupDescriptor& g, std::mt19937_64& rng, std::int64_t span) {
  std::uniform_int_distribution<std::int64_t> d(-span, span);
  std::vector<std::int64_t> e(static_cast<std::size_t>(g.rank));
  for (auto& x : e) x = d(rng);
  return GroupElement(g, e);
}

ExactElement random_poly(const GroupDescriptor& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
  ExactElement f(g);
  const int n = std::uniform_int_distribution<int>(0, 5)(rng);
  for (int i = 0; i < n; ++i) {
    mpq_class c(num(rng), den(rng));
    c.canonicalize();
    f.add_term(random_element(g, rng, 2), c);
  }
  return f;
}

const std::vector<GroupDescriptor> kGroups = {GroupDescriptor::lattice(1), GroupDescriptor::lattice(2),
                                              GroupDescriptor::lattice(3), GroupDescriptor::lattice(4),
                                              GroupDescriptor::heisenberg()};

// 1 ----------------------------------------------------------------------------
Outcome algebra_suite() {
  std::mt19937_64 rng(1);
  std::size_t checks = 0, failures = 0;
  for (const auto& G : kGroups) {
    const ExactElement one = ExactElement::constant(G, 1);
    for (int t = 0; t < 1000; ++t) {
      ExactElement a = random_poly(G, rng), b = random_poly(G, rng), c = random_poly(G, rng);
      const bool ok[] = {
          (a * b) * c == a * (b * c),
          a * (b + c) == a * b + a * c,
          (a + b) * c == a * c + b * c,
          a * one == a && one * a == a,
          adjoint(a * b) == adjoint(b) * adjoint(a),
          (a * b).l1() <= a.l1() * b.l1() * (1 + 1e-12),
      };
      for (bool v : ok) {
        ++checks;
        failures += v ? 0 : 1;
      }
    }
  }
  return {failures == 0, std::to_string(checks) + " checks over 5 groups, " + std::to_string(failures) + " failures"};
}

// 2 ----------------------------------------------------------------------------
Outcome heisenberg_law() {
  const auto H = GroupDescriptor::heisenberg();
  using Mat = std::array<std::array<std::int64_t, 3>, 3>;
  auto as_matrix = [](const GroupElement& g) { return Mat{{{1, g[0], g[2]}, {0, 1, g[1]}, {0, 0, 1}}}; };
  auto matmul = [](const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  std::mt19937_64 rng(2);
  std::size_t failures = 0;
  for (int t = 0; t < 10000; ++t) {
    GroupElement a = random_element(H, rng, 1000), b = random_element(H, rng, 1000);
    if (as_matrix(mul(a, b)) != matmul(as_matrix(a), as_matrix(b))) ++failures;
  }
  const GroupElement u1 = GroupElement::generator(H, 1), u2 = GroupElement::generator(H, 2), u3 = GroupElement::generator(H, 3);
  const bool commutator = mul(mul(u2, u1), mul(inv(u2), inv(u1))) == u3;
  bool central = true;
  for (int t = 0; t < 1000; ++t) {
    GroupElement g = random_element(H, rng, 1000);
    central = central && mul(u3, g) == mul(g, u3);
  }
  return {failures == 0 && commutator && central,
          "10000 products vs matrices: " + std::to_string(failures) + " mismatches; u3 central: " + (central ? "yes" : "no") +
              "; u2 u1 u2^-1 u1^-1 = u3: " + (commutator ? "yes" : "no")};
}

// 3 ----------------------------------------------------------------------------
Outcome decode_round_trip() {
  const auto Z = GroupDescriptor::lattice(1);
  ExactElement f = parse_expression("3 - u - u^-1", Z);
  TruncatedSeries w = neumann_inverse(f, 1e-12);
  double worst = 0;
  std::size_t sites = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CodedPoint p = sample_point(f, box(Z, 100), seed);
    DecodeResult d = decode(encode_B(p), w, f);
    sites = d.x.window.size();
    for (std::size_t i = 0; i < d.x.window.size(); ++i)
      worst = std::max(worst, torus_distance(d.x.values[i], p.x.at(d.x.window[i])));
  }
  return {worst <= 1e-6, "sup error " + fmt(worst) + " over 100 seeds, " + std::to_string(sites) +
                             " deep sites of a 201-site window (bound 1e-6)"};
}

// 4 ----------------------------------------------------------------------------
Outcome entropy_vs_mahler() {
  const auto Z = GroupDescriptor::lattice(1);
  const auto Z2 = GroupDescriptor::lattice(2);
  std::ostringstream os;
  bool pass = true;

  EntropyOptions o;
  o.samples = 2000;
  o.seed = 1;
  o.n = 16;
  EntropyEstimate a = entropy_estimate(parse_expression("u - 2", Z), o);
  const double e1 = std::fabs(a.estimate - std::log(2.0));
  pass = pass && e1 <= 0.05;
  os << "u-2: " << fmt(a.estimate) << " vs log 2 (|d|=" << fmt(e1, 2) << "); ";

  ExactElement salem = parse_expression("u^4 - u^3 - u^2 - u + 1", Z);
  const double salem_oracle = std::log(largest_root_modulus(salem));
  o.n = 40;
  EntropyEstimate b = entropy_estimate(salem, o);
  const double e2 = std::fabs(b.estimate - salem_oracle);
  pass = pass && e2 <= 0.05 && std::fabs(salem_oracle - 0.5435) < 1e-4;
  os << "salem: " << fmt(b.estimate) << " vs " << fmt(salem_oracle, 6) << " (|d|=" << fmt(e2, 2) << "); ";

  ExactElement corner = parse_expression("1 - u1 - u2", Z2);
  const double l_value = dirichlet_L_chi3(100000).entropy;
  const double quad = mahler_measure(corner);
  const double clausen = oracle::mahler_1_plus_x_plus_y();
  const bool oracle_ok = std::fabs(l_value - quad) <= 1e-3 && std::fabs(l_value - clausen) <= 1e-9;
  o.n = 20;
  o.samples = 20000;
  o.seed = 7;
  EntropyEstimate c = entropy_estimate(corner, o);
  const double e3 = std::fabs(c.estimate - l_value);
  pass = pass && oracle_ok && e3 <= 0.10;
  os << "1-u1-u2: " << fmt(c.estimate) << " vs " << fmt(l_value, 6) << " (|d|=" << fmt(e3, 2) << "; quadrature "
     << fmt(quad, 6) << ", Clausen " << fmt(clausen, 8) << ")";
  return {pass, os.str()};
}

// 5 ----------------------------------------------------------------------------
Outcome alphabets() {
  const auto Z = GroupDescriptor::lattice(1);
  const auto Z2 = GroupDescriptor::lattice(2);
  ExactElement torus4 = parse_expression("u^4 - u^3 - u^2 - u + 1", Z);
  Alphabet b4 = alphabet(torus4, PartitionKind::B), c4 = alphabet(torus4, PartitionKind::C);
  Alphabet b2 = alphabet(parse_expression("1 - u1 - u2", Z2), PartitionKind::B);
  const bool ok = b4.j_min == -2 && b4.j_max == 1 && c4.size() == 5 && b2.j_min == -1 && b2.j_max == 0;
  return {ok, "u^4-u^3-u^2-u+1: B[" + std::to_string(b4.j_min) + ".." + std::to_string(b4.j_max) + "], C has " +
                  std::to_string(c4.size()) + " cells; 1-u1-u2: B[" + std::to_string(b2.j_min) + ".." +
                  std::to_string(b2.j_max) + "]"};
}

// 6 ----------------------------------------------------------------------------
Outcome itinerary() {
  const auto Z = GroupDescriptor::lattice(1);
  const auto Z2 = GroupDescriptor::lattice(2);
  ItineraryReport a = itinerary_separation(parse_expression("u^4 - u^3 - u^2 - u + 1", Z), box(Z, 20), 1000, 0.05,
                                           PartitionKind::C, 6);
  ItineraryReport b = itinerary_separation(parse_expression("1 - u1 - u2", Z2), box(Z2, 8), 1000, 0.05, PartitionKind::B, 6);
  const bool ok = a.coincidences == 0 && b.coincidences == 0 && a.pairs_kept == 1000 && b.pairs_kept == 1000 &&
                  a.control_coincides && b.control_coincides;
  return {ok, "C on 41 sites: " + std::to_string(a.coincidences) + "/" + std::to_string(a.pairs_kept) +
                  " coinciding; B on 17x17: " + std::to_string(b.coincidences) + "/" + std::to_string(b.pairs_kept) +
                  "; identical-pair control detected: " + (a.control_coincides && b.control_coincides ? "yes" : "no")};
}

// 7 ----------------------------------------------------------------------------
Outcome homoclinic() {
  HomoclinicReport rep = heisenberg_homoclinic({0, 8, 16, 32, 64}, {24, 24, 576});
  bool decreasing = true;
  std::ostringstream os;
  os << "c = " << rep.c << " from " << rep.words << " words (" << rep.words_hitting << " hit u3); residuals";
  for (std::size_t i = 0; i < rep.steps.size(); ++i) {
    const auto& s = rep.steps[i];
    os << " J=" << s.J << ":" << fmt(std::max(s.residual_left, s.residual_right), 3);
    if (i > 0) {
      decreasing = decreasing && s.residual_left < rep.steps[i - 1].residual_left &&
                   s.residual_right < rep.steps[i - 1].residual_right;
    }
  }
  const auto& last = rep.steps.back();
  const bool ok = rep.c == 1.0 / 64 && rep.words == 256 && decreasing && last.J == 64 &&
                  std::max(last.residual_left, last.residual_right) <= 0.05;
  return {ok, os.str()};
}

// 8 ----------------------------------------------------------------------------
Outcome multiplier() {
  const auto H = GroupDescriptor::heisenberg();
  const double c = 1.0 / 64;
  RealElement q = RealElement::monomial(GroupElement::generator(H, 3), c);
  RealElement r = to_real(power(simple_random_walk(H), 4)) - q;
  MultiplierReport m = cubic_multiplier(q, r, c, 12, 1e-12, {24, 24, 576});
  MultiplierReport ctl = cubic_multiplier(q, RealElement(H), c, 12, 1e-12, {24, 24, 576});
  const double res = std::max(m.residual_left, m.residual_right);
  const double res_ctl = std::max(ctl.residual_left, ctl.residual_right);
  const bool ok = res <= 2 * m.l1_error && res_ctl <= 1e-9;
  return {ok, "K=12: residual " + fmt(res) + " <= 2 x l1_error " + fmt(m.l1_error) +
                  (m.k_tail_heuristic ? " (k-tail part heuristic)" : "") + "; r=0 control residual " + fmt(res_ctl)};
}

// 9 ----------------------------------------------------------------------------
Outcome decay() {
  std::ostringstream os;
  bool ok = true;
  for (double c : {0.25, 0.5}) {
    SeriesDiagnostics d = decay_slope(c, 100, 1000, 64);
    ok = ok && d.slope >= -1.7 && d.slope <= -1.3;
    os << "slope(c=" << c << ") = " << fmt(d.slope) << "; ";
  }
  double worst = 0;
  std::size_t grid = 0;
  for (double c : {0.1, 0.25, 0.5, 0.75}) {
    const long kc = gk_threshold(c);
    for (long k : {kc, kc + 7, 100L, 250L, 500L, 1000L}) {
      if (k < kc) continue;
      const double direct = phi_k_abs_direct(c, k).value;
      const double closed = phi_k_abs_closed(c, k).value;
      worst = std::max(worst, std::fabs(closed - direct) / direct);
      ++grid;
    }
  }
  ok = ok && worst <= 1e-9;
  os << "closed form vs direct on " << grid << " (c,k) points: max rel " << fmt(worst, 3);
  return {ok, os.str()};
}

// 10 ---------------------------------------------------------------------------
Outcome roots() {
  std::mt19937_64 rng(10);
  std::size_t identity_failures = 0;
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    mpq_class c(static_cast<long>(1 + rng() % 999), 1000);
    c.canonicalize();
    const long k = static_cast<long>(1 + rng() % 2000);
    const mpq_class eta = rng() % 2 ? c : mpq_class(4 * c);
    const int sign = rng() % 2 ? 1 : -1;
    QuadraticSurd s = gk_at_reference_exact(c, k, eta, sign);
    const bool exact = s.p == (c * c + c) * k && s.q == sign * ((3 * c - eta) * k + mpq_class(2, 3) * (c - 1) * (c - 1));
    const double gap = gk_closed_form_gap(c.get_d(), k, eta.get_d(), sign);
    worst = std::max(worst, gap);
    if (!exact || gap > 1e-9) ++identity_failures;
  }
  std::size_t chains = 0, violations = 0;
  std::ostringstream kcs;
  for (double c : {0.1, 0.25, 0.5, 0.75}) {
    const long kc = gk_threshold(c);
    kcs << " k_c(" << c << ")=" << kc;
    for (long k = kc; k <= kc + 200; ++k) {
      ++chains;
      try {
        GkRootReport r = gk_roots(c, k);
        if (!r.has_roots || !r.interlaced) ++violations;
      } catch (const LemmaViolation&) {
        ++violations;
      }
    }
  }
  return {identity_failures == 0 && violations == 0,
          "identity: " + std::to_string(identity_failures) + "/1000 failures (max rel " + fmt(worst, 3) +
              "); interlacing: " + std::to_string(violations) + "/" + std::to_string(chains) + " violations;" + kcs.str()};
}

// 11 ---------------------------------------------------------------------------
Outcome combinatorics() {
  std::ostringstream os;
  std::size_t ss_found = 0, ss_trials = 0;
  for (int t = 0; t < 500; ++t) {
    std::mt19937_64 rng(derive_seed(11, static_cast<std::uint64_t>(t)));
    const int n = 4 + static_cast<int>(rng() % 9);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(n, 5)));
    const std::size_t need = binomial_prefix(n, k).get_ui();
    const std::size_t size = std::min<std::size_t>(need + 1 + rng() % 4, std::size_t{1} << n);
    SetFamily fam = random_family(n, size, rng);
    ++ss_trials;
    try {
      std::uint32_t J = sauer_shelah_witness(fam, k);
      if (std::popcount(J) == k && scatters(fam, J)) ++ss_found;
    } catch (const LemmaViolation&) {
    }
  }
  os << "Sauer-Shelah " << ss_found << "/" << ss_trials << "; ";

  bool stirling = true;
  for (double beta : {0.01, 0.05, 0.1, 0.2}) {
    StirlingReport r = stirling_bound_check(beta, 1, 2000);
    stirling = stirling && r.holds && r.failures_above_m0 == 0;
    os << "m0(" << beta << ")=" << r.m0 << " ";
  }
  os << (stirling ? "Stirling holds; " : "Stirling FAILS; ");

  std::size_t sp_found = 0, sp_trials = 0;
  const std::pair<int, int> shapes[] = {{1, 2}, {2, 3}, {3, 4}, {3, 8}};
  for (std::size_t s = 0; s < 4; ++s) {
    for (int t = 0; t < 1000; ++t) {
      std::mt19937_64 rng(derive_seed(1100 + s, static_cast<std::uint64_t>(t)));
      AffineSystem sys = random_affine_system(shapes[s].first, shapes[s].second, rng);
      ++sp_trials;
      try {
        empty_sign_pattern(sys);
        ++sp_found;
      } catch (const LemmaViolation&) {
      }
    }
  }
  os << "sign patterns " << sp_found << "/" << sp_trials << "; ";

  const auto Z2 = GroupDescriptor::lattice(2);
  std::size_t vq_ok = 0;
  std::mt19937_64 rng(1111);
  const char* polys[] = {"1 - u1 - u2", "2 - u1 + 3u2^-1", "1 + u1*u2 - u1^-1", "3 - u1^2 - u2"};
  for (int t = 0; t < 100; ++t) {
    const std::int64_t radii[2] = {1 + static_cast<std::int64_t>(rng() % 5), 1 + static_cast<std::int64_t>(rng() % 5)};
    try {
      VqReport r = vq_dimension(parse_expression(polys[t % 4], Z2), box_radii(Z2, radii));
      if (r.dim <= r.bound) ++vq_ok;
    } catch (const LemmaViolation&) {
    }
  }
  os << "V_Q bound " << vq_ok << "/100";
  return {ss_found == ss_trials && stirling && sp_found == sp_trials && vq_ok == 100, os.str()};
}

// 12 ---------------------------------------------------------------------------
Outcome green() {
  std::ostringstream os;
  const double closed = oracle::z3_green_closed_form();
  const double quad = oracle::z3_green_quadrature(4000);
  const auto Z3 = GroupDescriptor::lattice(3);
  GreenResult g = green_function(to_real(simple_random_walk(Z3)), {64, 64, 64}, "relaxation", 1e-10);
  const double rel = std::fabs(g.omega_identity - closed) / closed;
  const bool z3_ok = rel <= 0.01 && std::fabs(quad - closed) / closed <= 2e-3;
  os << "Z^3 omega(1) = " << fmt(g.omega_identity, 6) << " vs " << fmt(closed, 7) << " (rel " << fmt(rel, 2)
     << ", quadrature " << fmt(quad, 6) << "); ";

  const auto H = GroupDescriptor::heisenberg();
  const std::int64_t R = 24;
  GreenResult gh = green_function(to_real(simple_random_walk(H)), {R, R, R * R}, "relaxation", 1e-10);
  BallProfile prof = heisenberg_green_profile(gh);
  // damped_increment_ratio[r-1] = inc(r+1)/inc(r); the last 4 radii feel the zero boundary.
  double worst_ratio = 0;
  for (std::int64_t r = 9; r <= R - 4; ++r) worst_ratio = std::max(worst_ratio, prof.damped_increment_ratio[static_cast<std::size_t>(r - 1)]);
  const double growth = prof.omega_mass[R / 2] / prof.omega_mass[R / 4];
  const bool h_ok = worst_ratio < 1 && growth >= 2;
  os << "H: max damped increment ratio on r=9.." << R - 4 << " is " << fmt(worst_ratio, 3) << ", raw mass(" << R / 2
     << ")/mass(" << R / 4 << ") = " << fmt(growth, 3);
  return {z3_ok && h_ok, os.str()};
}

// 13 ---------------------------------------------------------------------------
std::string run_capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return "<popen failed>";
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  if (status != 0) out += "<exit " + std::to_string(status) + ">";
  return out;
}

Outcome determinism() {
  const std::string cli = PA_CLI_PATH;
  const char* runs[] = {
      "entropy --group z2 --poly '1 - u1 - u2' --n 12 --samples 400 --seed 7",
      "separate --poly 'u^4 - u^3 - u^2 - u + 1' --radius 20 --pairs 200 --seed 3 --mode perturbed",
      "sample --group h --poly '4 - u1 - u1^-1 - u2 - u2^-1' --radius 2 --seed 9",
      "verify --lemma sign-pattern --seeds 50 --seed 4",
  };
  std::size_t same = 0, total = 0;
  for (const char* args : runs) {
    const std::string a = run_capture(cli + " " + args), b = run_capture(cli + " " + args);
    ++total;
    if (a == b && a.find("<exit") == std::string::npos && a.size() > 2) ++same;
  }
  return {same == total, std::to_string(same) + "/" + std::to_string(total) + " CLI runs byte-identical on repeat"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "algebra suite", 10, algebra_suite},
      {2, "Heisenberg law vs matrices", 1, heisenberg_law},
      {3, "expansive decode round trip", 30, decode_round_trip},
      {4, "entropy vs Mahler measure", 300, entropy_vs_mahler},
      {5, "partition alphabets", 1, alphabets},
      {6, "itinerary separation", 120, itinerary},
      {7, "Heisenberg homoclinic", 600, homoclinic},
      {8, "cubic multiplier identity", 600, multiplier},
      {9, "decay law", 60, decay},
      {10, "root interlacing", 60, roots},
      {11, "combinatorics suite", 120, combinatorics},
      {12, "Green's functions", 300, green},
      {13, "CLI determinism", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %2d %-30s %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", TOO SLOW");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
