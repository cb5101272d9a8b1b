#include "harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <unordered_set>

#include "series.hpp"

namespace pa {

// ---------------------------------------------------------------------------
// Well-balanced check

WellBalancedCheck check_well_balanced(const ExactElement& f, std::int64_t R) {
  if (R < 1) throw InvalidArgument("generation radius must be >= 1");
  WellBalancedCheck out;
  out.radius = R;
  const auto& group = f.group();
  mpq_class sum = 0;
  bool nonpos = true;
  for (const auto& [g, c] : f.terms()) {
    sum += c;
    if (!g.is_identity() && sgn(c) > 0) nonpos = false;
  }
  out.sums_to_zero = !f.is_zero() && sgn(sum) == 0;
  out.off_identity_nonpositive = nonpos;
  out.symmetric = adjoint(f) == f;

  std::vector<GroupElement> gens;
  for (const auto& g : f.support()) {
    if (g.is_identity()) continue;
    gens.push_back(g);
    gens.push_back(inv(g));
  }
  if (!gens.empty()) {
    std::vector<std::int64_t> outer(static_cast<std::size_t>(group.rank), 2 * R);
    if (group.is_heisenberg()) outer[2] = 4 * R * R;
    auto inside = [&](const GroupElement& g) {
      for (int i = 0; i < group.rank; ++i) {
        if (std::abs(g[i]) > outer[static_cast<std::size_t>(i)]) return false;
      }
      return true;
    };
    std::unordered_set<GroupElement, GroupElementHash> seen{GroupElement::identity(group)};
    std::deque<GroupElement> queue{GroupElement::identity(group)};
    while (!queue.empty()) {
      GroupElement g = queue.front();
      queue.pop_front();
      for (const auto& s : gens) {
        GroupElement h = mul(g, s);
        if (inside(h) && seen.insert(h).second) queue.push_back(h);
      }
    }
    const Window target = box(group, R);
    out.support_generates =
        std::all_of(target.elements().begin(), target.elements().end(), [&](const GroupElement& g) { return seen.count(g); });
  }
  out.overall = out.sums_to_zero && out.off_identity_nonpositive && out.symmetric && out.support_generates;
  if (group.is_lattice() && group.rank <= 2) {
    out.note = group.name() + " is recurrent; the harmonic construction needs a transient group";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Neumann inverse

namespace {

std::string heisenberg_expansive_note(const ExactElement& f) {
  const auto& group = f.group();
  if (!group.is_heisenberg()) return {};
  const GroupElement u1 = GroupElement::generator(group, 1), u2 = GroupElement::generator(group, 2),
                     u3 = GroupElement::generator(group, 3), e = GroupElement::identity(group);
  for (const auto& g : f.support()) {
    if (!(g == e || g == u1 || g == u2 || g == u3)) return {};
  }
  const mpq_class a1 = f.coefficient(u1), a2 = f.coefficient(u2), a3 = f.coefficient(u3);
  const bool criterion = sgn(a1) != 0 && sgn(a2) != 0 && sgn(a3) > 0;
  return std::string("; expansivity criterion a1*a2 != 0, a3 > 0 ") + (criterion ? "holds" : "fails") +
         ": asserted, not numerically certified";
}

}  // namespace

TruncatedSeries neumann_inverse(const ExactElement& f, double tol, std::size_t max_terms) {
  if (f.is_zero()) throw InvalidArgument("cannot invert the zero element");
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  if (max_terms == 0) throw InvalidArgument("max_terms must be positive");
  const auto& group = f.group();
  GroupElement s = GroupElement::identity(group);
  mpq_class c0 = f.coefficient(s);
  for (const auto& [g, c] : f.terms()) {
    if (abs(c) > abs(c0)) {
      c0 = c;
      s = g;
    }
  }
  // f = c0 s (1 - g) with g = 1 - s^-1 f / c0.
  ExactElement shifted = ExactElement::monomial(inv(s), mpq_class(1) / c0) * f;
  ExactElement g = ExactElement::constant(group, 1) - shifted;
  const double ng = g.l1();
  if (ng >= 1.0) {
    throw NotDiagonallyDominant("f = c0 s (1 - g) has |g|_1 = " + std::to_string(ng) + " >= 1" +
                                heisenberg_expansive_note(f));
  }
  const RealElement gstar = to_real(adjoint(g));
  const double prune_tol = tol * 1e-3;
  RealElement sum(group), term = RealElement::constant(group, 1.0);
  double dropped = 0, tail = 0;
  std::size_t terms = 0;
  for (std::size_t j = 0;; ++j) {
    sum += term;
    terms = j + 1;
    tail = std::pow(ng, static_cast<double>(j + 1)) / (1.0 - ng);
    if (tail <= tol || terms == max_terms || term.is_zero()) break;
    TruncatedSeries next = prune(term * gstar, prune_tol);
    dropped += next.l1_error;
    term = std::move(next.value);
  }
  if (term.is_zero()) tail = 0;
  const double inv_c0 = 1.0 / std::fabs(c0.get_d());
  TruncatedSeries out;
  out.value = RealElement::monomial(s, 1.0 / c0.get_d()) * sum;
  out.l1_error = inv_c0 * (tail + dropped / (1.0 - ng));
  out.provenance = "neumann series of (f*)^-1, " + std::to_string(terms) + " terms, |g|_1 = " + std::to_string(ng);
  return out;
}

double inverse_residual(const RealElement& w, const ExactElement& f) {
  RealElement r = w * to_real(adjoint(f));
  r -= RealElement::constant(f.group(), 1.0);
  return r.l1();
}

// ---------------------------------------------------------------------------
// Unitary variety

VarietyMin unitary_variety_min(const ExactElement& f, std::size_t grid_per_angle) {
  const auto& group = f.group();
  if (!group.is_lattice() || group.rank > 3) throw InvalidArgument("unitary variety scan needs Z^d with d <= 3");
  if (f.is_zero()) return {0.0, std::vector<double>(static_cast<std::size_t>(group.rank), 0.0), 0};
  const int d = group.rank;
  const std::size_t N = grid_per_angle ? grid_per_angle : (d <= 2 ? 1024 : 128);
  struct Term {
    std::array<std::int64_t, 3> e{};
    double c;
  };
  std::vector<Term> terms;
  for (const auto& [g, c] : f.terms()) {
    Term t{{}, c.get_d()};
    for (int i = 0; i < d; ++i) t.e[static_cast<std::size_t>(i)] = g[i];
    terms.push_back(t);
  }
  auto modulus = [&](const std::array<double, 3>& th) {
    std::complex<double> z = 0;
    for (const auto& t : terms) {
      double a = 0;
      for (int i = 0; i < d; ++i) a += static_cast<double>(t.e[static_cast<std::size_t>(i)]) * th[static_cast<std::size_t>(i)];
      z += t.c * std::polar(1.0, a);
    }
    return std::abs(z);
  };
  // Grid scan with integer phase arithmetic and a cosine table.
  std::vector<std::complex<double>> table(N);
  const double step = 2 * std::numbers::pi / static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) table[i] = std::polar(1.0, step * static_cast<double>(i));
  const auto Ni = static_cast<std::int64_t>(N);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= N;
  double best = 1e300;
  std::array<std::int64_t, 3> best_idx{};
  std::array<std::int64_t, 3> idx{};
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int i = d - 1; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rem % N);
      rem /= N;
    }
    std::complex<double> z = 0;
    for (const auto& t : terms) {
      std::int64_t ph = 0;
      for (int i = 0; i < d; ++i) ph += t.e[static_cast<std::size_t>(i)] * idx[static_cast<std::size_t>(i)];
      ph %= Ni;
      if (ph < 0) ph += Ni;
      z += t.c * table[static_cast<std::size_t>(ph)];
    }
    const double m = std::abs(z);
    if (m < best) {
      best = m;
      best_idx = idx;
    }
  }
  std::array<double, 3> th{};
  for (int i = 0; i < d; ++i) th[static_cast<std::size_t>(i)] = step * static_cast<double>(best_idx[static_cast<std::size_t>(i)]);
  // Compass search from the best grid point.
  double h = step;
  while (h > 1e-14) {
    bool improved = false;
    for (int i = 0; i < d && !improved; ++i) {
      for (double sgn_ : {1.0, -1.0}) {
        auto trial = th;
        trial[static_cast<std::size_t>(i)] += sgn_ * h;
        const double m = modulus(trial);
        if (m < best) {
          best = m;
          th = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) h /= 2;
  }
  VarietyMin out;
  out.min_modulus = best;
  out.grid_points = total;
  for (int i = 0; i < d; ++i) {
    double a = std::fmod(th[static_cast<std::size_t>(i)], 2 * std::numbers::pi);
    if (a < 0) a += 2 * std::numbers::pi;
    out.argmin.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Green's functions

ExactElement simple_random_walk(const GroupDescriptor& group) {
  ExactElement p(group);
  const int gens = group.is_heisenberg() ? 2 : group.rank;
  const mpq_class w(1, 2 * gens);
  for (int i = 1; i <= gens; ++i) {
    GroupElement u = GroupElement::generator(group, i);
    p.add_term(u, w);
    p.add_term(inv(u), w);
  }
  return p;
}

void require_transient_walk(const RealElement& p) {
  const auto& group = p.group();
  if (group.is_lattice() && group.rank <= 2) {
    throw InvalidArgument("random walks on " + group.name() +
                          " are recurrent; the Green's function sum_j p^j needs a transient group");
  }
  double sum = 0;
  for (const auto& [g, c] : p.terms()) {
    if (c < 0) throw InvalidArgument("p must have nonnegative coefficients");
    sum += c;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw InvalidArgument("p must be a probability (coefficients sum to 1)");
  for (const auto& [g, c] : p.terms()) {
    if (std::fabs(p.coefficient(inv(g)) - c) > 1e-15) throw InvalidArgument("p must be symmetric (p = p*)");
  }
}

namespace {

// y = x - x p on the box, zero outside.
void apply_laplacian(const RealElement& p, const DenseField& x, DenseField& y) {
  y.data() = x.data();
  y.accumulate_product(p, x, DenseField::Side::right, -1.0);
}

double sup_residual(const RealElement& p, const DenseField& omega, double* at_identity) {
  DenseField y(omega.group(), omega.radii());
  apply_laplacian(p, omega, y);
  const auto e = omega.index_of(GroupElement::identity(omega.group()));
  y.data()[static_cast<std::size_t>(e)] -= 1.0;
  if (at_identity) *at_identity = std::fabs(y.data()[static_cast<std::size_t>(e)]);
  return y.linf();
}

// ||p^j||_inf ~ j^{-D/2}: rank for Z^d, homogeneous dimension 4 for H.
double growth_dimension(const GroupDescriptor& g) { return g.is_heisenberg() ? 4.0 : static_cast<double>(g.rank); }

}  // namespace

GreenResult green_function(const RealElement& p, const std::vector<std::int64_t>& radii, const std::string& method,
                           double tol, std::size_t terms) {
  require_transient_walk(p);
  const auto& group = p.group();
  if (method != "relaxation" && method != "series") throw InvalidArgument("green method must be 'relaxation' or 'series'");
  DenseField delta(group, radii);
  delta.set(GroupElement::identity(group), 1.0);
  GreenResult out;
  out.method = method;

  if (method == "relaxation") {
    // Conjugate gradients; x -> x - x p restricted to the box is symmetric positive definite.
    DenseField x(group, radii), r = delta, d = delta, Ad(group, radii);
    double rr = r.dot(r);
    const double target = tol * tol * rr;
    const std::size_t max_iter = 100000;
    std::size_t it = 0;
    while (rr > target && it < max_iter) {
      apply_laplacian(p, d, Ad);
      const double alpha = rr / d.dot(Ad);
      x.axpy(alpha, d);
      r.axpy(-alpha, Ad);
      const double rr_new = r.dot(r);
      const double beta = rr_new / rr;
      rr = rr_new;
      auto& dd = d.data();
      const auto& rd = r.data();
      for (std::size_t i = 0; i < dd.size(); ++i) dd[i] = rd[i] + beta * dd[i];
      ++it;
    }
    out.iterations = it;
    out.omega = std::move(x);
  } else {
    if (terms == 0) {
      std::int64_t m = *std::min_element(radii.begin(), radii.end());
      if (group.is_heisenberg()) m = std::min(radii[0], radii[1]);
      terms = static_cast<std::size_t>(std::max<std::int64_t>(1, m * m));
    }
    DenseField sum = delta, cur = delta, next(group, radii);
    double dropped = 0;
    for (std::size_t j = 1; j <= terms; ++j) {
      next.fill(0.0);
      dropped += next.accumulate_product(p, cur, DenseField::Side::right);
      std::swap(cur, next);
      sum.axpy(1.0, cur);
    }
    const double D = growth_dimension(group);
    const double J = static_cast<double>(terms);
    // Heuristic: ||p^j||_inf ~ C j^{-D/2}, so the omitted tail is C J^{1-D/2}/(D/2-1).
    const double C = cur.linf() * std::pow(J, D / 2);
    out.tail_estimate = C * std::pow(J, 1 - D / 2) / (D / 2 - 1);
    out.dropped_mass = dropped;
    out.iterations = terms;
    out.omega = std::move(sum);
  }
  out.omega_identity = out.omega.get(GroupElement::identity(group));
  out.interior_residual = sup_residual(p, out.omega, &out.residual_at_identity);
  return out;
}

BallProfile heisenberg_green_profile(const GreenResult& green) {
  const auto& omega = green.omega;
  const auto& group = omega.group();
  if (!group.is_heisenberg()) throw InvalidArgument("ball profile is defined for the Heisenberg group");
  const GroupElement u3 = GroupElement::generator(group, 3);
  RealElement damp(group);  // (1 - u3)^3
  damp.add_term(GroupElement::identity(group), 1.0);
  damp.add_term(u3, -3.0);
  damp.add_term(power(u3, 2), 3.0);
  damp.add_term(power(u3, 3), -1.0);
  DenseField damped(group, omega.radii());
  damped.accumulate_product(damp, omega, DenseField::Side::left);
  BallProfile prof;
  const std::int64_t R = std::min(omega.radii()[0], omega.radii()[1]);
  for (std::int64_t r = 0; r <= R; ++r) {
    prof.radius.push_back(r);
    prof.omega_mass.push_back(omega.ball_mass(r));
    prof.damped_mass.push_back(damped.ball_mass(r));
  }
  for (std::size_t i = 1; i + 1 < prof.damped_mass.size(); ++i) {
    const double inc = prof.damped_mass[i] - prof.damped_mass[i - 1];
    const double inc_next = prof.damped_mass[i + 1] - prof.damped_mass[i];
    prof.damped_increment_ratio.push_back(inc > 0 ? inc_next / inc : 0.0);
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Heisenberg homoclinic point

double p4_u3_coefficient(std::size_t* words, std::size_t* hits) {
  const auto H = GroupDescriptor::heisenberg();
  const GroupElement u1 = GroupElement::generator(H, 1), u2 = GroupElement::generator(H, 2);
  const GroupElement gens[4] = {u1, inv(u1), u2, inv(u2)};
  const GroupElement u3 = GroupElement::generator(H, 3);
  std::size_t count = 0, total = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          ++total;
          if (mul(mul(mul(gens[a], gens[b]), gens[c]), gens[d]) == u3) ++count;
        }
  if (words) *words = total;
  if (hits) *hits = count;
  return static_cast<double>(count) / static_cast<double>(total);
}

namespace {

RealElement cube_of_one_minus_u3(const GroupDescriptor& H) {
  const GroupElement u3 = GroupElement::generator(H, 3);
  RealElement e(H);
  e.add_term(GroupElement::identity(H), 1.0);
  e.add_term(u3, -3.0);
  e.add_term(power(u3, 2), 3.0);
  e.add_term(power(u3, 3), -1.0);
  return e;
}

double product_residual(const RealElement& h, const DenseField& b, DenseField::Side side, const RealElement& target) {
  DenseField out(b.group(), product_radii(h, b, side));
  out.accumulate_product(h, b, side);
  out.add(target, -1.0);
  return out.l1();
}

}  // namespace

HomoclinicReport heisenberg_homoclinic(const std::vector<std::size_t>& checkpoints, const std::vector<std::int64_t>& radii) {
  const auto H = GroupDescriptor::heisenberg();
  if (radii.size() != 3) throw InvalidArgument("Heisenberg window needs three radii");
  if (radii[2] < 3) throw InvalidArgument("window too small: z radius must cover supp (1-u3)^3");
  if (checkpoints.empty()) throw InvalidArgument("no truncation levels requested");
  std::vector<std::size_t> cps = checkpoints;
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

  HomoclinicReport rep;
  rep.radii = radii;
  rep.c = p4_u3_coefficient(&rep.words, &rep.words_hitting);

  const RealElement p = to_real(simple_random_walk(H));
  RealElement f = RealElement::constant(H, 4.0) - 4.0 * p;
  const RealElement target = cube_of_one_minus_u3(H);

  DenseField X(H, radii), next(H, radii), b(H, radii), prev_b(H, radii);
  double dropped = X.add(target);
  b.axpy(0.25, X);
  std::size_t ci = 0;
  for (std::size_t j = 0; ci < cps.size(); ++j) {
    next.fill(0.0);
    dropped += next.accumulate_product(p, X, DenseField::Side::left);
    if (j == cps[ci]) {
      HomoclinicStep s;
      s.J = j;
      s.telescoped = next.l1();
      s.residual_left = product_residual(f, b, DenseField::Side::left, target);
      s.residual_right = product_residual(f, b, DenseField::Side::right, target);
      DenseField diff = b;
      diff.axpy(-1.0, prev_b);
      s.increment = diff.l1();
      s.dropped_mass = dropped;
      s.b_l1 = b.l1();
      rep.steps.push_back(s);
      prev_b = b;
      ++ci;
    }
    std::swap(X, next);
    b.axpy(0.25, X);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cubic multiplier

namespace {

struct PhiTerm {
  RealElement value;
  double trunc_error = 0;  // l1 distance to the exact Phi_k
};

// Phi_k = (c-q)^3 sum_m C(m+k,k) q^m with sparse pruned powers of q.
PhiTerm phi_of_q(const RealElement& cq3, const std::vector<RealElement>& qpow, const std::vector<double>& qpow_err,
                 double qn, std::size_t k, double prune_tol) {
  const double ncq3 = cq3.l1();
  PhiTerm out{RealElement(cq3.group()), 0.0};
  if (cq3.is_zero()) return out;
  RealElement series(cq3.group());
  double w = 1.0;  // C(m+k, k)
  double err = 0;
  std::size_t m = 0;
  for (;; ++m) {
    if (m >= qpow.size()) throw InvalidArgument("internal: not enough powers of q");
    series += w * qpow[m];
    err += w * qpow_err[m];
    const double w_next = w * static_cast<double>(m + k + 1) / static_cast<double>(m + 1);
    const double rho = static_cast<double>(m + k + 2) / static_cast<double>(m + 2) * qn;
    const double t_next = w_next * std::pow(qn, static_cast<double>(m + 1));
    if (qn == 0.0) break;
    if (rho < 1.0 && ncq3 * t_next / (1.0 - rho) < prune_tol) {
      err += t_next / (1.0 - rho);
      break;
    }
    w = w_next;
  }
  out.value = cq3 * series;
  out.trunc_error = ncq3 * err;
  return out;
}

}  // namespace

MultiplierReport cubic_multiplier(const RealElement& q, const RealElement& r, double c, std::size_t K, double prune_tol,
                                  const std::vector<std::int64_t>& radii) {
  if (!(c > 0 && c < 1)) throw InvalidArgument("c must lie in (0,1)");
  if (!(prune_tol > 0)) throw InvalidArgument("prune tolerance must be positive");
  q.check_group(r);
  const auto& group = q.group();
  const double qn = q.l1(), rn = r.l1();
  if (qn > c + 1e-12) throw InvalidArgument("|q|_1 = " + std::to_string(qn) + " exceeds c");
  if (rn > 1 - c + 1e-12) throw InvalidArgument("|r|_1 = " + std::to_string(rn) + " exceeds 1 - c");
  if ((q * r - r * q).l1() > 1e-12 * (1 + qn * rn)) throw InvalidArgument("q and r do not commute");

  MultiplierReport rep;
  rep.K = K;
  rep.c = c;
  const RealElement one = RealElement::constant(group, 1.0);
  const RealElement cq = c * one - q;
  const RealElement cq3 = cq * cq * cq;

  // Powers of q, pruned, with propagated errors.
  std::vector<RealElement> qpow{one};
  std::vector<double> qpow_err{0.0};
  auto extend_qpow = [&](std::size_t upto) {
    while (qpow.size() <= upto) {
      TruncatedSeries nxt = prune(qpow.back() * q, prune_tol * 1e-3);
      qpow_err.push_back(qn * qpow_err.back() + nxt.l1_error);
      qpow.push_back(std::move(nxt.value));
    }
  };
  std::vector<PhiTerm> phis;
  for (std::size_t k = 0; k <= K; ++k) {
    for (std::size_t need = 64;; need *= 2) {
      extend_qpow(need);
      try {
        phis.push_back(phi_of_q(cq3, qpow, qpow_err, qn, k, prune_tol));
        break;
      } catch (const InvalidArgument&) {
        if (need > (1u << 20)) throw;
      }
    }
  }

  // Dense powers R_k of r with boundary drops e_k.
  DenseField R(group, radii), Rn(group, radii);
  R.set(GroupElement::identity(group), 1.0);
  std::vector<std::int64_t> a_radii = radii;
  for (const auto& ph : phis) {
    auto pr = product_radii(ph.value, R, DenseField::Side::left);
    for (std::size_t i = 0; i < pr.size(); ++i) a_radii[i] = std::max(a_radii[i], pr[i]);
  }
  rep.radii = a_radii;
  DenseField a(group, a_radii);
  double err = 0, e_k = 0, drops = 0;
  for (std::size_t k = 0; k <= K; ++k) {
    const double phin = phis[k].value.l1();
    const double Rl1 = R.l1();
    rep.phi_norms.push_back(phin);
    rep.r_norms.push_back(Rl1);
    drops += a.accumulate_product(phis[k].value, R, DenseField::Side::left);
    err += phin * e_k + phis[k].trunc_error * (Rl1 + e_k);
    if (k == K) break;
    Rn.fill(0.0);
    const double d = Rn.accumulate_product(r, R, DenseField::Side::left);
    e_k = rn * e_k + d;
    std::swap(R, Rn);
  }

  // sum_{k>K} |r|^k |phi_k|(c) with |phi_k|(c) = (1-c)^-k phi_k_abs(c, k).
  double tail = 0;
  if (rn > 0 && !cq3.is_zero()) {
    const double ratio = rn / (1 - c);
    const long kmax = std::max<long>(static_cast<long>(K) + 1, 4000);
    double last = 0;
    for (long k = static_cast<long>(K) + 1; k <= kmax; ++k) {
      last = std::pow(ratio, static_cast<double>(k)) * phi_k_abs_direct(c, k).value;
      tail += last;
    }
    // Beyond kmax: fitted C k^{-3/2} decay (ratio <= 1 only helps).
    const double C = last * std::pow(static_cast<double>(kmax), 1.5);
    tail += 2 * C / std::sqrt(static_cast<double>(kmax));
    rep.k_tail_heuristic = true;
  }
  rep.k_tail = tail;
  rep.l1_error = err + drops + tail;
  rep.a_l1 = a.l1();

  const RealElement t = one - q - r;
  rep.residual_left = product_residual(t, a, DenseField::Side::right, cq3);
  rep.residual_right = product_residual(t, a, DenseField::Side::left, cq3);
  return rep;
}

}  // namespace pa
