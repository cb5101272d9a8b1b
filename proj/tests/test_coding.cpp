#include <cmath>
#include <random>

#include "coding.hpp"
#include "doctest.h"
#include "expr.hpp"
#include "gen.hpp"
#include "harmonic.hpp"

using namespace pa;

namespace {

const GroupDescriptor Z = GroupDescriptor::lattice(1);
const GroupDescriptor Z2 = GroupDescriptor::lattice(2);
const GroupDescriptor H = GroupDescriptor::heisenberg();

double frac_distance(double v) { return std::fabs(v - std::round(v)); }

}  // namespace

TEST_SUITE("coding") {
  TEST_CASE("alphabets of the example systems") {
    Alphabet b = alphabet(parse_expression("1 - u1 - u2", Z2), PartitionKind::B);
    CHECK(b.j_min == -1);
    CHECK(b.j_max == 0);
    ExactElement torus4 = parse_expression("u^4 - u^3 - u^2 - u + 1", Z);
    Alphabet b4 = alphabet(torus4, PartitionKind::B);
    CHECK(b4.j_min == -2);
    CHECK(b4.j_max == 1);
    Alphabet c4 = alphabet(torus4, PartitionKind::C);
    CHECK(c4.size() == 5);
    CHECK(c4.j_min == 0);
    Alphabet plus = alphabet(parse_expression("1 + u", Z), PartitionKind::B);
    CHECK(plus.j_min == 0);
    CHECK(plus.j_max == 1);
    CHECK(plus.kind == "B_plus_only");
    CHECK(alphabet(parse_expression("-1 - u", Z), PartitionKind::B).kind == "B_minus_only");
    CHECK_THROWS(alphabet(ExactElement(Z), PartitionKind::B));
  }

  TEST_CASE("alphabet sizes follow the coefficient norms") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long> coef(-3, 3);
    for (int t = 0; t < 500; ++t) {
      ExactElement f(Z2);
      for (int i = 0; i < 4; ++i) f.add_term(gen::element(Z2, rng, 2), mpq_class(coef(rng)));
      if (f.is_zero()) continue;
      const auto n1 = static_cast<std::size_t>(std::llround(f.l1()));
      CHECK(alphabet(f, PartitionKind::C).size() == n1);
      auto [pos, neg] = split_pos_neg(f);
      if (!pos.is_zero() && !neg.is_zero()) CHECK(alphabet(f, PartitionKind::B).size() == n1 - 1);
      SymbolBounds sb = symbol_bounds(f);
      CHECK(sb.lo <= alphabet(f, PartitionKind::B).j_min);
      CHECK(sb.hi >= alphabet(f, PartitionKind::B).j_max);
    }
  }

  TEST_CASE("sampled points satisfy the defining relation") {
    CodedPoint c = sample_point(parse_expression("u - 1", Z), box(Z, 10), 3);
    for (double v : c.x.values) CHECK(v == doctest::Approx(c.x.values.front()));

    CodedPoint p = sample_point(parse_expression("1 - u1 - u2", Z2), box(Z2, 4), 5);
    CHECK(relation_residual(parse_expression("1 - u1 - u2", Z2), p.x) < 1e-12);
    for (std::int64_t i = -4; i < 4; ++i) {
      for (std::int64_t j = -4; j < 4; ++j) {
        const double lhs = p.x.at(GroupElement(Z2, {i, j}));
        const double rhs = p.x.at(GroupElement(Z2, {i + 1, j})) + p.x.at(GroupElement(Z2, {i, j + 1}));
        CHECK(frac_distance(lhs - rhs) < 1e-12);
      }
    }

    ExactElement f = parse_expression("u^4 - u^3 - u^2 - u + 1", Z);
    CodedPoint q = sample_point(f, box(Z, 15), 6);
    for (std::int64_t k = -15; k + 4 <= 15; ++k) {
      auto x = [&](std::int64_t s) { return q.x.at(GroupElement(Z, {s})); };
      CHECK(frac_distance(x(k + 4) - (x(k + 3) + x(k + 2) + x(k + 1) - x(k))) < 1e-12);
    }

    ExactElement fh = parse_expression("4 - u1 - u1^-1 - u2 - u2^-1", H);
    CodedPoint h = sample_point(fh, box(H, 3), 7);
    CHECK(relation_residual(fh, h.x) < 1e-12);
  }

  TEST_CASE("samples are reproducible and differ across seeds") {
    ExactElement f = parse_expression("3 - u - u^-1", Z);
    CHECK(sample_point(f, box(Z, 20), 9).x.values == sample_point(f, box(Z, 20), 9).x.values);
    CHECK(sample_point(f, box(Z, 20), 9).x.values != sample_point(f, box(Z, 20), 10).x.values);
  }

  TEST_CASE("stencils without a unit pivot are unsupported") {
    CHECK_THROWS_AS(sample_point(parse_expression("2u - 3", Z), box(Z, 5), 1), UnsupportedStencil);
    CHECK_THROWS_AS(SamplingPlan(parse_expression("3 - 2u1 - 2u2", Z2), box(Z2, 3)), UnsupportedStencil);
    // Lex-max coefficient 2 but lex-min coefficient 1: solved in reverse order.
    CHECK_NOTHROW(SamplingPlan(parse_expression("1 - u + 2u^2", Z), box(Z, 5)));
  }

  TEST_CASE("B symbols") {
    ExactElement f = parse_expression("1 - u1 - u2", Z2);
    Window w = box(Z2, 2);
    Configuration zero{w, std::vector<double>(w.size(), 0.0), ValueKind::torus};
    for (double s : encode_B(make_coded_point(f, zero)).values) CHECK(s == 0.0);

    CodedPoint p = sample_point(f, box(Z2, 10), 12);
    bool saw_minus = false, saw_zero = false;
    for (double s : encode_B(p).values) {
      CHECK((s == -1.0 || s == 0.0));
      saw_minus = saw_minus || s == -1.0;
      saw_zero = saw_zero || s == 0.0;
    }
    CHECK(saw_minus);
    CHECK(saw_zero);

    Configuration bad = p.x;
    bad.values[0] = 1.5;
    CHECK_THROWS_AS(encode_B(CodedPoint{f, bad, p.z}), InvalidPoint);
    Configuration off = p.x;
    off.values[off.values.size() / 2] += 0.1;
    CHECK_THROWS_AS(make_coded_point(f, off), InvalidPoint);
  }

  TEST_CASE("C symbols are floor(x |f|_1)") {
    // encode_C reads only x, so single-site points need no relation window.
    auto single = [](const ExactElement& f, double v) {
      Configuration x{Window(Z, {GroupElement::identity(Z)}), {v}, ValueKind::torus};
      return encode_C(CodedPoint{f, x, Configuration{}}).values[0];
    };
    ExactElement f5 = parse_expression("u^4 - u^3 - u^2 - u + 1", Z);
    CHECK(single(f5, 0.42) == 2.0);
    CHECK(single(f5, 0.0) == 0.0);
    CHECK(single(parse_expression("2 - u", Z), 0.999) == 2.0);

    CodedPoint p = sample_point(f5, box(Z, 20), 2);
    Configuration c = encode_C(p);
    for (std::size_t i = 0; i < c.values.size(); ++i) CHECK(c.values[i] == std::floor(p.x.values[i] * 5));
  }

  TEST_CASE("decoding") {
    ExactElement f = parse_expression("3 - u - u^-1", Z);
    TruncatedSeries w = neumann_inverse(f, 1e-13);
    Window win = box(Z, 40);

    Configuration z{win, std::vector<double>(win.size(), 0.0), ValueKind::integer};
    for (double v : decode(z, w, f).x.values) CHECK(v == 0.0);

    // A single symbol gives the homoclinic point, decaying geometrically.
    z.values[static_cast<std::size_t>(win.index_of(GroupElement::identity(Z)))] = 1;
    DecodeResult d = decode(z, w, f);
    REQUIRE(d.x.window.size() > 5);
    for (std::size_t i = 0; i < d.x.window.size(); ++i) {
      const double n = static_cast<double>(std::abs(d.x.window[i][0]));
      CHECK(frac_distance(d.x.values[i]) <= std::pow(2.0 / 3.0, n));
    }

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      CodedPoint p = sample_point(f, box(Z, 100), seed);
      DecodeResult r = decode(encode_B(p), w, f);
      double worst = 0;
      for (std::size_t i = 0; i < r.x.window.size(); ++i)
        worst = std::max(worst, torus_distance(r.x.values[i], p.x.at(r.x.window[i])));
      CHECK(worst <= 1e-6);
      CHECK(worst <= r.error_bound + 1e-12);
    }

    CHECK_THROWS(decode(z, TruncatedSeries{RealElement(Z), 0, ""}, f));
    CHECK_THROWS(decode(z, w, parse_expression("3 - u1 - u2", Z2)));
    Configuration big = z;
    big.values[0] = 10;
    CHECK_THROWS(decode(big, w, f));
  }

  TEST_CASE("itinerary separation on small horizons") {
    ExactElement f = parse_expression("u^4 - u^3 - u^2 - u + 1", Z);
    for (const char* mode : {"independent", "perturbed"}) {
      ItineraryReport r = itinerary_separation(f, box(Z, 20), 100, 0.05, PartitionKind::C, 4, mode);
      CHECK(r.coincidences == 0);
      CHECK(r.control_coincides);
      CHECK(r.pairs_kept + r.pairs_rejected == r.pairs_requested);
    }
    ItineraryReport b = itinerary_separation(parse_expression("1 - u1 - u2", Z2), box(Z2, 4), 100, 0.05, PartitionKind::B, 4);
    CHECK(b.coincidences == 0);
    CHECK(b.control_coincides);
    CHECK_THROWS(itinerary_separation(f, box(Z, 5), 10, 0.05, PartitionKind::C, 1, "sideways"));
  }

  TEST_CASE("uniform streams") {
    UniformStream a(1), b(1), c(derive_seed(1, 1));
    double mean = 0;
    for (int i = 0; i < 100000; ++i) {
      const double x = a.next();
      CHECK(x == b.next());
      CHECK((x >= 0.0 && x < 1.0));
      mean += x;
    }
    CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
    CHECK(derive_seed(1, 1) != derive_seed(1, 2));
    CHECK(derive_seed(1, 1) != derive_seed(2, 1));
  }
}
