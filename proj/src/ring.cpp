#include "ring.hpp"

#include <algorithm>

namespace pa {

RealElement to_real(const ExactElement& g) {
  RealElement out(g.group());
  for (const auto& [a, c] : g.terms()) out.add_term(a, c.get_d());
  return out;
}

ExactElement to_exact(const RealElement& g) {
  ExactElement out(g.group());
  for (const auto& [a, c] : g.terms()) {
    if (!std::isfinite(c)) throw InvalidArgument("non-finite coefficient");
    out.add_term(a, mpq_class(c));
  }
  return out;
}

bool has_integer_coefficients(const ExactElement& g) {
  return std::all_of(g.terms().begin(), g.terms().end(),
                     [](const auto& t) { return t.second.get_den() == 1; });
}

TruncatedSeries prune(const RealElement& g, double tol, double prior_error, std::string provenance) {
  if (!(tol >= 0)) throw InvalidArgument("prune tolerance must be nonnegative");
  TruncatedSeries s{RealElement(g.group()), prior_error, std::move(provenance)};
  for (const auto& [a, c] : g.terms()) {
    if (std::fabs(c) < tol) {
      s.l1_error += std::fabs(c);
    } else {
      s.value.add_term(a, c);
    }
  }
  return s;
}

void prune_in_place(TruncatedSeries& s, double tol) {
  TruncatedSeries p = prune(s.value, tol, s.l1_error, s.provenance);
  s = std::move(p);
}

const char* value_kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::torus: return "torus";
    case ValueKind::integer: return "integer";
    case ValueKind::real: return "real";
  }
  return "real";
}

double Configuration::at(const GroupElement& g) const {
  auto i = window.index_of(g);
  if (i < 0) throw InvalidArgument("site " + g.to_string() + " outside configuration window");
  return values[static_cast<std::size_t>(i)];
}

double Configuration::sup_norm() const {
  double s = 0;
  for (double v : values) s = std::max(s, std::fabs(v));
  return s;
}

double mod1(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double torus_distance(double a, double b) {
  double d = mod1(a - b);
  return std::min(d, 1.0 - d);
}

namespace {

Configuration finish(Window w, std::vector<double> vals, const Configuration& v, bool reduce) {
  if (w.empty()) throw InvalidArgument("output window is empty; enlarge the input window");
  Configuration out{std::move(w), std::move(vals), ValueKind::real};
  if (reduce) {
    for (double& x : out.values) x = mod1(x);
    out.kind = ValueKind::torus;
  } else if (v.kind == ValueKind::integer) {
    out.kind = ValueKind::real;
  }
  return out;
}

}  // namespace

Configuration apply_rho(const RealElement& h, const Configuration& v, bool reduce_mod1) {
  if (h.group() != v.window.group()) throw InvalidArgument("apply_rho: element and window live in different groups");
  auto supp = h.support();
  Window out = right_stable(v.window, supp);
  std::vector<double> vals(out.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& d = out[i];
    double s = 0;
    for (const auto& [g, c] : h.terms()) s += c * v.values[static_cast<std::size_t>(v.window.index_of(mul(d, g)))];
    vals[i] = s;
  }
  return finish(std::move(out), std::move(vals), v, reduce_mod1);
}

Configuration apply_lambda(const RealElement& h, const Configuration& v, bool reduce_mod1) {
  if (h.group() != v.window.group()) throw InvalidArgument("apply_lambda: element and window live in different groups");
  std::vector<GroupElement> inverses;
  for (const auto& g : h.support()) inverses.push_back(inv(g));
  Window out = left_stable(v.window, inverses);
  std::vector<double> vals(out.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& d = out[i];
    double s = 0;
    for (const auto& [g, c] : h.terms()) s += c * v.values[static_cast<std::size_t>(v.window.index_of(mul(inv(g), d)))];
    vals[i] = s;
  }
  return finish(std::move(out), std::move(vals), v, reduce_mod1);
}

Configuration restrict_to(const Configuration& v, const Window& sub) {
  Configuration out{sub, std::vector<double>(sub.size()), v.kind};
  for (std::size_t i = 0; i < sub.size(); ++i) out.values[i] = v.at(sub[i]);
  return out;
}

}  // namespace pa
