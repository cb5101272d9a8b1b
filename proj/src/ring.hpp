#pragma once

#include <gmpxx.h>

#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "groups.hpp"

namespace pa {

namespace detail {
inline double abs_value(double c) { return std::fabs(c); }
inline double abs_value(const mpq_class& c) { return std::fabs(c.get_d()); }
inline bool is_zero(double c) { return c == 0.0; }
inline bool is_zero(const mpq_class& c) { return sgn(c) == 0; }
inline int sign_of(double c) { return (c > 0) - (c < 0); }
inline int sign_of(const mpq_class& c) { return sgn(c); }
}  // namespace detail

/// Finitely supported map group -> coefficient, i.e. an element of the group
/// ring. Terms are kept in canonical (lexicographic) order and never store a
/// zero coefficient.
template <class C>
class Element {
 public:
  using Coefficient = C;
  using Terms = std::map<GroupElement, C>;

  Element() = default;
  explicit Element(const GroupDescriptor& group) : group_(group) {}

  static Element constant(const GroupDescriptor& group, const C& c) {
    Element e(group);
    e.add_term(GroupElement::identity(group), c);
    return e;
  }
  static Element monomial(const GroupElement& g, const C& c = C(1)) {
    Element e(g.group());
    e.add_term(g, c);
    return e;
  }

  const GroupDescriptor& group() const { return group_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  C coefficient(const GroupElement& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(const GroupElement& g, const C& c) {
    if (g.group() != group_) throw InvalidArgument("term from " + g.group().name() + " added to element of " + group_.name());
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(g, c);
    if (!inserted) {
      it->second += c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  std::vector<GroupElement> support() const {
    std::vector<GroupElement> s;
    s.reserve(terms_.size());
    for (const auto& [g, c] : terms_) s.push_back(g);
    return s;
  }

  double l1() const {
    double s = 0;
    for (const auto& [g, c] : terms_) s += detail::abs_value(c);
    return s;
  }
  double linf() const {
    double s = 0;
    for (const auto& [g, c] : terms_) s = std::max(s, detail::abs_value(c));
    return s;
  }

  Element& operator+=(const Element& o) {
    check_group(o);
    for (const auto& [g, c] : o.terms_) add_term(g, c);
    return *this;
  }
  Element& operator-=(const Element& o) {
    check_group(o);
    for (const auto& [g, c] : o.terms_) add_term(g, C(-c));
    return *this;
  }
  Element& operator*=(const C& s) {
    if (detail::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [g, c] : terms_) c *= s;
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const C& s) { return a *= s; }
  friend Element operator*(const C& s, Element a) { return a *= s; }
  friend bool operator==(const Element& a, const Element& b) { return a.group_ == b.group_ && a.terms_ == b.terms_; }

  void check_group(const Element& o) const {
    if (o.group_ != group_) throw InvalidArgument("mixed groups: " + group_.name() + " and " + o.group_.name());
  }

 private:
  GroupDescriptor group_{};
  Terms terms_;
};

using ExactElement = Element<mpq_class>;
using RealElement = Element<double>;

template <class C>
Element<C> convolve(const Element<C>& g, const Element<C>& h) {
  g.check_group(h);
  std::unordered_map<GroupElement, C, GroupElementHash> acc;
  acc.reserve(g.size() * h.size());
  for (const auto& [a, ca] : g.terms()) {
    for (const auto& [b, cb] : h.terms()) {
      acc[mul(a, b)] += ca * cb;
    }
  }
  Element<C> out(g.group());
  for (auto& [k, c] : acc) out.add_term(k, c);
  return out;
}

template <class C>
Element<C> operator*(const Element<C>& g, const Element<C>& h) {
  return convolve(g, h);
}

template <class C>
Element<C> adjoint(const Element<C>& g) {
  Element<C> out(g.group());
  for (const auto& [a, c] : g.terms()) out.add_term(inv(a), c);
  return out;
}

/// g = g+ + g-, with g+ >= 0 and g- <= 0 coefficientwise.
template <class C>
std::pair<Element<C>, Element<C>> split_pos_neg(const Element<C>& g) {
  Element<C> pos(g.group()), neg(g.group());
  for (const auto& [a, c] : g.terms()) {
    if (detail::sign_of(c) > 0) {
      pos.add_term(a, c);
    } else {
      neg.add_term(a, c);
    }
  }
  return {pos, neg};
}

template <class C>
Element<C> power(const Element<C>& g, int n) {
  if (n < 0) throw InvalidArgument("ring power must be nonnegative");
  Element<C> r = Element<C>::constant(g.group(), C(1));
  for (int i = 0; i < n; ++i) r = convolve(r, g);
  return r;
}

RealElement to_real(const ExactElement& g);
/// Exact element with the given coefficients; fails unless every float is an
/// exact dyadic value (always true for doubles) -- used for tests only.
ExactElement to_exact(const RealElement& g);
bool has_integer_coefficients(const ExactElement& g);

/// Real element together with an explicit bound on its l1 distance to the
/// ideal (infinite) series it approximates.
struct TruncatedSeries {
  RealElement value;
  double l1_error = 0.0;
  std::string provenance;
};

/// Drops terms with |c| < tol; the dropped l1 mass is added to l1_error.
TruncatedSeries prune(const RealElement& g, double tol, double prior_error = 0.0, std::string provenance = "pruned");
void prune_in_place(TruncatedSeries& s, double tol);

enum class ValueKind { torus, integer, real };
const char* value_kind_name(ValueKind k);

/// Values on a finite window, stored in the window's canonical order.
struct Configuration {
  Window window;
  std::vector<double> values;
  ValueKind kind = ValueKind::real;

  double at(const GroupElement& g) const;
  double sup_norm() const;
};

double mod1(double x);
/// Distance on R/Z between two representatives.
double torus_distance(double a, double b);

/// (rho^h v)_d = sum_g h_g v_{d g}, evaluated on {d in window : d supp(h) in window}.
Configuration apply_rho(const RealElement& h, const Configuration& v, bool reduce_mod1 = false);
/// (lambda^h v)_d = sum_g h_g v_{g^-1 d}, evaluated on {d : g^-1 d in window for g in supp(h)}.
Configuration apply_lambda(const RealElement& h, const Configuration& v, bool reduce_mod1 = false);
/// Restriction of v to a sub-window.
Configuration restrict_to(const Configuration& v, const Window& sub);

}  // namespace pa
