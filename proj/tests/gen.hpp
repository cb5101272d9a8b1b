#pragma once

// Hand-rolled generators for property tests.

#include <cstdint>
#include <random>

#include "ring.hpp"

namespace gen {

inline pa::GroupElement element(const pa::GroupDescriptor& g, std::mt19937_64& rng, std::int64_t span = 3) {
  std::uniform_int_distribution<std::int64_t> d(-span, span);
  std::vector<std::int64_t> e(static_cast<std::size_t>(g.rank));
  for (auto& x : e) x = d(rng);
  return pa::GroupElement(g, e);
}

inline mpq_class rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
  mpq_class q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline pa::ExactElement poly(const pa::GroupDescriptor& g, std::mt19937_64& rng, int max_terms = 5, std::int64_t span = 2) {
  pa::ExactElement f(g);
  const int n = std::uniform_int_distribution<int>(0, max_terms)(rng);
  for (int i = 0; i < n; ++i) f.add_term(element(g, rng, span), rational(rng));
  return f;
}

inline std::vector<pa::GroupDescriptor> groups() {
  return {pa::GroupDescriptor::lattice(1), pa::GroupDescriptor::lattice(2), pa::GroupDescriptor::lattice(3),
          pa::GroupDescriptor::lattice(4), pa::GroupDescriptor::heisenberg()};
}

}  // namespace gen
