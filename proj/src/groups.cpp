#include "groups.hpp"

#include <algorithm>
#include <sstream>

#include "errors.hpp"

namespace pa {

GroupDescriptor GroupDescriptor::lattice(int d) {
  if (d < 1 || d > kMaxRank) {
    throw InvalidArgument("lattice rank must be in 1.." + std::to_string(kMaxRank) + ", got " + std::to_string(d));
  }
  return {GroupKind::lattice, d};
}

std::string GroupDescriptor::name() const {
  if (is_heisenberg()) return "H";
  return "Z^" + std::to_string(rank);
}

GroupElement::GroupElement(const GroupDescriptor& group, std::span<const std::int64_t> exponents)
    : kind_(group.kind), rank_(static_cast<std::uint8_t>(group.rank)) {
  if (static_cast<int>(exponents.size()) != group.rank) {
    throw InvalidArgument("element of " + group.name() + " needs " + std::to_string(group.rank) +
                          " exponents, got " + std::to_string(exponents.size()));
  }
  std::copy(exponents.begin(), exponents.end(), e_.begin());
}

GroupElement::GroupElement(const GroupDescriptor& group, std::initializer_list<std::int64_t> exponents)
    : GroupElement(group, std::span<const std::int64_t>(exponents.begin(), exponents.size())) {}

GroupElement GroupElement::identity(const GroupDescriptor& group) {
  GroupElement g;
  g.kind_ = group.kind;
  g.rank_ = static_cast<std::uint8_t>(group.rank);
  return g;
}

GroupElement GroupElement::generator(const GroupDescriptor& group, int i) {
  if (i < 1 || i > group.rank) {
    throw InvalidArgument("generator u" + std::to_string(i) + " does not exist in " + group.name());
  }
  GroupElement g = identity(group);
  if (group.is_heisenberg()) {
    // u1 = (0,1,0), u2 = (1,0,0), u3 = (0,0,1)
    static constexpr int slot[3] = {1, 0, 2};
    g.e_[static_cast<std::size_t>(slot[i - 1])] = 1;
  } else {
    g.e_[static_cast<std::size_t>(i - 1)] = 1;
  }
  return g;
}

bool GroupElement::is_identity() const {
  return std::all_of(e_.begin(), e_.end(), [](std::int64_t v) { return v == 0; });
}

std::size_t GroupElement::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(kind_);
  for (int i = 0; i < rank_; ++i) {
    std::uint64_t v = static_cast<std::uint64_t>(e_[static_cast<std::size_t>(i)]);
    v *= 0xbf58476d1ce4e5b9ULL;
    v ^= v >> 31;
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < rank_; ++i) {
    if (i) os << ',';
    os << e_[static_cast<std::size_t>(i)];
  }
  os << ')';
  return os.str();
}

void require_same_group(const GroupElement& g, const GroupElement& h) {
  if (g.group() != h.group()) {
    throw InvalidArgument("mixed groups: " + g.group().name() + " and " + h.group().name());
  }
}

GroupElement mul(const GroupElement& g, const GroupElement& h) {
  require_same_group(g, h);
  GroupElement r = g;
  for (int i = 0; i < g.rank_; ++i) r.e_[static_cast<std::size_t>(i)] += h.e_[static_cast<std::size_t>(i)];
  if (g.kind_ == GroupKind::heisenberg) r.e_[2] += g.e_[0] * h.e_[1];
  return r;
}

GroupElement inv(const GroupElement& g) {
  GroupElement r = g;
  for (int i = 0; i < g.rank_; ++i) r.e_[static_cast<std::size_t>(i)] = -g.e_[static_cast<std::size_t>(i)];
  if (g.kind_ == GroupKind::heisenberg) r.e_[2] = -g.e_[2] + g.e_[0] * g.e_[1];
  return r;
}

GroupElement power(const GroupElement& g, std::int64_t n) {
  GroupElement base = n < 0 ? inv(g) : g;
  std::int64_t k = n < 0 ? -n : n;
  GroupElement r = GroupElement::identity(g.group());
  while (k > 0) {
    if (k & 1) r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

Window::Window(const GroupDescriptor& group, std::vector<GroupElement> elements, std::vector<std::int64_t> radii)
    : group_(group), elements_(std::move(elements)), radii_(std::move(radii)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].group() != group_) throw InvalidArgument("window element from a different group");
    index_.emplace(elements_[i], i);
  }
}

std::ptrdiff_t Window::index_of(const GroupElement& g) const {
  auto it = index_.find(g);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

Window box_radii(const GroupDescriptor& group, std::span<const std::int64_t> radii) {
  if (static_cast<int>(radii.size()) != group.rank) throw InvalidArgument("box radii do not match group rank");
  for (auto r : radii) {
    if (r < 0) throw InvalidArgument("box radii must be nonnegative");
  }
  std::vector<GroupElement> elems;
  std::size_t count = 1;
  for (auto r : radii) count *= static_cast<std::size_t>(2 * r + 1);
  elems.reserve(count);
  std::array<std::int64_t, kMaxRank> cur{};
  const int d = group.rank;
  for (int i = 0; i < d; ++i) cur[static_cast<std::size_t>(i)] = -radii[static_cast<std::size_t>(i)];
  while (true) {
    elems.emplace_back(group, std::span<const std::int64_t>(cur.data(), static_cast<std::size_t>(d)));
    int i = d - 1;
    while (i >= 0) {
      auto ui = static_cast<std::size_t>(i);
      if (++cur[ui] <= radii[ui]) break;
      cur[ui] = -radii[ui];
      --i;
    }
    if (i < 0) break;
  }
  return Window(group, std::move(elems), std::vector<std::int64_t>(radii.begin(), radii.end()));
}

Window box(const GroupDescriptor& group, std::int64_t n) {
  if (n < 1) throw InvalidArgument("box size must be >= 1");
  std::vector<std::int64_t> radii(static_cast<std::size_t>(group.rank), n);
  if (group.is_heisenberg()) radii[2] = n * n;
  return box_radii(group, radii);
}

namespace {

template <class Pred>
Window filter(const Window& window, Pred keep) {
  std::vector<GroupElement> out;
  for (const auto& g : window.elements()) {
    if (keep(g)) out.push_back(g);
  }
  return Window(window.group(), std::move(out), window.radii());
}

}  // namespace

Window right_stable(const Window& window, std::span<const GroupElement> F) {
  return filter(window, [&](const GroupElement& g) {
    return std::all_of(F.begin(), F.end(), [&](const GroupElement& phi) { return window.contains(mul(g, phi)); });
  });
}

Window left_stable(const Window& window, std::span<const GroupElement> F) {
  return filter(window, [&](const GroupElement& g) {
    return std::all_of(F.begin(), F.end(), [&](const GroupElement& phi) { return window.contains(mul(phi, g)); });
  });
}

Window interior(const Window& window, std::span<const GroupElement> F) {
  if (F.empty()) throw InvalidArgument("interior: F must be nonempty");
  if (std::none_of(F.begin(), F.end(), [](const GroupElement& g) { return g.is_identity(); })) {
    throw InvalidArgument("interior: F must contain the identity");
  }
  return right_stable(window, F);
}

double folner_defect(const Window& window, const GroupElement& gamma) {
  std::size_t outside = 0;
  for (const auto& g : window.elements()) {
    if (!window.contains(mul(gamma, g))) ++outside;
  }
  // |gF \ F| = |F \ gF| for a translate, so the symmetric difference is twice that.
  return 2.0 * static_cast<double>(outside) / static_cast<double>(window.size());
}

}  // namespace pa
