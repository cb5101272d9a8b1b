#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace pa {

enum class GroupKind : std::uint8_t { lattice, heisenberg };

/// Z^d (rank d) or the discrete Heisenberg group (rank 3).
struct GroupDescriptor {
  GroupKind kind = GroupKind::lattice;
  int rank = 1;

  static GroupDescriptor lattice(int d);
  static GroupDescriptor heisenberg() { return {GroupKind::heisenberg, 3}; }

  bool is_lattice() const { return kind == GroupKind::lattice; }
  bool is_heisenberg() const { return kind == GroupKind::heisenberg; }
  std::string name() const;

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

inline constexpr int kMaxRank = 4;

/// Normal form of a group element: the exponent tuple. For the Heisenberg
/// group (x, y, z) is the unitriangular matrix with (1,2)-entry x, (2,3)-entry
/// y and (1,3)-entry z, so u2 = (1,0,0), u1 = (0,1,0), u3 = (0,0,1).
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(const GroupDescriptor& group, std::span<const std::int64_t> exponents);
  GroupElement(const GroupDescriptor& group, std::initializer_list<std::int64_t> exponents);

  static GroupElement identity(const GroupDescriptor& group);
  /// i-th canonical generator, 1-based: u_i. For Heisenberg u1, u2, u3 as above.
  static GroupElement generator(const GroupDescriptor& group, int i);

  GroupDescriptor group() const { return {kind_, rank_}; }
  int rank() const { return rank_; }
  std::int64_t operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  std::span<const std::int64_t> exponents() const { return {e_.data(), static_cast<std::size_t>(rank_)}; }
  bool is_identity() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.kind_ == b.kind_ && a.rank_ == b.rank_ && a.e_ == b.e_;
  }
  /// Lexicographic on exponents; left-invariant for both supported groups.
  friend bool operator<(const GroupElement& a, const GroupElement& b) { return a.e_ < b.e_; }
  friend bool operator>(const GroupElement& a, const GroupElement& b) { return b < a; }

  std::size_t hash() const;
  std::string to_string() const;

 private:
  friend GroupElement mul(const GroupElement&, const GroupElement&);
  friend GroupElement inv(const GroupElement&);

  std::array<std::int64_t, kMaxRank> e_{};
  GroupKind kind_ = GroupKind::lattice;
  std::uint8_t rank_ = 1;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept { return g.hash(); }
};

GroupElement mul(const GroupElement& g, const GroupElement& h);
GroupElement inv(const GroupElement& g);
GroupElement power(const GroupElement& g, std::int64_t n);
void require_same_group(const GroupElement& g, const GroupElement& h);

/// Finite set of group elements in canonical (lexicographic) order, with the
/// bounding box radii it was built from.
class Window {
 public:
  Window() = default;
  Window(const GroupDescriptor& group, std::vector<GroupElement> elements, std::vector<std::int64_t> radii = {});

  const GroupDescriptor& group() const { return group_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const std::vector<std::int64_t>& radii() const { return radii_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(const GroupElement& g) const { return index_.count(g) != 0; }
  /// Position in canonical order, or -1.
  std::ptrdiff_t index_of(const GroupElement& g) const;
  const GroupElement& operator[](std::size_t i) const { return elements_[i]; }

 private:
  GroupDescriptor group_{};
  std::vector<GroupElement> elements_;
  std::vector<std::int64_t> radii_;
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index_;
};

/// Lattice: {-n..n}^d. Heisenberg: |x|,|y| <= n, |z| <= n^2.
Window box(const GroupDescriptor& group, std::int64_t n);
/// Box with explicit per-coordinate radii.
Window box_radii(const GroupDescriptor& group, std::span<const std::int64_t> radii);

/// {g in window | g*phi in window for all phi in F}; F must contain the identity.
Window interior(const Window& window, std::span<const GroupElement> F);
/// Same set without the identity precondition (used for shifted stencils).
Window right_stable(const Window& window, std::span<const GroupElement> F);
/// {g in window | phi*g in window for all phi in F}.
Window left_stable(const Window& window, std::span<const GroupElement> F);

/// |gamma*F symmetric-difference F| / |F| for a left translate.
double folner_defect(const Window& window, const GroupElement& gamma);

}  // namespace pa
