#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "groups.hpp"
#include "ring.hpp"

namespace pa {

/// Real values on a full coordinate box of Z^d or H, stored densely in
/// canonical (lexicographic) order. Used where supports grow too large for
/// the sparse map representation: Green's functions, the Heisenberg
/// homoclinic series and the cubic multiplier.
class DenseField {
 public:
  enum class Side { left, right };

  DenseField() = default;
  DenseField(const GroupDescriptor& group, std::vector<std::int64_t> radii);

  const GroupDescriptor& group() const { return group_; }
  const std::vector<std::int64_t>& radii() const { return radii_; }
  std::size_t size() const { return data_.size(); }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// Flat index of g, or -1 if g lies outside the box.
  std::ptrdiff_t index_of(const GroupElement& g) const;
  GroupElement element_at(std::size_t idx) const;
  double get(const GroupElement& g) const;
  void set(const GroupElement& g, double v);
  /// Adds every term of h; returns the l1 mass that fell outside the box.
  double add(const RealElement& h, double scale = 1.0);

  /// this += scale * (h * src) (Side::left) or scale * (src * h) (Side::right).
  /// Returns the l1 mass of contributions falling outside this box.
  double accumulate_product(const RealElement& h, const DenseField& src, Side side, double scale = 1.0);

  void fill(double v);
  void axpy(double a, const DenseField& x);
  double l1() const;
  double linf() const;
  double dot(const DenseField& o) const;
  /// l1 mass over the sub-box |x_i| <= r (Heisenberg: |x|,|y| <= r, |z| <= r^2).
  double ball_mass(std::int64_t r) const;
  /// Sparse copy, dropping entries below tol; dropped l1 mass is returned via *dropped.
  RealElement to_element(double tol = 0.0, double* dropped = nullptr) const;
  /// Tight radii covering all nonzero entries.
  std::vector<std::int64_t> support_radii() const;

 private:
  std::size_t line_count() const { return data_.size() / static_cast<std::size_t>(len_last_); }
  GroupElement line_base(std::size_t line) const;

  GroupDescriptor group_{};
  std::vector<std::int64_t> radii_;
  std::vector<std::int64_t> strides_;
  std::int64_t len_last_ = 1;
  std::vector<double> data_;
};

/// Radii enlarged so that h*src (or src*h) fits without loss.
std::vector<std::int64_t> product_radii(const RealElement& h, const DenseField& src, DenseField::Side side);

}  // namespace pa
