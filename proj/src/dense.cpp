#include "dense.hpp"

#include <algorithm>
#include <cmath>

namespace pa {

DenseField::DenseField(const GroupDescriptor& group, std::vector<std::int64_t> radii)
    : group_(group), radii_(std::move(radii)) {
  if (static_cast<int>(radii_.size()) != group.rank) throw InvalidArgument("dense field radii do not match group rank");
  strides_.assign(radii_.size(), 1);
  std::size_t total = 1;
  for (int i = group.rank - 1; i >= 0; --i) {
    auto ui = static_cast<std::size_t>(i);
    if (radii_[ui] < 0) throw InvalidArgument("dense field radii must be nonnegative");
    strides_[ui] = static_cast<std::int64_t>(total);
    total *= static_cast<std::size_t>(2 * radii_[ui] + 1);
  }
  len_last_ = 2 * radii_.back() + 1;
  data_.assign(total, 0.0);
}

std::ptrdiff_t DenseField::index_of(const GroupElement& g) const {
  if (g.group() != group_) throw InvalidArgument("dense field: element from a different group");
  std::int64_t idx = 0;
  for (int i = 0; i < group_.rank; ++i) {
    auto ui = static_cast<std::size_t>(i);
    std::int64_t c = g[i];
    if (c < -radii_[ui] || c > radii_[ui]) return -1;
    idx += (c + radii_[ui]) * strides_[ui];
  }
  return static_cast<std::ptrdiff_t>(idx);
}

GroupElement DenseField::element_at(std::size_t idx) const {
  std::vector<std::int64_t> e(radii_.size());
  auto rem = static_cast<std::int64_t>(idx);
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    e[i] = rem / strides_[i] - radii_[i];
    rem %= strides_[i];
  }
  return GroupElement(group_, e);
}

double DenseField::get(const GroupElement& g) const {
  auto i = index_of(g);
  return i < 0 ? 0.0 : data_[static_cast<std::size_t>(i)];
}

void DenseField::set(const GroupElement& g, double v) {
  auto i = index_of(g);
  if (i < 0) throw InvalidArgument("dense field: site " + g.to_string() + " outside box");
  data_[static_cast<std::size_t>(i)] = v;
}

double DenseField::add(const RealElement& h, double scale) {
  double dropped = 0;
  for (const auto& [g, c] : h.terms()) {
    auto i = index_of(g);
    if (i < 0) {
      dropped += std::fabs(scale * c);
    } else {
      data_[static_cast<std::size_t>(i)] += scale * c;
    }
  }
  return dropped;
}

GroupElement DenseField::line_base(std::size_t line) const {
  std::vector<std::int64_t> e(radii_.size(), 0);
  auto rem = static_cast<std::int64_t>(line) * len_last_;
  for (std::size_t i = 0; i + 1 < radii_.size(); ++i) {
    e[i] = rem / strides_[i] - radii_[i];
    rem %= strides_[i];
  }
  return GroupElement(group_, e);
}

double DenseField::accumulate_product(const RealElement& h, const DenseField& src, Side side, double scale) {
  if (src.group_ != group_ || h.group() != group_) throw InvalidArgument("dense product: mixed groups");
  const int last = group_.rank - 1;
  const std::int64_t src_r = src.radii_.back();
  const std::int64_t dst_r = radii_.back();
  double dropped = 0;
  const std::size_t lines = src.line_count();
  for (const auto& [g, c] : h.terms()) {
    const double a = scale * c;
    for (std::size_t line = 0; line < lines; ++line) {
      const double* s = src.data_.data() + line * static_cast<std::size_t>(src.len_last_);
      // The last coordinate is central and additive, so a whole line moves rigidly.
      GroupElement base = src.line_base(line);
      GroupElement moved = side == Side::left ? mul(g, base) : mul(base, g);
      const std::int64_t shift = moved[last];
      std::vector<std::int64_t> e(moved.exponents().begin(), moved.exponents().end());
      e[static_cast<std::size_t>(last)] = 0;
      std::ptrdiff_t head = index_of(GroupElement(group_, e));
      if (head < 0) {
        for (std::int64_t k = 0; k < src.len_last_; ++k) dropped += std::fabs(a * s[k]);
        continue;
      }
      double* d = data_.data() + (head - dst_r);  // d[z + dst_r] addresses coordinate z; head is z = 0
      for (std::int64_t k = 0; k < src.len_last_; ++k) {
        const double v = s[k];
        if (v == 0.0) continue;
        const std::int64_t z = k - src_r + shift;
        if (z < -dst_r || z > dst_r) {
          dropped += std::fabs(a * v);
        } else {
          d[z + dst_r] += a * v;
        }
      }
    }
  }
  return dropped;
}

void DenseField::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void DenseField::axpy(double a, const DenseField& x) {
  if (x.radii_ != radii_) throw InvalidArgument("dense axpy: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
}

double DenseField::l1() const {
  double s = 0;
  for (double v : data_) s += std::fabs(v);
  return s;
}

double DenseField::linf() const {
  double s = 0;
  for (double v : data_) s = std::max(s, std::fabs(v));
  return s;
}

double DenseField::dot(const DenseField& o) const {
  double s = 0;
  for (std::size_t i = 0; i < data_.size(); ++i) s += data_[i] * o.data_[i];
  return s;
}

double DenseField::ball_mass(std::int64_t r) const {
  std::vector<std::int64_t> lim(radii_.size(), r);
  if (group_.is_heisenberg()) lim[2] = r * r;
  double s = 0;
  for (std::size_t idx = 0; idx < data_.size(); ++idx) {
    if (data_[idx] == 0.0) continue;
    auto rem = static_cast<std::int64_t>(idx);
    bool inside = true;
    for (std::size_t i = 0; i < radii_.size() && inside; ++i) {
      std::int64_t c = rem / strides_[i] - radii_[i];
      rem %= strides_[i];
      inside = std::abs(c) <= lim[i];
    }
    if (inside) s += std::fabs(data_[idx]);
  }
  return s;
}

RealElement DenseField::to_element(double tol, double* dropped) const {
  RealElement out(group_);
  double lost = 0;
  for (std::size_t idx = 0; idx < data_.size(); ++idx) {
    double v = data_[idx];
    if (v == 0.0) continue;
    if (std::fabs(v) < tol) {
      lost += std::fabs(v);
    } else {
      out.add_term(element_at(idx), v);
    }
  }
  if (dropped) *dropped += lost;
  return out;
}

std::vector<std::int64_t> DenseField::support_radii() const {
  std::vector<std::int64_t> r(radii_.size(), 0);
  for (std::size_t idx = 0; idx < data_.size(); ++idx) {
    if (data_[idx] == 0.0) continue;
    auto rem = static_cast<std::int64_t>(idx);
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      r[i] = std::max(r[i], std::abs(rem / strides_[i] - radii_[i]));
      rem %= strides_[i];
    }
  }
  return r;
}

std::vector<std::int64_t> product_radii(const RealElement& h, const DenseField& src, DenseField::Side side) {
  std::vector<std::int64_t> r = src.radii();
  const auto& g = src.group();
  std::int64_t hx = 0, hy = 0;
  std::vector<std::int64_t> hr(r.size(), 0);
  for (const auto& [e, c] : h.terms()) {
    for (std::size_t i = 0; i < r.size(); ++i) hr[i] = std::max(hr[i], std::abs(e[static_cast<int>(i)]));
  }
  if (g.is_heisenberg()) {
    hx = hr[0];
    hy = hr[1];
    // left: z += hz + hx*y ; right: z += hz + x*hy
    std::int64_t extra = side == DenseField::Side::left ? hx * r[1] : r[0] * hy;
    r[2] += hr[2] + extra;
    r[0] += hx;
    r[1] += hy;
  } else {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += hr[i];
  }
  return r;
}

}  // namespace pa
