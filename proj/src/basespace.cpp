#include "chiraltop/basespace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chiraltop/error.hpp"

namespace chiraltop {

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::torus: return "torus";
    case SpaceKind::sphere: return "sphere";
    case SpaceKind::ball5: return "ball5";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "torus") return SpaceKind::torus;
  if (name == "sphere") return SpaceKind::sphere;
  if (name == "ball5") return SpaceKind::ball5;
  throw Error(ErrorKind::UnsupportedSpace, "unknown space kind '" + name + "'");
}

BaseGrid::BaseGrid(SpaceKind kind, int dim, std::vector<int> shape)
    : kind_(kind), dim_(dim), shape_(std::move(shape)) {
  const bool dim_ok = kind == SpaceKind::ball5 ? dim == 5 : (dim >= 1 && dim <= 4);
  if (!dim_ok)
    throw Error(ErrorKind::UnsupportedSpace,
                std::string(to_string(kind)) + " grids do not support dimension " + std::to_string(dim));
  if (static_cast<int>(shape_.size()) != dim)
    throw Error(ErrorKind::UnsupportedSpace, "grid shape has " + std::to_string(shape_.size()) +
                                                 " entries for dimension " + std::to_string(dim));
  for (int n : shape_)
    if (n < 4) throw Error(ErrorKind::UnsupportedSpace, "grid shape entries must be at least 4");

  strides_.assign(dim, 1);
  for (int a = dim - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * static_cast<std::size_t>(shape_[a + 1]);
  size_ = strides_[0] * static_cast<std::size_t>(shape_[0]);

  forward_.assign(size_ * dim, -1);
  backward_.assign(size_ * dim, -1);
  is_boundary_.assign(size_, 0);
  const bool periodic = kind == SpaceKind::torus;
  std::vector<int> idx(dim, 0);
  for (std::size_t p = 0; p < size_; ++p) {
    bool boundary = false;
    for (int a = 0; a < dim; ++a) {
      const int i = idx[a];
      const int n = shape_[a];
      if (i == 0 || i == n - 1) boundary = true;
      const std::size_t s = strides_[a];
      if (i + 1 < n) forward_[p * dim + a] = static_cast<std::int64_t>(p + s);
      else if (periodic) forward_[p * dim + a] = static_cast<std::int64_t>(p - (n - 1) * s);
      if (i > 0) backward_[p * dim + a] = static_cast<std::int64_t>(p - s);
      else if (periodic) backward_[p * dim + a] = static_cast<std::int64_t>(p + (n - 1) * s);
    }
    if (!periodic && boundary) {
      is_boundary_[p] = 1;
      boundary_.push_back(p);
    }
    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[a] < shape_[a]) break;
      idx[a] = 0;
    }
  }
}

std::vector<int> BaseGrid::multi_index(std::size_t point) const {
  std::vector<int> idx(dim_);
  for (int a = 0; a < dim_; ++a) idx[a] = static_cast<int>((point / strides_[a]) % shape_[a]);
  return idx;
}

std::size_t BaseGrid::flat_index(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "multi-index has wrong length");
  std::size_t p = 0;
  for (int a = 0; a < dim_; ++a) {
    if (index[a] < 0 || index[a] >= shape_[a]) throw Error(ErrorKind::OutOfRange, "multi-index outside the grid");
    p += strides_[a] * static_cast<std::size_t>(index[a]);
  }
  return p;
}

int BaseGrid::coordinate_index(std::size_t point, int axis) const {
  return static_cast<int>((point / strides_[axis]) % shape_[axis]);
}

std::vector<double> BaseGrid::coordinates(std::size_t point) const {
  std::vector<double> x(dim_);
  for (int a = 0; a < dim_; ++a) {
    const int i = coordinate_index(point, a);
    x[a] = kind_ == SpaceKind::torus ? 2.0 * std::numbers::pi * i / shape_[a] : static_cast<double>(i) / (shape_[a] - 1);
  }
  return x;
}

std::optional<std::size_t> BaseGrid::neighbor(std::size_t point, int axis) const {
  const auto q = forward_[point * dim_ + axis];
  if (q < 0) return std::nullopt;
  return static_cast<std::size_t>(q);
}

std::optional<std::size_t> BaseGrid::neighbor_back(std::size_t point, int axis) const {
  const auto q = backward_[point * dim_ + axis];
  if (q < 0) return std::nullopt;
  return static_cast<std::size_t>(q);
}

bool BaseGrid::on_boundary(std::size_t point) const { return is_boundary_[point] != 0; }

std::vector<double> BaseGrid::sphere_point(std::size_t point) const {
  if (kind_ != SpaceKind::sphere) throw Error(ErrorKind::UnsupportedSpace, "sphere_point needs a sphere grid");
  const auto t = coordinates(point);
  std::vector<double> p(dim_);
  for (int a = 0; a < dim_; ++a) p[a] = 2.0 * t[a] - 1.0;
  std::vector<double> x(dim_ + 1, 0.0);
  if (on_boundary(point)) {
    x[dim_] = -1.0;
    return x;
  }
  // Each axis of the open cube is stretched onto the real line by tan(pi p / 2), then the
  // inverse stereographic projection sends the origin to the north pole and infinity
  // (the whole cube boundary) to the south pole.
  std::vector<double> y(dim_);
  double y2 = 0.0;
  for (int a = 0; a < dim_; ++a) {
    y[a] = std::tan(0.5 * std::numbers::pi * p[a]);
    y2 += y[a] * y[a];
  }
  for (int a = 0; a < dim_; ++a) x[a] = 2.0 * y[a] / (1.0 + y2);
  x[dim_] = (1.0 - y2) / (1.0 + y2);
  return x;
}

std::vector<double> BaseGrid::radial_direction(std::size_t point) const {
  if (kind_ != SpaceKind::ball5) throw Error(ErrorKind::UnsupportedSpace, "radial_direction needs a ball5 grid");
  const auto t = coordinates(point);
  std::vector<double> k(dim_);
  double r2 = 0.0;
  for (int a = 0; a < dim_; ++a) {
    k[a] = 2.0 * t[a] - 1.0;
    r2 += k[a] * k[a];
  }
  const double r = std::sqrt(r2);
  if (r == 0.0) throw Error(ErrorKind::OutOfRange, "radial_direction is undefined at the centre");
  for (auto& v : k) v /= r;
  return k;
}

std::string BaseGrid::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << ':';
  for (int a = 0; a < dim_; ++a) os << (a ? "x" : "") << shape_[a];
  return os.str();
}

BaseGrid make_grid(SpaceKind kind, int dim, std::vector<int> shape) { return BaseGrid(kind, dim, std::move(shape)); }

std::string CycleHandle::label() const {
  if (whole_space) return "S";
  std::string s;
  for (int a : axes) s += std::to_string(a + 1);
  return s;
}

std::vector<CycleHandle> enumerate_cycles(const BaseGrid& grid, int degree, std::vector<int> offset) {
  const int d = grid.dim();
  if (degree < 1 || degree > d)
    throw Error(ErrorKind::DegreeOutOfRange,
                "cycle degree " + std::to_string(degree) + " outside 1.." + std::to_string(d));
  if (offset.empty()) offset.assign(d, 0);
  if (static_cast<int>(offset.size()) != d) throw Error(ErrorKind::DimensionMismatch, "cycle offset has wrong length");
  for (int a = 0; a < d; ++a)
    if (offset[a] < 0 || offset[a] >= grid.shape()[a]) throw Error(ErrorKind::OutOfRange, "cycle offset outside grid");

  std::vector<CycleHandle> out;
  if (grid.kind() != SpaceKind::torus) {
    if (degree == d) {
      CycleHandle h{degree, {}, std::vector<int>(d, 0), true};
      for (int a = 0; a < d; ++a) h.axes.push_back(a);
      out.push_back(std::move(h));
    }
    return out;
  }
  // Axis subsets in lexicographic order.
  std::vector<int> pick(degree);
  for (int i = 0; i < degree; ++i) pick[i] = i;
  while (true) {
    out.push_back(CycleHandle{degree, pick, offset, false});
    int i = degree - 1;
    while (i >= 0 && pick[i] == d - degree + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < degree; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

namespace {

// Walks every lower-corner position of the cycle and calls fn(corner point).
template <class Fn>
void for_each_base_corner(const BaseGrid& grid, const CycleHandle& cycle, Fn&& fn) {
  const int k = static_cast<int>(cycle.axes.size());
  const bool periodic = grid.kind() == SpaceKind::torus;
  std::vector<int> idx = cycle.whole_space ? std::vector<int>(grid.dim(), 0) : cycle.base_offset;
  std::vector<int> limit(k);
  for (int b = 0; b < k; ++b) limit[b] = grid.shape()[cycle.axes[b]] - (periodic ? 0 : 1);
  std::vector<int> counter(k, 0);
  while (true) {
    for (int b = 0; b < k; ++b) {
      const int a = cycle.axes[b];
      const int start = cycle.whole_space ? 0 : cycle.base_offset[a];
      idx[a] = periodic ? (start + counter[b]) % grid.shape()[a] : counter[b];
    }
    fn(grid.flat_index(idx));
    int b = k - 1;
    while (b >= 0 && ++counter[b] == limit[b]) counter[b--] = 0;
    if (b < 0) break;
  }
}

}  // namespace

std::vector<Cell> cells(const BaseGrid& grid, const CycleHandle& cycle) {
  const int k = static_cast<int>(cycle.axes.size());
  std::vector<Cell> out;
  for_each_base_corner(grid, cycle, [&](std::size_t base) {
    Cell c;
    c.corners.assign(std::size_t{1} << k, base);
    for (std::size_t mask = 1; mask < c.corners.size(); ++mask) {
      // Build from the corner with the highest set bit removed.
      int top = 0;
      while ((mask >> (top + 1)) != 0) ++top;
      const std::size_t from = c.corners[mask & ~(std::size_t{1} << top)];
      c.corners[mask] = *grid.neighbor(from, cycle.axes[top]);
    }
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<std::size_t> cycle_points(const BaseGrid& grid, const CycleHandle& cycle) {
  if (cycle.whole_space) {
    std::vector<std::size_t> all(grid.size());
    for (std::size_t p = 0; p < all.size(); ++p) all[p] = p;
    return all;
  }
  std::vector<std::size_t> out;
  for_each_base_corner(grid, cycle, [&](std::size_t p) { out.push_back(p); });
  return out;
}

SweepTree sweep_tree(const BaseGrid& grid) {
  SweepTree t;
  const std::size_t n = grid.size();
  t.parent.assign(n, -1);
  if (grid.kind() == SpaceKind::torus) {
    t.order.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
      t.order[p] = p;
      for (int a = grid.dim() - 1; a >= 0; --a) {
        if (grid.coordinate_index(p, a) > 0) {
          t.parent[p] = static_cast<std::int64_t>(*grid.neighbor_back(p, a));
          break;
        }
      }
    }
    return t;
  }
  // Layer = distance to the nearest face; parents sit one layer lower.
  std::vector<int> layer(n, 0);
  int max_layer = 0;
  for (std::size_t p = 0; p < n; ++p) {
    int best = -1, best_axis = 0, best_dir = 0;
    for (int a = 0; a < grid.dim(); ++a) {
      const int i = grid.coordinate_index(p, a);
      const int lo = i, hi = grid.shape()[a] - 1 - i;
      const int dist = std::min(lo, hi);
      if (best < 0 || dist < best) {
        best = dist;
        best_axis = a;
        best_dir = lo <= hi ? -1 : +1;
      }
    }
    layer[p] = best;
    max_layer = std::max(max_layer, best);
    if (best > 0) {
      const auto q = best_dir < 0 ? grid.neighbor_back(p, best_axis) : grid.neighbor(p, best_axis);
      t.parent[p] = static_cast<std::int64_t>(*q);
    }
  }
  t.order.reserve(n);
  for (int l = 0; l <= max_layer; ++l)
    for (std::size_t p = 0; p < n; ++p)
      if (layer[p] == l) t.order.push_back(p);
  return t;
}

}  // namespace chiraltop
