#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chiraltop {

enum class SpaceKind { torus, sphere, ball5 };

const char* to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

// Regular grid over a base space. Torus axes are periodic with coordinates 2*pi*i/n.
// Sphere and ball5 grids live on the unit cube with coordinates i/(n-1); for a sphere
// every boundary node of the cube is the same point of S^d.
class BaseGrid {
 public:
  BaseGrid() = default;
  BaseGrid(SpaceKind kind, int dim, std::vector<int> shape);

  SpaceKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return size_; }

  std::vector<int> multi_index(std::size_t point) const;
  std::size_t flat_index(std::span<const int> index) const;
  int coordinate_index(std::size_t point, int axis) const;
  std::vector<double> coordinates(std::size_t point) const;

  // Neighbor one step along +axis; empty past the cube faces of sphere/ball5 grids.
  std::optional<std::size_t> neighbor(std::size_t point, int axis) const;
  std::optional<std::size_t> neighbor_back(std::size_t point, int axis) const;

  bool on_boundary(std::size_t point) const;
  // Boundary nodes in increasing flat order (sphere and ball5 only).
  const std::vector<std::size_t>& boundary_points() const { return boundary_; }
  std::size_t base_point() const { return 0; }

  // Sphere grids: the point of S^d in R^(d+1) that a node represents. With p = 2t - 1 and
  // y = tan(pi p / 2) per axis, x = (2y, 1 - |y|^2) / (1 + |y|^2): the cube centre goes to
  // the north pole (0,...,0,1) and the whole boundary to the south pole.
  std::vector<double> sphere_point(std::size_t point) const;
  // Ball5 grids: (2t-1)/|2t-1|, the radial projection of a boundary node onto S^4.
  std::vector<double> radial_direction(std::size_t point) const;

  bool operator==(const BaseGrid& other) const {
    return kind_ == other.kind_ && dim_ == other.dim_ && shape_ == other.shape_;
  }
  std::string describe() const;

 private:
  SpaceKind kind_ = SpaceKind::torus;
  int dim_ = 0;
  std::vector<int> shape_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  std::vector<std::int64_t> forward_;
  std::vector<std::int64_t> backward_;
  std::vector<std::size_t> boundary_;
  std::vector<char> is_boundary_;
};

BaseGrid make_grid(SpaceKind kind, int dim, std::vector<int> shape);

struct CycleHandle {
  int degree = 0;
  std::vector<int> axes;         // ascending; all axes for a whole-space handle
  std::vector<int> base_offset;  // full multi-index of the transverse position
  bool whole_space = false;

  // 1-based axis digits such as "12", or "S" for a whole-space handle.
  std::string label() const;
};

std::vector<CycleHandle> enumerate_cycles(const BaseGrid& grid, int degree, std::vector<int> offset = {});

struct Cell {
  // corners[mask]: bit b of mask set means one step along axes[b].
  std::vector<std::size_t> corners;
  int orientation = 1;
};

std::vector<Cell> cells(const BaseGrid& grid, const CycleHandle& cycle);
// All grid points lying on the cycle (sub-torus, or every node for whole-space handles).
std::vector<std::size_t> cycle_points(const BaseGrid& grid, const CycleHandle& cycle);

// Deterministic spanning forest for transporting frames. Torus: single root at node 0,
// parent is one step back along the last axis with a nonzero index. Sphere and ball5:
// every boundary node is a root and an interior node steps toward its nearest cube face
// (lowest axis on ties). `order` lists nodes with every parent before its children.
struct SweepTree {
  std::vector<std::size_t> order;
  std::vector<std::int64_t> parent;  // -1 for roots
};

SweepTree sweep_tree(const BaseGrid& grid);

}  // namespace chiraltop
