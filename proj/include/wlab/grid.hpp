#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wlab {

inline constexpr int kMaxDim = 4;

using Coords = std::array<std::int64_t, kMaxDim>;
using Point = std::array<double, kMaxDim>;

/// Thrown for precondition violations (bad indices, out-of-range parameters).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Axis-parallel root cube [corner, corner + side)^n.
struct RootBox {
  int n = 1;
  Point corner{};
  double side = 1.0;

  static RootBox unit(int n);
  /// (-half_side, half_side)^n, the box used for radial weights.
  static RootBox centered(int n, double half_side);

  bool symmetric_about_origin() const;
  bool operator==(const RootBox&) const = default;
};

/// Dyadic cube of the root box: level k, integer coordinates in [0, 2^k).
struct CubeIndex {
  int level = 0;
  Coords coords{};

  bool operator==(const CubeIndex&) const = default;
};

/// The dyadic tree over a root box resolved down to `depth`.
///
/// Cells are the level-`depth` cubes. Flat cell indices are row-major with
/// axis 0 slowest: flat = sum_i c_i * N^(n-1-i), N = 2^depth.
class Grid {
 public:
  Grid(RootBox root, int depth);

  int dim() const { return root_.n; }
  int depth() const { return depth_; }
  const RootBox& root() const { return root_; }

  std::int64_t cells_per_axis() const { return std::int64_t{1} << depth_; }
  std::int64_t cell_count() const { return cell_count_; }
  double cell_width() const { return side(depth_); }
  double cell_volume() const { return volume(depth_); }

  double side(int level) const;
  double volume(int level) const;
  double side(const CubeIndex& q) const { return side(q.level); }
  double volume(const CubeIndex& q) const { return volume(q.level); }

  /// Number of cubes at a level, 2^(n*level).
  std::int64_t level_size(int level) const;
  /// Number of finest cells inside q.
  std::int64_t cells_in(const CubeIndex& q) const;

  bool valid(const CubeIndex& q) const;
  void require(const CubeIndex& q) const;

  CubeIndex root_cube() const { return CubeIndex{}; }
  std::vector<CubeIndex> children(const CubeIndex& q) const;
  CubeIndex parent(const CubeIndex& q) const;
  CubeIndex ancestor(const CubeIndex& q, int level) const;
  bool contains(const CubeIndex& outer, const CubeIndex& inner) const;
  bool disjoint(const CubeIndex& a, const CubeIndex& b) const;

  /// Index of q among the cubes of its level (row-major, axis 0 slowest).
  std::int64_t level_index(const CubeIndex& q) const;
  CubeIndex from_level_index(int level, std::int64_t index) const;

  std::int64_t flat(const Coords& cell) const;
  Coords unflat(std::int64_t flat) const;
  CubeIndex cell_cube(std::int64_t flat) const;

  Point cell_center(std::int64_t flat) const;
  Point lower_corner(const CubeIndex& q) const;
  /// Flat index of the cell containing x (half-open cells; the upper face
  /// of the root box is assigned to the last cell).
  std::int64_t locate(const Point& x) const;
  bool inside(const Point& x) const;

  /// Calls fn(flat) for every finest cell inside q, in increasing flat order.
  void for_each_cell(const CubeIndex& q, const std::function<void(std::int64_t)>& fn) const;
  std::vector<std::int64_t> cells_of(const CubeIndex& q) const;

  bool operator==(const Grid& other) const {
    return root_ == other.root_ && depth_ == other.depth_;
  }

 private:
  RootBox root_;
  int depth_;
  std::int64_t cell_count_;
};

/// Piecewise-constant function: one value per finest cell.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);
  static GridFunction constant(const Grid& grid, double value);
  static GridFunction sample(const Grid& grid, const std::function<double(const Point&)>& fn);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return values_.size(); }

  double min() const;
  double max() const;

  GridFunction abs() const;
  GridFunction map(const std::function<double(double)>& fn) const;
  GridFunction scaled(double c) const;
  GridFunction plus(double c) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// (1/|q|) * integral of f over q.
double average(const GridFunction& f, const CubeIndex& q);
double integral(const GridFunction& f, const CubeIndex& q);
double min_on(const GridFunction& f, const CubeIndex& q);
double max_on(const GridFunction& f, const CubeIndex& q);

/// Magnitude of the order-m derivative tensor: sum over multi-indices
/// |sigma| = m of |D^sigma f|, with m-fold forward differences scaled by the
/// cell width and the last interior difference copied onto boundary cells.
GridFunction discrete_gradient(const GridFunction& f, int order);

/// Multi-indices sigma in N^n with |sigma| = order, lexicographic.
std::vector<std::array<int, kMaxDim>> multi_indices(int n, int order);

std::string to_string(const CubeIndex& q, int n);

}  // namespace wlab
