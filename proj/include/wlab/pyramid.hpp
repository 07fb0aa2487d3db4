#pragma once

#include <span>
#include <vector>

#include "wlab/grid.hpp"

namespace wlab {

/// Per-level aggregates (sum, min, max) of a cell field over every dyadic
/// cube, built bottom-up in one pass. Sums are raw cell-value sums; multiply
/// by the cell volume for integrals or divide by the cell count for averages.
///
/// Children are combined in level-index order, so results do not depend on
/// thread count.
class LevelPyramid {
 public:
  enum Stat : unsigned { kSum = 1u, kMin = 2u, kMax = 4u, kAll = 7u };

  LevelPyramid(const Grid& grid, std::span<const double> cells, unsigned stats = kSum);

  const Grid& grid() const { return grid_; }

  double sum(const CubeIndex& q) const { return at(sum_, q); }
  double min(const CubeIndex& q) const { return at(min_, q); }
  double max(const CubeIndex& q) const { return at(max_, q); }
  double average(const CubeIndex& q) const {
    return sum(q) / static_cast<double>(grid_.cells_in(q));
  }

  std::span<const double> sums(int level) const { return sum_.at(static_cast<std::size_t>(level)); }
  std::span<const double> mins(int level) const { return min_.at(static_cast<std::size_t>(level)); }
  std::span<const double> maxs(int level) const { return max_.at(static_cast<std::size_t>(level)); }

 private:
  double at(const std::vector<std::vector<double>>& table, const CubeIndex& q) const;

  Grid grid_;
  std::vector<std::vector<double>> sum_;
  std::vector<std::vector<double>> min_;
  std::vector<std::vector<double>> max_;
};

/// A member of a cube family: a dyadic cube, or a cube of the same size
/// translated by half its side along some axes. `origin` is the lower corner
/// in units of level+1 cells, so dyadic cubes have even origins.
struct FamilyCube {
  int level = 0;
  Coords origin{};

  bool shifted(int n) const;
  bool operator==(const FamilyCube&) const = default;
};

FamilyCube as_family_cube(const CubeIndex& q, int n);

/// Dyadic subcubes of the root down to `depth`, optionally augmented with the
/// 2^n - 1 half-shifted translates at every level below the finest.
class CubeFamily {
 public:
  CubeFamily(const Grid& grid, bool shifted);

  const std::vector<FamilyCube>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool shifted() const { return shifted_; }
  int depth() const { return depth_; }

  /// Aggregates over a member from a pyramid built on the same grid.
  double sum(const LevelPyramid& p, const FamilyCube& c) const;
  double min(const LevelPyramid& p, const FamilyCube& c) const;
  double max(const LevelPyramid& p, const FamilyCube& c) const;
  std::int64_t cell_count(const FamilyCube& c) const;
  double volume(const FamilyCube& c) const;
  /// Flat indices of the finest cells inside c, increasing.
  std::vector<std::int64_t> cells(const FamilyCube& c) const;

 private:
  template <class Op>
  double combine(const LevelPyramid& p, const FamilyCube& c, Op op, int which) const;

  Grid grid_;
  bool shifted_;
  int depth_;
  std::vector<FamilyCube> members_;
};

}  // namespace wlab
