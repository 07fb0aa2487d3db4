#include "wlab/pyramid.hpp"

#include <algorithm>
#include <limits>

namespace wlab {

LevelPyramid::LevelPyramid(const Grid& grid, std::span<const double> cells, unsigned stats)
    : grid_(grid) {
  if (static_cast<std::int64_t>(cells.size()) != grid.cell_count()) {
    throw DomainError("pyramid input must have one value per cell");
  }
  const int d = grid.depth();
  const int n = grid.dim();
  const std::size_t levels = static_cast<std::size_t>(d) + 1;
  if (stats & kSum) sum_.resize(levels);
  if (stats & kMin) min_.resize(levels);
  if (stats & kMax) max_.resize(levels);
  if (stats & kSum) sum_[d].assign(cells.begin(), cells.end());
  if (stats & kMin) min_[d].assign(cells.begin(), cells.end());
  if (stats & kMax) max_[d].assign(cells.begin(), cells.end());

  for (int k = d - 1; k >= 0; --k) {
    const std::int64_t count = grid.level_size(k);
    const std::int64_t m = std::int64_t{1} << k;
    if (stats & kSum) sum_[k].assign(static_cast<std::size_t>(count), 0.0);
    if (stats & kMin) min_[k].assign(static_cast<std::size_t>(count), std::numeric_limits<double>::infinity());
    if (stats & kMax) max_[k].assign(static_cast<std::size_t>(count), -std::numeric_limits<double>::infinity());
    for (std::int64_t idx = 0; idx < count; ++idx) {
      // decode coordinates at level k, then visit the 2^n children at level k+1
      Coords c{};
      std::int64_t rest = idx;
      for (int i = n - 1; i >= 0; --i) {
        c[i] = rest % m;
        rest /= m;
      }
      for (int bits = 0; bits < (1 << n); ++bits) {
        std::int64_t child = 0;
        for (int i = 0; i < n; ++i) {
          child = child * (2 * m) + 2 * c[i] + ((bits >> (n - 1 - i)) & 1);
        }
        const auto ci = static_cast<std::size_t>(child);
        const auto pi = static_cast<std::size_t>(idx);
        if (stats & kSum) sum_[k][pi] += sum_[k + 1][ci];
        if (stats & kMin) min_[k][pi] = std::min(min_[k][pi], min_[k + 1][ci]);
        if (stats & kMax) max_[k][pi] = std::max(max_[k][pi], max_[k + 1][ci]);
      }
    }
  }
}

double LevelPyramid::at(const std::vector<std::vector<double>>& table, const CubeIndex& q) const {
  if (table.empty()) throw DomainError("statistic was not requested when the pyramid was built");
  grid_.require(q);
  return table[static_cast<std::size_t>(q.level)][static_cast<std::size_t>(grid_.level_index(q))];
}

bool FamilyCube::shifted(int n) const {
  for (int i = 0; i < n; ++i) {
    if (origin[i] % 2 != 0) return true;
  }
  return false;
}

FamilyCube as_family_cube(const CubeIndex& q, int n) {
  FamilyCube c;
  c.level = q.level;
  for (int i = 0; i < n; ++i) c.origin[i] = 2 * q.coords[i];
  return c;
}

CubeFamily::CubeFamily(const Grid& grid, bool shifted)
    : grid_(grid), shifted_(shifted), depth_(grid.depth()) {
  const int n = grid.dim();
  for (int k = 0; k <= depth_; ++k) {
    for (std::int64_t idx = 0; idx < grid.level_size(k); ++idx) {
      members_.push_back(as_family_cube(grid.from_level_index(k, idx), n));
    }
  }
  if (!shifted_) return;
  // half-shifted translates: origin odd along the shifted axes, and the cube
  // must stay inside the root, so an odd origin ranges over 1 .. 2^(k+1) - 3
  for (int k = 0; k < depth_; ++k) {
    const std::int64_t m = std::int64_t{1} << k;
    for (int pattern = 1; pattern < (1 << n); ++pattern) {
      Coords extent{};
      std::int64_t total = 1;
      for (int i = 0; i < n; ++i) {
        const bool odd = (pattern >> (n - 1 - i)) & 1;
        extent[i] = odd ? m - 1 : m;
        total *= extent[i];
      }
      for (std::int64_t idx = 0; idx < total; ++idx) {
        FamilyCube c;
        c.level = k;
        std::int64_t rest = idx;
        for (int i = n - 1; i >= 0; --i) {
          const std::int64_t j = rest % extent[i];
          rest /= extent[i];
          const bool odd = (pattern >> (n - 1 - i)) & 1;
          c.origin[i] = 2 * j + (odd ? 1 : 0);
        }
        members_.push_back(c);
      }
    }
  }
}

template <class Op>
double CubeFamily::combine(const LevelPyramid& p, const FamilyCube& c, Op op, int which) const {
  const int n = grid_.dim();
  auto table = [&](int level) {
    return which == 0 ? p.sums(level) : which == 1 ? p.mins(level) : p.maxs(level);
  };
  if (!c.shifted(n)) {
    CubeIndex q;
    q.level = c.level;
    for (int i = 0; i < n; ++i) q.coords[i] = c.origin[i] / 2;
    return table(c.level)[static_cast<std::size_t>(grid_.level_index(q))];
  }
  // a shifted cube at level k is exactly 2^n dyadic cubes at level k+1
  const auto t = table(c.level + 1);
  double acc = 0.0;
  bool first = true;
  for (int bits = 0; bits < (1 << n); ++bits) {
    CubeIndex q;
    q.level = c.level + 1;
    for (int i = 0; i < n; ++i) q.coords[i] = c.origin[i] + ((bits >> (n - 1 - i)) & 1);
    const double v = t[static_cast<std::size_t>(grid_.level_index(q))];
    acc = first ? v : op(acc, v);
    first = false;
  }
  return acc;
}

double CubeFamily::sum(const LevelPyramid& p, const FamilyCube& c) const {
  return combine(p, c, [](double a, double b) { return a + b; }, 0);
}

double CubeFamily::min(const LevelPyramid& p, const FamilyCube& c) const {
  return combine(p, c, [](double a, double b) { return std::min(a, b); }, 1);
}

double CubeFamily::max(const LevelPyramid& p, const FamilyCube& c) const {
  return combine(p, c, [](double a, double b) { return std::max(a, b); }, 2);
}

std::int64_t CubeFamily::cell_count(const FamilyCube& c) const {
  return std::int64_t{1} << (grid_.dim() * (depth_ - c.level));
}

double CubeFamily::volume(const FamilyCube& c) const { return grid_.volume(c.level); }

std::vector<std::int64_t> CubeFamily::cells(const FamilyCube& c) const {
  const int n = grid_.dim();
  const std::int64_t span = std::int64_t{1} << (depth_ - c.level);
  Coords lo{};
  for (int i = 0; i < n; ++i) lo[i] = (c.origin[i] << (depth_ - c.level)) >> 1;
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(cell_count(c)));
  Coords cur = lo;
  while (true) {
    out.push_back(grid_.flat(cur));
    int axis = n - 1;
    while (axis >= 0) {
      if (++cur[axis] < lo[axis] + span) break;
      cur[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

}  // namespace wlab
