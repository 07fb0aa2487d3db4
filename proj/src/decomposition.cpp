#include "wlab/decomposition.hpp"

#include <cmath>

#include "wlab/pyramid.hpp"

namespace wlab {

GridFunction CZDecomposition::bad_function(std::size_t j) const {
  const BadPart& b = bad.at(j);
  const Grid& grid = good.grid();
  std::vector<double> v(static_cast<std::size_t>(grid.cell_count()), 0.0);
  std::size_t k = 0;
  grid.for_each_cell(b.cube, [&](std::int64_t c) { v[static_cast<std::size_t>(c)] = b.values[k++]; });
  return GridFunction(grid, std::move(v));
}

CZDecomposition cz_decompose(const GridFunction& h, const CubeIndex& q, double L) {
  const Grid& grid = h.grid();
  grid.require(q);
  if (!(L > 1.0)) throw DomainError("decomposition level must exceed 1");
  std::vector<double> a(h.values().begin(), h.values().end());
  for (double& x : a) x = std::fabs(x);
  // the same summation tree serves the selection and the good part, so for
  // nonnegative h the stopping bounds hold bit-exactly
  const LevelPyramid abs_pyr(grid, a, LevelPyramid::kSum);
  const LevelPyramid signed_pyr(grid, h.values(), LevelPyramid::kSum);
  auto avg = [&](const LevelPyramid& p, const CubeIndex& c) {
    return p.sum(c) / static_cast<double>(grid.cells_in(c));
  };

  CZDecomposition cz{q, L, avg(abs_pyr, q), {}, {}, 0, h, {}};
  if (cz.average > L) throw DomainError("average of |h| on the cube exceeds the level L");

  std::vector<CubeIndex> stack{q};
  while (!stack.empty()) {
    const CubeIndex c = stack.back();
    stack.pop_back();
    if (!(c == q) && avg(abs_pyr, c) > L) {
      cz.stopping.push_back(c);
      continue;
    }
    if (c.level < grid.depth()) {
      auto kids = grid.children(c);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
  }

  cz.omega.assign(static_cast<std::size_t>(grid.cell_count()), 0);
  std::vector<double> good(h.values().begin(), h.values().end());
  for (const CubeIndex& s : cz.stopping) {
    const double mean = avg(signed_pyr, s);
    BadPart b{s, {}};
    b.values.reserve(static_cast<std::size_t>(grid.cells_in(s)));
    grid.for_each_cell(s, [&](std::int64_t cell) {
      const auto i = static_cast<std::size_t>(cell);
      cz.omega[i] = 1;
      b.values.push_back(h[cell] - mean);
      good[i] = mean;
    });
    cz.omega_cells += grid.cells_in(s);
    cz.bad.push_back(std::move(b));
  }
  cz.good = GridFunction(grid, std::move(good));
  return cz;
}

}  // namespace wlab
