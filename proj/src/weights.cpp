#include "wlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wlab/norms.hpp"

namespace wlab {

Weight Weight::build(GridFunction density, std::vector<double> masses, bool power, double delta) {
  const Grid grid = density.grid();
  LevelPyramid pyr(grid, density.values(), LevelPyramid::kAll);
  LevelPyramid mass_pyr(grid, masses, LevelPyramid::kSum);
  auto s = std::make_shared<const State>(
      State{std::move(density), std::move(masses), std::move(pyr), std::move(mass_pyr), power, delta});
  return Weight(std::move(s));
}

Weight Weight::from_density(GridFunction density) {
  for (double v : density.values()) {
    if (!(v > 0.0)) throw DomainError("weight values must be strictly positive");
  }
  std::vector<double> masses(density.values().begin(), density.values().end());
  const double cv = density.grid().cell_volume();
  for (double& m : masses) m *= cv;
  return build(std::move(density), std::move(masses), false, 0.0);
}

Weight Weight::unit(const Grid& grid) { return from_density(GridFunction::constant(grid, 1.0)); }

Weight Weight::power(const Grid& grid, double delta, Exec exec) {
  std::vector<double> masses(static_cast<std::size_t>(grid.cell_count()));
  kernels::power_cell_masses(grid, delta, masses, exec);
  std::vector<double> dens(masses);
  const double cv = grid.cell_volume();
  for (double& d : dens) d /= cv;
  return build(GridFunction(grid, std::move(dens)), std::move(masses), true, delta);
}

std::string Weight::describe() const {
  std::ostringstream os;
  if (is_power()) {
    os << "power(delta=" << delta() << ",n=" << grid().dim() << ")";
  } else {
    os << "grid(n=" << grid().dim() << ",depth=" << grid().depth() << ")";
  }
  return os.str();
}

Measure::Measure(Kind kind, const Grid& grid, std::vector<double> masses)
    : kind_(kind), grid_(std::make_shared<const Grid>(grid)) {
  pyramid_ = std::make_shared<const LevelPyramid>(grid, masses, LevelPyramid::kSum);
  masses_ = std::make_shared<const std::vector<double>>(std::move(masses));
}

Measure Measure::lebesgue(const Grid& grid) {
  return Measure(Kind::Lebesgue, grid,
                 std::vector<double>(static_cast<std::size_t>(grid.cell_count()), grid.cell_volume()));
}

Measure Measure::density(const GridFunction& d) {
  std::vector<double> m(d.values().begin(), d.values().end());
  const double cv = d.grid().cell_volume();
  for (double& x : m) {
    if (x < 0.0) throw DomainError("measure density must be nonnegative");
    x *= cv;
  }
  return Measure(Kind::Density, d.grid(), std::move(m));
}

Measure Measure::atomic(const Grid& grid, const std::vector<std::pair<Point, double>>& atoms) {
  std::vector<double> m(static_cast<std::size_t>(grid.cell_count()), 0.0);
  for (const auto& [x, mass] : atoms) {
    if (!grid.inside(x)) throw DomainError("atom lies outside the root box");
    if (!(mass > 0.0)) throw DomainError("atom masses must be positive");
    m[static_cast<std::size_t>(grid.locate(x))] += mass;
  }
  return Measure(Kind::Atomic, grid, std::move(m));
}

Measure Measure::of_weight(const Weight& w) {
  return Measure(Kind::FromWeight, w.grid(),
                 std::vector<double>(w.cell_masses().begin(), w.cell_masses().end()));
}

double Measure::mass(const CubeIndex& q) const { return pyramid_->sum(q); }

double Measure::total() const { return pyramid_->sum(grid_->root_cube()); }

double weighted_average(const GridFunction& f, const Weight& w, const CubeIndex& q) {
  if (!(f.grid() == w.grid())) throw DomainError("function and weight live on different grids");
  const auto m = w.cell_masses();
  double num = 0.0, den = 0.0;
  f.grid().for_each_cell(q, [&](std::int64_t c) {
    num += f[c] * m[static_cast<std::size_t>(c)];
    den += m[static_cast<std::size_t>(c)];
  });
  if (!(den > 0.0)) throw DomainError("weight has no mass on the cube");
  return num / den;
}

namespace {

ConstantValue to_value(const CubeFamily& family, const kernels::Best& b) {
  if (b.index < 0) throw DomainError("cube family is empty");
  return ConstantValue{b.value, family.members()[static_cast<std::size_t>(b.index)]};
}

LevelPyramid power_pyramid(const Weight& w, double exponent) {
  std::vector<double> v(w.density().values().begin(), w.density().values().end());
  for (double& x : v) x = std::pow(x, exponent);
  return LevelPyramid(w.grid(), v, LevelPyramid::kSum);
}

}  // namespace

ConstantValue two_weight_ap(const Weight& u, const Weight& v, double p, const CubeFamily& family,
                            Exec exec) {
  if (!(p >= 1.0)) throw DomainError("A_p constants need p >= 1");
  if (!(u.grid() == v.grid())) throw DomainError("weights live on different grids");
  const auto& members = family.members();
  const auto count = static_cast<std::int64_t>(members.size());
  const LevelPyramid& pu = u.pyramid();
  if (p == 1.0) {
    const LevelPyramid& pv = v.pyramid();
    return to_value(family, kernels::argmax(count, [&](std::int64_t i) {
      const FamilyCube& c = members[static_cast<std::size_t>(i)];
      const double avg = family.sum(pu, c) / static_cast<double>(family.cell_count(c));
      return avg / family.min(pv, c);
    }, exec));
  }
  const LevelPyramid dual = power_pyramid(v, -1.0 / (p - 1.0));
  return to_value(family, kernels::argmax(count, [&](std::int64_t i) {
    const FamilyCube& c = members[static_cast<std::size_t>(i)];
    const auto cells = static_cast<double>(family.cell_count(c));
    return (family.sum(pu, c) / cells) * std::pow(family.sum(dual, c) / cells, p - 1.0);
  }, exec));
}

ConstantValue ap_constant(const Weight& w, double p, const CubeFamily& family, Exec exec) {
  return two_weight_ap(w, w, p, family, exec);
}

ConstantValue a1_constant(const Weight& w, const CubeFamily& family, Exec exec) {
  return ap_constant(w, 1.0, family, exec);
}

ConstantValue ap1_constant(const Weight& w, double p, const CubeFamily& family, Exec exec) {
  if (!(p > 1.0)) throw DomainError("A_{p,1} needs p > 1");
  const double pd = p / (p - 1.0);
  const auto& members = family.members();
  const auto dens = w.density().values();
  return to_value(family, kernels::argmax(static_cast<std::int64_t>(members.size()), [&](std::int64_t i) {
    const FamilyCube& c = members[static_cast<std::size_t>(i)];
    const std::vector<std::int64_t> cells = family.cells(c);
    std::vector<double> inv(cells.size()), mass(cells.size());
    double total = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const double d = dens[static_cast<std::size_t>(cells[k])];
      inv[k] = 1.0 / d;
      mass[k] = d;
      total += d;
    }
    // the measure w dx / |Q| gives cell c the mass w_c / (cells in Q)
    const auto n = static_cast<double>(cells.size());
    return (total / n) * std::pow(weak_norm(inv, mass, pd, n), p);
  }, exec));
}

ConstantValue rhinf_constant(const Weight& w, const CubeFamily& family, Exec exec) {
  const auto& members = family.members();
  const LevelPyramid& pw = w.pyramid();
  return to_value(family, kernels::argmax(static_cast<std::int64_t>(members.size()), [&](std::int64_t i) {
    const FamilyCube& c = members[static_cast<std::size_t>(i)];
    const double avg = family.sum(pw, c) / static_cast<double>(family.cell_count(c));
    return family.max(pw, c) / avg;
  }, exec));
}

ConstantValue ainf_fujii_wilson(const Weight& w, Exec exec) {
  const Grid& grid = w.grid();
  const int n = grid.dim();
  const int d = grid.depth();
  const auto v = w.density().values();
  const LevelPyramid& pw = w.pyramid();
  const auto cells = static_cast<std::size_t>(grid.cell_count());

  // running[x] = max over dyadic P with x in P, level(P) >= k, of avg_P w,
  // which is the dyadic maximal function local to the level-k cube around x
  std::vector<double> running(v.begin(), v.end());
  std::vector<double> centered(cells, 0.0);
  kernels::Best best;
  FamilyCube best_cube;

  for (int k = d; k >= 0; --k) {
    const int shift = d - k;
    const auto per_cube = static_cast<double>(std::int64_t{1} << (n * shift));
    const auto sums = pw.sums(k);
    std::vector<std::int64_t> owner(cells);
    for (std::size_t x = 0; x < cells; ++x) {
      const Coords c = grid.unflat(static_cast<std::int64_t>(x));
      CubeIndex q;
      q.level = k;
      for (int i = 0; i < n; ++i) q.coords[i] = c[i] >> shift;
      owner[x] = grid.level_index(q);
      running[x] = std::max(running[x], sums[static_cast<std::size_t>(owner[x])] / per_cube);
    }

    const std::int64_t cubes = grid.level_size(k);
    if (exec == Exec::Parallel && cubes == 1) {
      kernels::centered_maximal_parallel(grid, v, grid.root_cube(), centered);
    } else {
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel && cubes > 1)
      for (std::int64_t j = 0; j < cubes; ++j) {
        kernels::centered_maximal_serial(grid, v, grid.from_level_index(k, j), centered);
      }
    }

    std::vector<double> numer(static_cast<std::size_t>(cubes), 0.0);
    for (std::size_t x = 0; x < cells; ++x) {
      numer[static_cast<std::size_t>(owner[x])] += std::max(running[x], centered[x]);
    }
    for (std::int64_t j = 0; j < cubes; ++j) {
      const double value = numer[static_cast<std::size_t>(j)] / sums[static_cast<std::size_t>(j)];
      if (best.index < 0 || value > best.value) {
        best = kernels::Best{value, j};
        best_cube = as_family_cube(grid.from_level_index(k, j), n);
      }
    }
  }
  return ConstantValue{best.value, best_cube};
}

double rh_exponent(int n, double ainf) {
  return 1.0 + 1.0 / (std::ldexp(1.0, n + 1) * ainf - 1.0);
}

RhCheck rh_exponent_and_check(const Weight& w, double ainf) {
  RhCheck r;
  r.exponent = rh_exponent(w.grid().dim(), ainf);
  const CubeFamily family(w.grid(), false);
  const LevelPyramid powered = power_pyramid(w, r.exponent);
  const LevelPyramid& pw = w.pyramid();
  const auto& members = family.members();
  const kernels::Best b = kernels::argmax_serial(static_cast<std::int64_t>(members.size()), [&](std::int64_t i) {
    const FamilyCube& c = members[static_cast<std::size_t>(i)];
    const auto cells = static_cast<double>(family.cell_count(c));
    return (family.sum(powered, c) / cells) / std::pow(family.sum(pw, c) / cells, r.exponent);
  });
  r.worst_ratio = b.value;
  r.argmax = members[static_cast<std::size_t>(b.index)];
  r.pass = r.worst_ratio <= 2.0;
  return r;
}

RhCheck rh_exponent_and_check(const Weight& w) {
  return rh_exponent_and_check(w, ainf_fujii_wilson(w).value);
}

WeightConstantsReport constants_report(const Weight& w, double p, bool shifted, Exec exec) {
  WeightConstantsReport r;
  const CubeFamily family(w.grid(), shifted);
  r.p = p;
  r.depth = w.grid().depth();
  r.shifted = shifted;
  r.family_size = family.size();
  r.ap = ap_constant(w, p, family, exec);
  r.a1 = a1_constant(w, family, exec);
  r.ap1 = ap1_constant(w, p, family, exec);
  r.rhinf = rhinf_constant(w, family, exec);
  r.ainf = ainf_fujii_wilson(w, exec);
  r.rh = rh_exponent_and_check(w, r.ainf.value);
  return r;
}

}  // namespace wlab
