#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wlab/decomposition.hpp"

namespace wlab {

namespace {

double monomial(const std::array<int, kMaxDim>& beta, const Point& t, int n) {
  double v = 1.0;
  for (int i = 0; i < n; ++i) v *= std::pow(t[i], beta[i]);
  return v;
}

double mean_product(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

}  // namespace

double PolyBasis::eval(std::size_t r, const Point& x) const {
  const int n = grid.dim();
  const Point lo = grid.lower_corner(q);
  const double side = grid.side(q);
  Point t{};
  for (int i = 0; i < n; ++i) t[i] = (x[i] - lo[i]) / side;
  double v = 0.0;
  for (std::size_t b = 0; b < exponents.size(); ++b) v += coeffs.at(r)[b] * monomial(exponents[b], t, n);
  return v;
}

PolyBasis orthonormal_basis(const Grid& grid, const CubeIndex& q, int m) {
  if (m < 1 || m > 4) throw DomainError("polynomial projections support 1 <= m <= 4");
  grid.require(q);
  const int n = grid.dim();
  PolyBasis basis{grid, q, m, {}, {}, {}, grid.cells_of(q), 1.0, false, 0.0};
  for (int k = 0; k < m; ++k) {
    for (const auto& beta : multi_indices(n, k)) basis.exponents.push_back(beta);
  }
  const std::size_t dim = basis.exponents.size();
  if (basis.cells.size() < dim) throw DomainError("grid too coarse for the polynomial degree");

  const Point lo = grid.lower_corner(q);
  const double side = grid.side(q);
  std::vector<std::vector<double>> mono(dim, std::vector<double>(basis.cells.size()));
  for (std::size_t i = 0; i < basis.cells.size(); ++i) {
    const Point x = grid.cell_center(basis.cells[i]);
    Point t{};
    for (int a = 0; a < n; ++a) t[a] = (x[a] - lo[a]) / side;
    for (std::size_t b = 0; b < dim; ++b) mono[b][i] = monomial(basis.exponents[b], t, n);
  }

  Eigen::MatrixXd gram(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = mean_product(mono[a], mono[b]);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff(), lmax = eig.eigenvalues().maxCoeff();
  basis.gram_condition = lmin > 0.0 ? lmax / lmin : HUGE_VAL;
  basis.ill_conditioned = basis.gram_condition > kGramConditionWarning;

  // Gram-Schmidt with one round of re-orthogonalization
  for (std::size_t b = 0; b < dim; ++b) {
    std::vector<double> v = mono[b];
    std::vector<double> c(dim, 0.0);
    c[b] = 1.0;
    const double start = std::sqrt(mean_product(v, v));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t r = 0; r < basis.samples.size(); ++r) {
        const double proj = mean_product(v, basis.samples[r]);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * basis.samples[r][i];
        for (std::size_t k = 0; k < dim; ++k) c[k] -= proj * basis.coeffs[r][k];
      }
    }
    const double norm = std::sqrt(mean_product(v, v));
    if (!(norm > 1e-10 * start)) throw DomainError("monomials are linearly dependent on this grid");
    for (double& x : v) x /= norm;
    for (double& x : c) x /= norm;
    basis.samples.push_back(std::move(v));
    basis.coeffs.push_back(std::move(c));
  }
  for (const auto& s : basis.samples) {
    for (double x : s) basis.sup_bound = std::max(basis.sup_bound, std::fabs(x));
  }
  return basis;
}

GridFunction project(const GridFunction& f, const PolyBasis& basis) {
  if (!(f.grid() == basis.grid)) throw DomainError("function and basis live on different grids");
  std::vector<double> vals(basis.cells.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f[basis.cells[i]];
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const double c = mean_product(vals, basis.samples[r]);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      out[static_cast<std::size_t>(basis.cells[i])] += c * basis.samples[r][i];
    }
  }
  return GridFunction(f.grid(), std::move(out));
}

OscillationResult oscillation(const GridFunction& f, const CubeIndex& q, const PolyBasis* basis,
                              double s, const Weight* w) {
  if (!(s >= 1.0)) throw DomainError("oscillation exponent must be >= 1");
  const Grid& grid = f.grid();
  if (w && !(w->grid() == grid)) throw DomainError("function and weight live on different grids");
  if (basis && !(basis->q == q)) throw DomainError("basis belongs to a different cube");
  const std::vector<std::int64_t> cells = grid.cells_of(q);
  std::vector<double> vals(cells.size()), mass(cells.size(), 1.0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    vals[i] = f[cells[i]];
    if (w) mass[i] = w->cell_masses()[static_cast<std::size_t>(cells[i])];
  }
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("weight has no mass on the cube");

  OscillationResult res;
  std::vector<double> center(cells.size());
  if (basis) {
    const GridFunction pf = project(f, *basis);
    for (std::size_t i = 0; i < cells.size(); ++i) center[i] = pf[cells[i]];
  } else {
    double num = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) num += vals[i] * mass[i];
    res.center = num / total;
    std::fill(center.begin(), center.end(), res.center);
  }
  auto moment = [&](auto centre_of) {
    double acc = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) acc += std::pow(std::fabs(vals[i] - centre_of(i)), s) * mass[i];
    return acc / total;
  };
  res.value = std::pow(moment([&](std::size_t i) { return center[i]; }), 1.0 / s);

  if (s == 1.0) {
    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    double cum = 0.0;
    for (std::size_t k : order) {
      cum += mass[k];
      if (cum >= 0.5 * total) {
        res.best_constant = vals[k];
        break;
      }
    }
  } else {
    double lo = *std::min_element(vals.begin(), vals.end());
    double hi = *std::max_element(vals.begin(), vals.end());
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    auto phi = [&](double c) { return moment([c](std::size_t) { return c; }); };
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::fabs(hi)); ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = phi(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = phi(x2);
      }
    }
    res.best_constant = 0.5 * (lo + hi);
  }
  const double c = res.best_constant;
  res.inf_over_constants = std::pow(moment([c](std::size_t) { return c; }), 1.0 / s);
  return res;
}

}  // namespace wlab
