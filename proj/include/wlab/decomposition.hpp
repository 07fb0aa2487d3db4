#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wlab/grid.hpp"
#include "wlab/weights.hpp"

namespace wlab {

/// Bad part b_j = (h - avg_{Q_j} h) on one stopping cube; values follow the
/// cell order of Grid::for_each_cell.
struct BadPart {
  CubeIndex cube;
  std::vector<double> values;
};

struct CZDecomposition {
  CubeIndex q;
  double L = 2.0;
  double average = 0.0;  // avg over q of |h|
  std::vector<CubeIndex> stopping;
  std::vector<std::uint8_t> omega;  // per grid cell: inside a stopping cube
  std::int64_t omega_cells = 0;
  GridFunction good;
  std::vector<BadPart> bad;

  /// b_j as a grid function (zero off its cube).
  GridFunction bad_function(std::size_t j) const;
};

/// Level-L stopping-time decomposition of h on q: stopping cubes are the
/// maximal dyadic subcubes with avg |h| > L. Requires avg_q |h| <= L, L > 1.
CZDecomposition cz_decompose(const GridFunction& h, const CubeIndex& q, double L);

/// Orthonormal basis of polynomials of degree <= m-1 on q for the inner
/// product <f, g> = average over the cells of q of f g (midpoint samples).
/// Polynomials are written in local coordinates t in [0,1)^n of q.
struct PolyBasis {
  Grid grid;
  CubeIndex q;
  int m = 1;
  std::vector<std::array<int, kMaxDim>> exponents;  // monomial t^beta, |beta| <= m-1
  std::vector<std::vector<double>> coeffs;          // phi_r = sum_b coeffs[r][b] t^beta_b
  std::vector<std::vector<double>> samples;         // phi_r at the cells of q
  std::vector<std::int64_t> cells;                  // cells of q, for_each_cell order
  double gram_condition = 1.0;
  bool ill_conditioned = false;
  double sup_bound = 0.0;  // C = max_r max_cells |phi_r|

  std::size_t size() const { return coeffs.size(); }
  double eval(std::size_t r, const Point& x) const;
};

inline constexpr double kGramConditionWarning = 1e8;

PolyBasis orthonormal_basis(const Grid& grid, const CubeIndex& q, int m);

/// P_q f = sum_r <f, phi_r> phi_r on the cells of q, zero elsewhere.
GridFunction project(const GridFunction& f, const PolyBasis& basis);

struct OscillationResult {
  double value = 0.0;  // about P_q f, f_{q,w} or f_q
  double center = 0.0;  // the constant used when no basis is given
  double inf_over_constants = 0.0;
  double best_constant = 0.0;
};

/// (1/w(q) integral over q of |f - center|^s w)^(1/s), with center P_q f when
/// a basis is given, f_{q,w} with a weight, f_q otherwise. Also returns the
/// infimum over constant centers (weighted median for s = 1).
OscillationResult oscillation(const GridFunction& f, const CubeIndex& q, const PolyBasis* basis,
                              double s, const Weight* w);

}  // namespace wlab
