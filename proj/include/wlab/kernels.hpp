#pragma once

// Data-parallel kernels. Every kernel has a serial reference and an OpenMP
// version; the public operators pick one through `Exec`, and the parity tests
// and benchmarks call both.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "wlab/grid.hpp"

namespace wlab {

enum class Exec { Serial, Parallel };

/// Thread count from WLAB_THREADS (unset or invalid: available parallelism).
int configured_threads();
/// Applies configured_threads() to the OpenMP runtime.
void configure_threads_from_env();

/// Integral of |x|^(t - n) over the unit corner cube [0,1]^n.
double corner_cube_integral(int n, double t);

namespace kernels {

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
};

/// Larger value wins; ties go to the lower index, so any reduction order
/// produces the same answer.
inline Best better(const Best& a, const Best& b) {
  if (b.index < 0) return a;
  if (a.index < 0) return b;
  if (b.value > a.value) return b;
  if (b.value == a.value && b.index < a.index) return b;
  return a;
}

template <class F>
Best argmax_serial(std::int64_t count, F&& f) {
  Best best;
  for (std::int64_t i = 0; i < count; ++i) best = better(best, Best{f(i), i});
  return best;
}

template <class F>
Best argmax_parallel(std::int64_t count, F&& f) {
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < count; ++i) local = better(local, Best{f(i), i});
#pragma omp critical(wlab_argmax)
    best = better(best, local);
  }
  return best;
}

template <class F>
Best argmax(std::int64_t count, F&& f, Exec exec) {
  return exec == Exec::Serial ? argmax_serial(count, f) : argmax_parallel(count, f);
}

/// Box sums over an n-dimensional block of cells via a summed-area table.
class BoxSums {
 public:
  /// `values` laid out row-major over a block with `extent` cells per axis.
  BoxSums(int n, std::int64_t extent, std::span<const double> values);
  /// Sum over [lo, hi) per axis, block-local coordinates. Clamped at 0 when
  /// the inclusion-exclusion rounding goes negative on nonnegative data.
  double sum(const Coords& lo, const Coords& hi) const;

 private:
  int n_;
  std::int64_t stride_;
  std::vector<double> table_;
};

/// Centered cube-window maximal function restricted to the cube q.
///
/// For every cell x of q: max over radii r = 0 .. side(q)-1 (in cells) of
/// (sum of v over window(x, r) within q) / (cells of window(x, r) within the
/// root). With q the root cube this is the full discrete centered maximal
/// function of v (v should be |f|). Writes out[flat] for cells of q.
void centered_maximal_serial(const Grid& grid, std::span<const double> v, const CubeIndex& q,
                             std::span<double> out);
void centered_maximal_parallel(const Grid& grid, std::span<const double> v, const CubeIndex& q,
                               std::span<double> out);

/// Discrete I_alpha at every cell center. Off-diagonal kernel is the
/// midpoint value |x - y|^(alpha - n); the diagonal uses the exact integral
/// of the kernel over the cell. Cells with g = 0 are skipped.
void fractional_integral_serial(const Grid& grid, std::span<const double> g, double alpha,
                                std::span<double> out);
void fractional_integral_parallel(const Grid& grid, std::span<const double> g, double alpha,
                                  std::span<double> out);

/// Cell masses of |x|^(delta - n) on a root box centered at the origin.
void power_cell_masses_serial(const Grid& grid, double delta, std::span<double> out);
void power_cell_masses_parallel(const Grid& grid, double delta, std::span<double> out);

inline void centered_maximal(const Grid& grid, std::span<const double> v, const CubeIndex& q,
                             std::span<double> out, Exec exec) {
  exec == Exec::Serial ? centered_maximal_serial(grid, v, q, out)
                       : centered_maximal_parallel(grid, v, q, out);
}

inline void fractional_integral(const Grid& grid, std::span<const double> g, double alpha,
                                std::span<double> out, Exec exec) {
  exec == Exec::Serial ? fractional_integral_serial(grid, g, alpha, out)
                       : fractional_integral_parallel(grid, g, alpha, out);
}

inline void power_cell_masses(const Grid& grid, double delta, std::span<double> out, Exec exec) {
  exec == Exec::Serial ? power_cell_masses_serial(grid, delta, out)
                       : power_cell_masses_parallel(grid, delta, out);
}

}  // namespace kernels
}  // namespace wlab
