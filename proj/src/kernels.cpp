#include "wlab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

namespace wlab {

int configured_threads() {
  if (const char* env = std::getenv("WLAB_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void configure_threads_from_env() { omp_set_num_threads(configured_threads()); }

namespace {

struct GaussRule {
  std::vector<double> x, w;  // on [0, 1]
};

GaussRule gauss_legendre(int m) {
  GaussRule r;
  r.x.resize(static_cast<std::size_t>(m));
  r.w.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    r.x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    r.w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

// Tensor Gauss rule for |x|^(t-n) over the box [lo, lo + side]^n.
double gauss_box(int n, double t, const Point& lo, double side, const GaussRule& g) {
  const int m = static_cast<int>(g.x.size());
  std::array<int, kMaxDim> k{};
  double total = 0.0;
  while (true) {
    double r2 = 0.0, wt = 1.0;
    for (int i = 0; i < n; ++i) {
      const double xi = lo[i] + side * g.x[static_cast<std::size_t>(k[i])];
      r2 += xi * xi;
      wt *= g.w[static_cast<std::size_t>(k[i])];
    }
    total += wt * std::pow(r2, 0.5 * (t - n));
    int axis = n - 1;
    while (axis >= 0 && ++k[axis] == m) k[axis--] = 0;
    if (axis < 0) break;
  }
  return total * std::pow(side, n);
}

double corner_cube_integral_uncached(int n, double t) {
  if (n == 1) return 1.0 / t;
  // The integral over [0,1/2]^n is 2^(-t) times the whole, so the whole is
  // the integral over the remaining 2^n - 1 half-cubes divided by 1 - 2^(-t).
  // Those stay at distance >= 1/2 from the singularity.
  const GaussRule g = gauss_legendre(10);
  double rest = 0.0;
  for (int half = 1; half < (1 << n); ++half) {
    for (int quarter = 0; quarter < (1 << n); ++quarter) {
      Point lo{};
      for (int i = 0; i < n; ++i) {
        lo[i] = 0.5 * ((half >> i) & 1) + 0.25 * ((quarter >> i) & 1);
      }
      rest += gauss_box(n, t, lo, 0.25, g);
    }
  }
  return rest / (1.0 - std::exp2(-t));
}

}  // namespace

double corner_cube_integral(int n, double t) {
  if (n < 1 || n > kMaxDim || !(t > 0.0)) throw DomainError("corner cube integral needs t > 0");
  static std::mutex mu;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, t);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double v = corner_cube_integral_uncached(n, t);
  cache.emplace(key, v);
  return v;
}

namespace kernels {

BoxSums::BoxSums(int n, std::int64_t extent, std::span<const double> values)
    : n_(n), stride_(extent + 1) {
  std::int64_t size = 1;
  for (int i = 0; i < n; ++i) size *= stride_;
  table_.assign(static_cast<std::size_t>(size), 0.0);
  // scatter values to offset (1,..,1), then prefix-sum along each axis
  const auto count = static_cast<std::int64_t>(values.size());
  for (std::int64_t idx = 0; idx < count; ++idx) {
    std::int64_t rest = idx, pos = 0, mul = 1;
    for (int i = n - 1; i >= 0; --i) {
      pos += (rest % extent + 1) * mul;
      rest /= extent;
      mul *= stride_;
    }
    table_[static_cast<std::size_t>(pos)] = values[static_cast<std::size_t>(idx)];
  }
  std::int64_t axis_stride = 1;
  for (int axis = n - 1; axis >= 0; --axis) {
    for (std::int64_t pos = 0; pos < size; ++pos) {
      if ((pos / axis_stride) % stride_ == 0) continue;
      table_[static_cast<std::size_t>(pos)] += table_[static_cast<std::size_t>(pos - axis_stride)];
    }
    axis_stride *= stride_;
  }
}

double BoxSums::sum(const Coords& lo, const Coords& hi) const {
  double s = 0.0;
  for (int bits = 0; bits < (1 << n_); ++bits) {
    std::int64_t pos = 0;
    int sign = 1;
    for (int i = 0; i < n_; ++i) {
      const bool low = (bits >> i) & 1;
      pos = pos * stride_ + (low ? lo[i] : hi[i]);
      if (low) sign = -sign;
    }
    s += sign * table_[static_cast<std::size_t>(pos)];
  }
  return s > 0.0 ? s : 0.0;
}

namespace {

struct LocalBlock {
  int n;
  std::int64_t side;      // cells per axis inside q
  std::int64_t full;      // cells per axis in the root
  Coords lo{};            // global coords of q's first cell
  std::int64_t count;     // side^n
};

LocalBlock make_block(const Grid& grid, const CubeIndex& q) {
  grid.require(q);
  LocalBlock b;
  b.n = grid.dim();
  b.side = std::int64_t{1} << (grid.depth() - q.level);
  b.full = grid.cells_per_axis();
  for (int i = 0; i < b.n; ++i) b.lo[i] = q.coords[i] * b.side;
  b.count = 1;
  for (int i = 0; i < b.n; ++i) b.count *= b.side;
  return b;
}

std::vector<double> extract(const Grid& grid, std::span<const double> v, const LocalBlock& b) {
  std::vector<double> local(static_cast<std::size_t>(b.count));
  for (std::int64_t idx = 0; idx < b.count; ++idx) {
    Coords c{};
    std::int64_t rest = idx;
    for (int i = b.n - 1; i >= 0; --i) {
      c[i] = b.lo[i] + rest % b.side;
      rest /= b.side;
    }
    local[static_cast<std::size_t>(idx)] = v[static_cast<std::size_t>(grid.flat(c))];
  }
  return local;
}

void centered_cell(const Grid& grid, const LocalBlock& b, const BoxSums& sums,
                   std::span<const double> local, std::int64_t idx, std::span<double> out) {
  Coords x{}, g{};
  std::int64_t rest = idx;
  for (int i = b.n - 1; i >= 0; --i) {
    x[i] = rest % b.side;
    rest /= b.side;
    g[i] = b.lo[i] + x[i];
  }
  double best = local[static_cast<std::size_t>(idx)];
  for (std::int64_t r = 1; r < b.side; ++r) {
    Coords lo{}, hi{};
    double vol = 1.0;
    bool covers = true;
    for (int i = 0; i < b.n; ++i) {
      lo[i] = std::max<std::int64_t>(x[i] - r, 0);
      hi[i] = std::min<std::int64_t>(x[i] + r + 1, b.side);
      covers = covers && lo[i] == 0 && hi[i] == b.side;
      const std::int64_t vlo = std::max<std::int64_t>(g[i] - r, 0);
      const std::int64_t vhi = std::min<std::int64_t>(g[i] + r + 1, b.full);
      vol *= static_cast<double>(vhi - vlo);
    }
    best = std::max(best, sums.sum(lo, hi) / vol);
    // larger windows add no mass from q, only volume
    if (covers) break;
  }
  out[static_cast<std::size_t>(grid.flat(g))] = best;
}

}  // namespace

void centered_maximal_serial(const Grid& grid, std::span<const double> v, const CubeIndex& q,
                             std::span<double> out) {
  const LocalBlock b = make_block(grid, q);
  const std::vector<double> local = extract(grid, v, b);
  const BoxSums sums(b.n, b.side, local);
  for (std::int64_t idx = 0; idx < b.count; ++idx) centered_cell(grid, b, sums, local, idx, out);
}

void centered_maximal_parallel(const Grid& grid, std::span<const double> v, const CubeIndex& q,
                               std::span<double> out) {
  const LocalBlock b = make_block(grid, q);
  const std::vector<double> local = extract(grid, v, b);
  const BoxSums sums(b.n, b.side, local);
#pragma omp parallel for schedule(dynamic, 64) if (b.count >= 1024)
  for (std::int64_t idx = 0; idx < b.count; ++idx) centered_cell(grid, b, sums, local, idx, out);
}

namespace {

struct FractionalSetup {
  std::vector<double> kernel;  // indexed by per-axis |offset|, row-major
  std::vector<std::int64_t> sources;
};

FractionalSetup fractional_setup(const Grid& grid, std::span<const double> g, double alpha) {
  const int n = grid.dim();
  if (!(alpha > 0.0) || !(alpha < n)) throw DomainError("fractional order must lie in (0, n)");
  const double h = grid.cell_width();
  FractionalSetup s;
  s.kernel.resize(static_cast<std::size_t>(grid.cell_count()));
  for (std::int64_t idx = 0; idx < grid.cell_count(); ++idx) {
    const Coords d = grid.unflat(idx);
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += static_cast<double>(d[i] * d[i]);
    s.kernel[static_cast<std::size_t>(idx)] = std::pow(r2 * h * h, 0.5 * (alpha - n));
  }
  // exact integral over a cell centered at the evaluation point, per unit volume
  const double self = std::ldexp(1.0, n) * std::pow(0.5 * h, alpha) * corner_cube_integral(n, alpha);
  s.kernel[0] = self / grid.cell_volume();
  for (std::int64_t j = 0; j < grid.cell_count(); ++j) {
    if (g[static_cast<std::size_t>(j)] != 0.0) s.sources.push_back(j);
  }
  return s;
}

void fractional_cell(const Grid& grid, std::span<const double> g, const FractionalSetup& s,
                     std::int64_t i, std::span<double> out) {
  const int n = grid.dim();
  const Coords ci = grid.unflat(i);
  double acc = 0.0;
  for (std::int64_t j : s.sources) {
    const Coords cj = grid.unflat(j);
    Coords d{};
    for (int a = 0; a < n; ++a) d[a] = ci[a] > cj[a] ? ci[a] - cj[a] : cj[a] - ci[a];
    acc += g[static_cast<std::size_t>(j)] * s.kernel[static_cast<std::size_t>(grid.flat(d))];
  }
  out[static_cast<std::size_t>(i)] = acc * grid.cell_volume();
}

}  // namespace

void fractional_integral_serial(const Grid& grid, std::span<const double> g, double alpha,
                                std::span<double> out) {
  const FractionalSetup s = fractional_setup(grid, g, alpha);
  for (std::int64_t i = 0; i < grid.cell_count(); ++i) fractional_cell(grid, g, s, i, out);
}

void fractional_integral_parallel(const Grid& grid, std::span<const double> g, double alpha,
                                  std::span<double> out) {
  const FractionalSetup s = fractional_setup(grid, g, alpha);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < grid.cell_count(); ++i) fractional_cell(grid, g, s, i, out);
}

namespace {

void check_power_grid(const Grid& grid, double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw DomainError("power weight exponent must lie in (0, 1]");
  if (!grid.root().symmetric_about_origin()) {
    throw DomainError("power weight needs a root box centered at the origin");
  }
  if (grid.dim() > 1 && grid.depth() < 1) throw DomainError("power weight needs depth >= 1");
}

double power_primitive(double x, double delta) {
  return std::copysign(std::pow(std::fabs(x), delta), x) / delta;
}

double power_cell(const Grid& grid, double delta, double corner_integral, std::int64_t idx) {
  const int n = grid.dim();
  const double h = grid.cell_width();
  const Coords c = grid.unflat(idx);
  if (n == 1) {
    const double a = grid.root().corner[0] + static_cast<double>(c[0]) * h;
    return power_primitive(a + h, delta) - power_primitive(a, delta);
  }
  const std::int64_t half = grid.cells_per_axis() / 2;
  std::int64_t dist = 0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t e = c[i] - half;
    dist = std::max(dist, e >= 0 ? e : -e - 1);
  }
  if (dist == 0) return std::pow(h, delta) * corner_integral;
  const int sub = dist < 4 ? (n <= 3 ? 16 : 8) : dist < 16 ? 4 : 1;
  const double step = h / sub;
  std::array<int, kMaxDim> k{};
  double total = 0.0;
  while (true) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = grid.root().corner[i] + static_cast<double>(c[i]) * h + (k[i] + 0.5) * step;
      r2 += x * x;
    }
    total += std::pow(r2, 0.5 * (delta - n));
    int axis = n - 1;
    while (axis >= 0 && ++k[axis] == sub) k[axis--] = 0;
    if (axis < 0) break;
  }
  return total * std::pow(step, n);
}

}  // namespace

void power_cell_masses_serial(const Grid& grid, double delta, std::span<double> out) {
  check_power_grid(grid, delta);
  const double ci = grid.dim() > 1 ? corner_cube_integral(grid.dim(), delta) : 0.0;
  for (std::int64_t i = 0; i < grid.cell_count(); ++i) {
    out[static_cast<std::size_t>(i)] = power_cell(grid, delta, ci, i);
  }
}

void power_cell_masses_parallel(const Grid& grid, double delta, std::span<double> out) {
  check_power_grid(grid, delta);
  const double ci = grid.dim() > 1 ? corner_cube_integral(grid.dim(), delta) : 0.0;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < grid.cell_count(); ++i) {
    out[static_cast<std::size_t>(i)] = power_cell(grid, delta, ci, i);
  }
}

}  // namespace kernels
}  // namespace wlab
