#include "wlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wlab {

namespace {

constexpr int kMaxCellBits = 26;

std::int64_t ipow2(int bits) { return std::int64_t{1} << bits; }

}  // namespace

RootBox RootBox::unit(int n) {
  RootBox b;
  b.n = n;
  b.side = 1.0;
  return b;
}

RootBox RootBox::centered(int n, double half_side) {
  RootBox b;
  b.n = n;
  b.side = 2.0 * half_side;
  for (int i = 0; i < n; ++i) b.corner[i] = -half_side;
  return b;
}

bool RootBox::symmetric_about_origin() const {
  for (int i = 0; i < n; ++i) {
    if (corner[i] != -0.5 * side) return false;
  }
  return true;
}

Grid::Grid(RootBox root, int depth) : root_(root), depth_(depth) {
  if (root_.n < 1 || root_.n > kMaxDim) {
    throw DomainError("grid dimension must be in [1, 4]");
  }
  if (!(root_.side > 0.0) || !std::isfinite(root_.side)) {
    throw DomainError("root box side must be positive");
  }
  if (depth_ < 0 || root_.n * depth_ > kMaxCellBits) {
    throw DomainError("grid depth out of range (n*depth must be <= 26)");
  }
  for (int i = root_.n; i < kMaxDim; ++i) root_.corner[i] = 0.0;
  cell_count_ = ipow2(root_.n * depth_);
}

double Grid::side(int level) const { return std::ldexp(root_.side, -level); }

double Grid::volume(int level) const {
  return std::pow(side(level), static_cast<double>(dim()));
}

std::int64_t Grid::level_size(int level) const { return ipow2(dim() * level); }

std::int64_t Grid::cells_in(const CubeIndex& q) const {
  return ipow2(dim() * (depth_ - q.level));
}

bool Grid::valid(const CubeIndex& q) const {
  if (q.level < 0 || q.level > depth_) return false;
  const std::int64_t m = ipow2(q.level);
  for (int i = 0; i < dim(); ++i) {
    if (q.coords[i] < 0 || q.coords[i] >= m) return false;
  }
  for (int i = dim(); i < kMaxDim; ++i) {
    if (q.coords[i] != 0) return false;
  }
  return true;
}

void Grid::require(const CubeIndex& q) const {
  if (!valid(q)) {
    throw DomainError("cube " + to_string(q, dim()) + " is not resolvable on this grid");
  }
}

std::vector<CubeIndex> Grid::children(const CubeIndex& q) const {
  require(q);
  if (q.level >= depth_) throw DomainError("cube is at maximum depth and has no children");
  const int n = dim();
  std::vector<CubeIndex> out;
  out.reserve(static_cast<std::size_t>(1) << n);
  for (int bits = 0; bits < (1 << n); ++bits) {
    CubeIndex c;
    c.level = q.level + 1;
    for (int i = 0; i < n; ++i) {
      // axis 0 is the most significant bit so children come out in level_index order
      const int b = (bits >> (n - 1 - i)) & 1;
      c.coords[i] = 2 * q.coords[i] + b;
    }
    out.push_back(c);
  }
  return out;
}

CubeIndex Grid::parent(const CubeIndex& q) const {
  require(q);
  if (q.level == 0) throw DomainError("root cube has no parent");
  return ancestor(q, q.level - 1);
}

CubeIndex Grid::ancestor(const CubeIndex& q, int level) const {
  if (level < 0 || level > q.level) throw DomainError("ancestor level out of range");
  CubeIndex a;
  a.level = level;
  const int shift = q.level - level;
  for (int i = 0; i < dim(); ++i) a.coords[i] = q.coords[i] >> shift;
  return a;
}

bool Grid::contains(const CubeIndex& outer, const CubeIndex& inner) const {
  if (inner.level < outer.level) return false;
  return ancestor(inner, outer.level) == outer;
}

bool Grid::disjoint(const CubeIndex& a, const CubeIndex& b) const {
  return !contains(a, b) && !contains(b, a);
}

std::int64_t Grid::level_index(const CubeIndex& q) const {
  const std::int64_t m = ipow2(q.level);
  std::int64_t idx = 0;
  for (int i = 0; i < dim(); ++i) idx = idx * m + q.coords[i];
  return idx;
}

CubeIndex Grid::from_level_index(int level, std::int64_t index) const {
  CubeIndex q;
  q.level = level;
  const std::int64_t m = ipow2(level);
  for (int i = dim() - 1; i >= 0; --i) {
    q.coords[i] = index % m;
    index /= m;
  }
  return q;
}

std::int64_t Grid::flat(const Coords& cell) const {
  const std::int64_t m = cells_per_axis();
  std::int64_t idx = 0;
  for (int i = 0; i < dim(); ++i) idx = idx * m + cell[i];
  return idx;
}

Coords Grid::unflat(std::int64_t flat) const {
  Coords c{};
  const std::int64_t m = cells_per_axis();
  for (int i = dim() - 1; i >= 0; --i) {
    c[i] = flat % m;
    flat /= m;
  }
  return c;
}

CubeIndex Grid::cell_cube(std::int64_t flat) const {
  CubeIndex q;
  q.level = depth_;
  q.coords = unflat(flat);
  return q;
}

Point Grid::cell_center(std::int64_t flat) const {
  const Coords c = unflat(flat);
  const double h = cell_width();
  Point x{};
  for (int i = 0; i < dim(); ++i) {
    x[i] = root_.corner[i] + (static_cast<double>(c[i]) + 0.5) * h;
  }
  return x;
}

Point Grid::lower_corner(const CubeIndex& q) const {
  const double s = side(q.level);
  Point x{};
  for (int i = 0; i < dim(); ++i) {
    x[i] = root_.corner[i] + static_cast<double>(q.coords[i]) * s;
  }
  return x;
}

bool Grid::inside(const Point& x) const {
  for (int i = 0; i < dim(); ++i) {
    if (!(x[i] >= root_.corner[i] && x[i] <= root_.corner[i] + root_.side)) return false;
  }
  return true;
}

std::int64_t Grid::locate(const Point& x) const {
  if (!inside(x)) throw DomainError("point lies outside the root box");
  Coords c{};
  const std::int64_t m = cells_per_axis();
  for (int i = 0; i < dim(); ++i) {
    const double t = (x[i] - root_.corner[i]) / root_.side * static_cast<double>(m);
    c[i] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(t)), 0, m - 1);
  }
  return flat(c);
}

void Grid::for_each_cell(const CubeIndex& q, const std::function<void(std::int64_t)>& fn) const {
  require(q);
  const int n = dim();
  const int shift = depth_ - q.level;
  const std::int64_t span = ipow2(shift);
  Coords lo{};
  for (int i = 0; i < n; ++i) lo[i] = q.coords[i] << shift;
  Coords cur = lo;
  while (true) {
    fn(flat(cur));
    int axis = n - 1;
    while (axis >= 0) {
      if (++cur[axis] < lo[axis] + span) break;
      cur[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
}

std::vector<std::int64_t> Grid::cells_of(const CubeIndex& q) const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(cells_in(q)));
  for_each_cell(q, [&](std::int64_t c) { out.push_back(c); });
  return out;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::int64_t>(values_.size()) != grid_.cell_count()) {
    throw DomainError("grid function length must equal 2^(n*depth)");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
  }
}

GridFunction GridFunction::constant(const Grid& grid, double value) {
  return GridFunction(grid, std::vector<double>(static_cast<std::size_t>(grid.cell_count()), value));
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(const Point&)>& fn) {
  std::vector<double> v(static_cast<std::size_t>(grid.cell_count()));
  for (std::int64_t i = 0; i < grid.cell_count(); ++i) v[static_cast<std::size_t>(i)] = fn(grid.cell_center(i));
  return GridFunction(grid, std::move(v));
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

GridFunction GridFunction::abs() const {
  return map([](double v) { return std::fabs(v); });
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), fn);
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::scaled(double c) const {
  return map([c](double v) { return c * v; });
}

GridFunction GridFunction::plus(double c) const {
  return map([c](double v) { return v + c; });
}

double integral(const GridFunction& f, const CubeIndex& q) {
  double s = 0.0;
  f.grid().for_each_cell(q, [&](std::int64_t c) { s += f[c]; });
  return s * f.grid().cell_volume();
}

double average(const GridFunction& f, const CubeIndex& q) {
  double s = 0.0;
  f.grid().for_each_cell(q, [&](std::int64_t c) { s += f[c]; });
  return s / static_cast<double>(f.grid().cells_in(q));
}

double min_on(const GridFunction& f, const CubeIndex& q) {
  double m = f[f.grid().cells_of(q).front()];
  f.grid().for_each_cell(q, [&](std::int64_t c) { m = std::min(m, f[c]); });
  return m;
}

double max_on(const GridFunction& f, const CubeIndex& q) {
  double m = f[f.grid().cells_of(q).front()];
  f.grid().for_each_cell(q, [&](std::int64_t c) { m = std::max(m, f[c]); });
  return m;
}

std::vector<std::array<int, kMaxDim>> multi_indices(int n, int order) {
  std::vector<std::array<int, kMaxDim>> out;
  std::array<int, kMaxDim> cur{};
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == n - 1) {
      cur[axis] = left;
      out.push_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[axis] = k;
      rec(axis + 1, left - k);
    }
  };
  rec(0, order);
  return out;
}

namespace {

// One forward difference along `axis`, divided by h. `taken` differences
// along the axis have already been applied, so only the first m - taken
// entries are genuine; the result is copied onward from the last genuine one.
void forward_difference(const Grid& grid, int axis, int taken, std::vector<double>& v) {
  const std::int64_t m = grid.cells_per_axis();
  const double h = grid.cell_width();
  std::int64_t stride = 1;
  for (int i = grid.dim() - 1; i > axis; --i) stride *= m;
  std::vector<double> out(v.size());
  for (std::int64_t idx = 0; idx < grid.cell_count(); ++idx) {
    const std::int64_t c = (idx / stride) % m;
    const std::int64_t last = m - 2 - taken;
    const std::int64_t base = c <= last ? idx : idx - (c - last) * stride;
    out[static_cast<std::size_t>(idx)] =
        (v[static_cast<std::size_t>(base + stride)] - v[static_cast<std::size_t>(base)]) / h;
  }
  v.swap(out);
}

}  // namespace

GridFunction discrete_gradient(const GridFunction& f, int order) {
  const Grid& grid = f.grid();
  if (order < 1) throw DomainError("derivative order must be >= 1");
  if (order >= grid.cells_per_axis()) {
    throw DomainError("derivative order must be smaller than the cells per axis");
  }
  std::vector<double> total(f.size(), 0.0);
  for (const auto& sigma : multi_indices(grid.dim(), order)) {
    std::vector<double> d(f.values().begin(), f.values().end());
    for (int axis = 0; axis < grid.dim(); ++axis) {
      for (int k = 0; k < sigma[axis]; ++k) forward_difference(grid, axis, k, d);
    }
    for (std::size_t i = 0; i < d.size(); ++i) total[i] += std::fabs(d[i]);
  }
  return GridFunction(grid, std::move(total));
}

std::string to_string(const CubeIndex& q, int n) {
  std::ostringstream os;
  os << "(" << q.level << ";";
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << q.coords[i];
  os << ")";
  return os.str();
}

}  // namespace wlab
