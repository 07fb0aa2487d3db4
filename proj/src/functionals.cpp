#include "wlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "wlab/norms.hpp"
#include "wlab/pyramid.hpp"

namespace wlab {

namespace {

std::vector<std::vector<double>> table_for(const Grid& grid,
                                           const std::function<double(const CubeIndex&)>& fn) {
  std::vector<std::vector<double>> t(static_cast<std::size_t>(grid.depth()) + 1);
  for (int k = 0; k <= grid.depth(); ++k) {
    auto& row = t[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(grid.level_size(k)));
    for (std::int64_t i = 0; i < grid.level_size(k); ++i) {
      row[static_cast<std::size_t>(i)] = fn(grid.from_level_index(k, i));
    }
  }
  return t;
}

}  // namespace

void Functional::require_positive() const {
  for (int k = 0; k <= grid_.depth(); ++k) {
    const auto& row = values_[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!(row[i] > 0.0) || !std::isfinite(row[i])) {
        throw DomainError("functional must be positive and finite on every cube; fails on " +
                          to_string(grid_.from_level_index(k, static_cast<std::int64_t>(i)), grid_.dim()));
      }
    }
  }
}

Functional Functional::fractional(double alpha, double p, const Measure& mu, const Weight& w) {
  if (!(alpha > 0.0)) throw DomainError("fractional functional needs alpha > 0");
  if (!(p >= 1.0)) throw DomainError("fractional functional needs p >= 1");
  if (!(mu.grid() == w.grid())) throw DomainError("measure and weight live on different grids");
  Functional a(w.grid(), "fractional");
  a.alpha_ = alpha;
  a.p_ = p;
  const Grid& g = a.grid_;
  a.values_ = table_for(g, [&](const CubeIndex& q) {
    return std::pow(g.side(q), alpha) * std::pow(mu.mass(q) / w.mass(q), 1.0 / p);
  });
  a.require_positive();
  return a;
}

Functional Functional::gradient(const GridFunction& f, int m, double p, const Weight& v,
                                const Weight& u, double scale) {
  if (!(p >= 1.0)) throw DomainError("gradient functional needs p >= 1");
  if (!(scale > 0.0)) throw DomainError("gradient functional needs a positive scale");
  if (!(f.grid() == v.grid()) || !(u.grid() == v.grid())) {
    throw DomainError("function and weights live on different grids");
  }
  Functional a(f.grid(), "gradient");
  a.p_ = p;
  const GridFunction grad = discrete_gradient(f, m);
  std::vector<double> integrand(grad.size());
  const auto vm = v.cell_masses();
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    integrand[i] = std::pow(grad[static_cast<std::int64_t>(i)], p) * vm[i];
  }
  const LevelPyramid pyr(f.grid(), integrand, LevelPyramid::kSum);
  const Grid& g = a.grid_;
  a.values_ = table_for(g, [&](const CubeIndex& q) {
    return scale * std::pow(g.side(q), m) * std::pow(pyr.sum(q) / u.mass(q), 1.0 / p);
  });
  return a;
}

Functional Functional::gradient(const GridFunction& f, int m, double p, const Weight& w, double scale) {
  return gradient(f, m, p, w, w, scale);
}

Functional Functional::lorentz_gradient(const GridFunction& f, double p, const Weight& w) {
  if (!(p >= 1.0)) throw DomainError("Lorentz gradient functional needs p >= 1");
  if (!(f.grid() == w.grid())) throw DomainError("function and weight live on different grids");
  Functional a(f.grid(), "lorentz-gradient");
  a.p_ = p;
  const GridFunction grad = discrete_gradient(f, 1);
  const auto wm = w.cell_masses();
  const Grid& g = a.grid_;
  a.values_ = table_for(g, [&](const CubeIndex& q) {
    std::vector<double> vals, masses;
    g.for_each_cell(q, [&](std::int64_t c) {
      vals.push_back(grad[c]);
      masses.push_back(wm[static_cast<std::size_t>(c)]);
    });
    return g.side(q) * lorentz_p1_norm(vals, masses, p, w.mass(q));
  });
  return a;
}

Functional Functional::increasing(const Grid& grid, std::vector<std::vector<double>> table) {
  if (table.size() != static_cast<std::size_t>(grid.depth()) + 1) {
    throw DomainError("increasing functional needs one table row per level");
  }
  for (int k = 0; k <= grid.depth(); ++k) {
    if (table[static_cast<std::size_t>(k)].size() != static_cast<std::size_t>(grid.level_size(k))) {
      throw DomainError("increasing functional row has the wrong length");
    }
  }
  Functional a(grid, "increasing");
  a.values_ = std::move(table);
  a.require_positive();
  for (int k = 1; k <= grid.depth(); ++k) {
    for (std::int64_t i = 0; i < grid.level_size(k); ++i) {
      const CubeIndex q = grid.from_level_index(k, i);
      if (a.eval(q) > a.eval(grid.parent(q))) {
        throw DomainError("increasing functional is not monotone at " + to_string(q, grid.dim()));
      }
    }
  }
  return a;
}

Functional Functional::constant(const Grid& grid, double value) {
  Functional a(grid, "constant");
  a.values_ = table_for(grid, [value](const CubeIndex&) { return value; });
  a.require_positive();
  return a;
}

double Functional::eval(const CubeIndex& q) const {
  grid_.require(q);
  return values_[static_cast<std::size_t>(q.level)][static_cast<std::size_t>(grid_.level_index(q))];
}

void SmallFamily::validate(const Grid& grid) const {
  if (!(L > 1.0)) throw DomainError("smallness parameter must exceed 1");
  grid.require(parent);
  std::int64_t cells = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    grid.require(members[i]);
    if (!grid.contains(parent, members[i])) throw DomainError("family member outside the parent cube");
    for (std::size_t j = 0; j < i; ++j) {
      if (!grid.disjoint(members[i], members[j])) throw DomainError("family members overlap");
    }
    cells += grid.cells_in(members[i]);
  }
  if (static_cast<double>(cells) * L > static_cast<double>(grid.cells_in(parent))) {
    throw DomainError("family exceeds the volume budget |Q|/L");
  }
}

namespace {

void check_family(const Grid& grid, const CubeIndex& q, const std::vector<CubeIndex>& family) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    grid.require(family[i]);
    if (!grid.contains(q, family[i])) throw DomainError("family member outside the cube");
    for (std::size_t j = 0; j < i; ++j) {
      if (!grid.disjoint(family[i], family[j])) throw DomainError("family members overlap");
    }
  }
}

double term(const Functional& a, const Weight& w, double p, const CubeIndex& q) {
  return std::pow(a.eval(q), p) * w.mass(q);
}

}  // namespace

double dp_ratio(const Functional& a, const Weight& w, double p, const CubeIndex& q,
                const std::vector<CubeIndex>& family) {
  if (!(p >= 1.0)) throw DomainError("D_p ratio needs p >= 1");
  const Grid& grid = a.grid();
  if (!(grid == w.grid())) throw DomainError("functional and weight live on different grids");
  check_family(grid, q, family);
  if (family.empty()) return 0.0;
  const double den = term(a, w, p, q);
  if (!(den > 0.0)) throw DomainError("functional vanishes on the parent cube");
  double num = 0.0;
  for (const CubeIndex& c : family) num += term(a, w, p, c);
  return std::pow(num / den, 1.0 / p);
}

std::string to_string(SearchMode m) {
  switch (m) {
    case SearchMode::Exhaustive: return "exhaustive";
    case SearchMode::Random: return "random";
    case SearchMode::Greedy: return "greedy";
  }
  return "?";
}

SearchMode parse_search_mode(const std::string& s) {
  if (s == "exhaustive") return SearchMode::Exhaustive;
  if (s == "random") return SearchMode::Random;
  if (s == "greedy") return SearchMode::Greedy;
  throw DomainError("unknown search mode: " + s);
}

namespace {

// The dyadic subtree below q with nodes numbered level by level.
struct Subtree {
  const Grid* grid;
  CubeIndex root;
  int n;
  int levels;  // relative depths 0 .. levels-1
  std::vector<std::int64_t> offset;

  Subtree(const Grid& g, const CubeIndex& q) : grid(&g), root(q), n(g.dim()) {
    g.require(q);
    levels = g.depth() - q.level + 1;
    std::int64_t off = 0;
    for (int j = 0; j < levels; ++j) {
      offset.push_back(off);
      off += std::int64_t{1} << (n * j);
    }
    offset.push_back(off);
  }
  std::int64_t node_count() const { return offset.back(); }
  std::int64_t per_axis(int j) const { return std::int64_t{1} << j; }

  CubeIndex cube(int j, std::int64_t local) const {
    CubeIndex c;
    c.level = root.level + j;
    const std::int64_t m = per_axis(j);
    for (int i = n - 1; i >= 0; --i) {
      c.coords[i] = root.coords[i] * m + local % m;
      local /= m;
    }
    return c;
  }
  std::int64_t local_index(const CubeIndex& c) const {
    const int j = c.level - root.level;
    const std::int64_t m = per_axis(j);
    std::int64_t idx = 0;
    for (int i = 0; i < n; ++i) idx = idx * m + (c.coords[i] - root.coords[i] * m);
    return idx;
  }
  std::int64_t child_local(int j, std::int64_t local, int bits) const {
    const std::int64_t m = per_axis(j);
    std::int64_t idx = 0;
    std::int64_t mul = 1;
    std::int64_t rest = local;
    for (int i = n - 1; i >= 0; --i) {
      const std::int64_t c = 2 * (rest % m) + ((bits >> (n - 1 - i)) & 1);
      rest /= m;
      idx += c * mul;
      mul *= 2 * m;
    }
    return idx;
  }
  CubeIndex node_cube(std::int64_t id) const {
    int j = 0;
    while (offset[static_cast<std::size_t>(j) + 1] <= id) ++j;
    return cube(j, id - offset[static_cast<std::size_t>(j)]);
  }
};

struct Antichain {
  std::uint64_t mask = 0;
  std::int64_t cells = 0;
  double sum = 0.0;
};

std::int64_t count_rec(int j, int levels, int n, std::int64_t cap) {
  if (j == levels - 1) return 2;
  const std::int64_t child = count_rec(j + 1, levels, n, cap);
  std::int64_t prod = 1;
  for (int b = 0; b < (1 << n); ++b) {
    if (prod > cap / std::max<std::int64_t>(child, 1)) return cap + 1;
    prod *= child;
  }
  return std::min(prod + 1, cap + 1);
}

std::vector<Antichain> enumerate(const Subtree& t, int j, std::int64_t local,
                                 const std::vector<double>& node_term) {
  const std::int64_t id = t.offset[static_cast<std::size_t>(j)] + local;
  const std::int64_t cells = std::int64_t{1} << (t.n * (t.levels - 1 - j));
  std::vector<Antichain> combos{Antichain{}};
  if (j + 1 < t.levels) {
    for (int bits = 0; bits < (1 << t.n); ++bits) {
      const std::vector<Antichain> sub = enumerate(t, j + 1, t.child_local(j, local, bits), node_term);
      std::vector<Antichain> next;
      next.reserve(combos.size() * sub.size());
      for (const Antichain& a : combos) {
        for (const Antichain& b : sub) {
          next.push_back(Antichain{a.mask | b.mask, a.cells + b.cells, a.sum + b.sum});
        }
      }
      combos.swap(next);
    }
  }
  combos.push_back(Antichain{std::uint64_t{1} << id, cells, node_term[static_cast<std::size_t>(id)]});
  return combos;
}

std::vector<CubeIndex> decode(const Subtree& t, std::uint64_t mask) {
  std::vector<CubeIndex> out;
  for (std::int64_t id = 0; id < t.node_count(); ++id) {
    if (mask >> id & 1) out.push_back(t.node_cube(id));
  }
  return out;
}

std::vector<double> node_terms(const Subtree& t, const Functional& a, const Weight& w, double p) {
  std::vector<double> out(static_cast<std::size_t>(t.node_count()));
  for (int j = 0; j < t.levels; ++j) {
    for (std::int64_t l = 0; l < (std::int64_t{1} << (t.n * j)); ++l) {
      out[static_cast<std::size_t>(t.offset[static_cast<std::size_t>(j)] + l)] = term(a, w, p, t.cube(j, l));
    }
  }
  return out;
}

std::vector<Antichain> all_antichains(const Functional& a, const Weight& w, double p, const CubeIndex& q) {
  const Grid& grid = a.grid();
  const Subtree t(grid, q);
  if (t.node_count() > 64 || antichain_count(grid, q, kExhaustiveCap) > kExhaustiveCap) {
    throw DomainError("exhaustive search exceeds the antichain cap; use random or greedy mode");
  }
  return enumerate(t, 0, 0, node_terms(t, a, w, p));
}

// Random disjoint dyadic subcubes of q with total size exactly `budget` cells.
std::vector<CubeIndex> sample_family(const Grid& grid, const CubeIndex& q, std::int64_t budget,
                                     std::mt19937_64& rng) {
  const Subtree t(grid, q);
  const int D = t.levels - 1;
  std::vector<std::vector<std::int64_t>> occ(static_cast<std::size_t>(t.levels));
  for (int j = 0; j <= D; ++j) occ[static_cast<std::size_t>(j)].assign(std::size_t{1} << (t.n * j), 0);
  auto size_at = [&](int j) { return std::int64_t{1} << (t.n * (D - j)); };

  std::vector<CubeIndex> out;
  std::int64_t remaining = budget;
  std::vector<std::int64_t> free;
  while (remaining > 0) {
    int first = 0;
    while (size_at(first) > remaining) ++first;
    int j = first + static_cast<int>(rng() % static_cast<std::uint64_t>(D - first + 1));
    while (true) {
      free.clear();
      const auto& row = occ[static_cast<std::size_t>(j)];
      for (std::size_t l = 0; l < row.size(); ++l) {
        if (row[l] == 0) free.push_back(static_cast<std::int64_t>(l));
      }
      if (!free.empty() || j == D) break;
      ++j;
    }
    if (free.empty()) break;
    const std::int64_t pick = free[rng() % free.size()];
    const CubeIndex c = t.cube(j, pick);
    out.push_back(c);
    remaining -= size_at(j);
    // mark ancestors partially occupied and the whole subtree fully occupied
    for (int a = 0; a < j; ++a) {
      occ[static_cast<std::size_t>(a)][static_cast<std::size_t>(t.local_index(grid.ancestor(c, q.level + a)))] +=
          size_at(j);
    }
    std::vector<std::int64_t> layer{pick};
    for (int b = j; b <= D; ++b) {
      std::vector<std::int64_t> next;
      for (std::int64_t l : layer) {
        occ[static_cast<std::size_t>(b)][static_cast<std::size_t>(l)] = size_at(b);
        if (b < D) {
          for (int bits = 0; bits < (1 << t.n); ++bits) next.push_back(t.child_local(b, l, bits));
        }
      }
      layer.swap(next);
    }
  }
  return out;
}

std::vector<CubeIndex> greedy_family(const Functional& a, const Weight& w, double p,
                                     const CubeIndex& q, std::int64_t budget) {
  const Grid& grid = a.grid();
  const Subtree t(grid, q);
  struct Cand {
    double density;
    int j;
    std::int64_t local;
  };
  std::vector<Cand> cands;
  const int D = t.levels - 1;
  for (int j = 0; j <= D; ++j) {
    const std::int64_t size = std::int64_t{1} << (t.n * (D - j));
    if (size > budget) continue;
    for (std::int64_t l = 0; l < (std::int64_t{1} << (t.n * j)); ++l) {
      cands.push_back(Cand{term(a, w, p, t.cube(j, l)) / static_cast<double>(size), j, l});
    }
  }
  // best value per cell first; ties go to deeper cubes, then lower index
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.density != y.density) return x.density > y.density;
    if (x.j != y.j) return x.j > y.j;
    return x.local < y.local;
  });
  std::vector<CubeIndex> out;
  std::int64_t used = 0;
  for (const Cand& c : cands) {
    const CubeIndex cube = t.cube(c.j, c.local);
    const std::int64_t size = grid.cells_in(cube);
    if (used + size > budget) continue;
    bool ok = true;
    for (const CubeIndex& o : out) {
      if (!grid.disjoint(o, cube)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    out.push_back(cube);
    used += size;
  }
  return out;
}

std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t task) {
  std::seed_seq seq{seed, task, std::uint64_t{0x5eedf00d}};
  return std::mt19937_64(seq);
}

void fit_slope(DpReport& r) {
  std::vector<double> xs, ys;
  for (const SmallnessRow& row : r.rows) {
    if (row.max_ratio > 0.0) {
      xs.push_back(std::log(1.0 / row.L));
      ys.push_back(std::log(row.max_ratio));
    }
  }
  if (xs.size() < 2) return;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) return;
  const double slope = sxy / sxx;
  double res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + slope * (xs[i] - mx));
    res += e * e;
  }
  r.slope = slope;
  r.slope_residual = std::sqrt(res / n);
}

}  // namespace

std::int64_t antichain_count(const Grid& grid, const CubeIndex& q, std::int64_t cap) {
  grid.require(q);
  return count_rec(0, grid.depth() - q.level + 1, grid.dim(), cap);
}

DpReport max_dp_ratio(const Functional& a, const Weight& w, double p, const CubeIndex& q,
                      SearchMode mode, int trials, std::uint64_t seed) {
  if (!(p >= 1.0)) throw DomainError("D_p ratio needs p >= 1");
  const Grid& grid = a.grid();
  if (!(grid == w.grid())) throw DomainError("functional and weight live on different grids");
  DpReport r;
  r.p = p;
  r.mode = mode;
  const double den = term(a, w, p, q);
  if (!(den > 0.0)) throw DomainError("functional vanishes on the parent cube");
  const std::int64_t cells = grid.cells_in(q);
  switch (mode) {
    case SearchMode::Exhaustive: {
      const Subtree t(grid, q);
      const std::vector<Antichain> all = all_antichains(a, w, p, q);
      const Antichain* best = &all.front();
      for (const Antichain& c : all) {
        if (c.sum > best->sum) best = &c;
      }
      r.trials = static_cast<std::int64_t>(all.size());
      r.worst_ratio = std::pow(best->sum / den, 1.0 / p);
      r.witness = decode(t, best->mask);
      break;
    }
    case SearchMode::Random: {
      for (int k = 0; k < trials; ++k) {
        std::mt19937_64 rng = task_rng(seed, static_cast<std::uint64_t>(k));
        const std::int64_t budget = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cells));
        std::vector<CubeIndex> fam = sample_family(grid, q, budget, rng);
        const double ratio = dp_ratio(a, w, p, q, fam);
        if (ratio > r.worst_ratio) {
          r.worst_ratio = ratio;
          r.witness = std::move(fam);
        }
      }
      r.trials = trials;
      break;
    }
    case SearchMode::Greedy: {
      r.witness = greedy_family(a, w, p, q, cells);
      r.worst_ratio = dp_ratio(a, w, p, q, r.witness);
      r.trials = 1;
      break;
    }
  }
  return r;
}

DpReport sdp_check(const Functional& a, const Weight& w, double p, const CubeIndex& q,
                   const std::vector<double>& Ls, const SdOptions& opt) {
  if (!(p >= 1.0)) throw DomainError("D_p ratio needs p >= 1");
  const Grid& grid = a.grid();
  if (!(grid == w.grid())) throw DomainError("functional and weight live on different grids");
  for (double L : Ls) {
    if (!(L > 1.0)) throw DomainError("smallness parameters must exceed 1");
  }
  std::optional<double> exponent = opt.bound_exponent;
  if (!exponent && a.kind() == "fractional") exponent = a.alpha() / grid.dim();

  DpReport r;
  r.p = p;
  r.mode = opt.mode;
  const double den = term(a, w, p, q);
  if (!(den > 0.0)) throw DomainError("functional vanishes on the parent cube");
  const auto cells = static_cast<double>(grid.cells_in(q));

  std::vector<Antichain> all;
  std::optional<Subtree> tree;
  if (opt.mode == SearchMode::Exhaustive) {
    tree.emplace(grid, q);
    all = all_antichains(a, w, p, q);
  }

  for (std::size_t li = 0; li < Ls.size(); ++li) {
    const double L = Ls[li];
    SmallnessRow row;
    row.L = L;
    if (exponent) row.bound = std::pow(1.0 / L, *exponent);
    auto consider = [&](double ratio) {
      ++row.families;
      if (row.bound && ratio > *row.bound * (1.0 + opt.tolerance)) ++row.violations;
      return ratio > row.max_ratio;
    };
    switch (opt.mode) {
      case SearchMode::Exhaustive: {
        const Antichain* best = nullptr;
        for (const Antichain& c : all) {
          if (static_cast<double>(c.cells) * L > cells) continue;
          if (consider(std::pow(c.sum / den, 1.0 / p))) {
            row.max_ratio = std::pow(c.sum / den, 1.0 / p);
            best = &c;
          }
        }
        if (best) row.witness = decode(*tree, best->mask);
        break;
      }
      case SearchMode::Random: {
        for (int k = 0; k < opt.trials; ++k) {
          std::mt19937_64 rng = task_rng(opt.seed, li * 1'000'003ull + static_cast<std::uint64_t>(k));
          SmallFamily fam = random_small_family(grid, q, L, rng);
          const double ratio = dp_ratio(a, w, p, q, fam.members);
          if (consider(ratio)) {
            row.max_ratio = ratio;
            row.witness = std::move(fam.members);
          }
        }
        break;
      }
      case SearchMode::Greedy: {
        const auto budget = static_cast<std::int64_t>(std::floor(cells / L));
        row.witness = greedy_family(a, w, p, q, budget);
        const double ratio = dp_ratio(a, w, p, q, row.witness);
        consider(ratio);
        row.max_ratio = ratio;
        break;
      }
    }
    r.trials += row.families;
    if (row.max_ratio > r.worst_ratio) {
      r.worst_ratio = row.max_ratio;
      r.witness = row.witness;
    }
    r.rows.push_back(std::move(row));
  }
  fit_slope(r);
  return r;
}

SmallFamily random_small_family(const Grid& grid, const CubeIndex& q, double L, std::mt19937_64& rng) {
  if (!(L > 1.0)) throw DomainError("smallness parameter must exceed 1");
  grid.require(q);
  SmallFamily fam;
  fam.parent = q;
  fam.L = L;
  auto budget = static_cast<std::int64_t>(std::floor(static_cast<double>(grid.cells_in(q)) / L));
  // guard the floor against rounding up past the exact budget
  while (budget > 0 && static_cast<double>(budget) * L > static_cast<double>(grid.cells_in(q))) --budget;
  fam.members = sample_family(grid, q, budget, rng);
  return fam;
}

}  // namespace wlab
