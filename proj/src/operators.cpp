#include "wlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wlab/norms.hpp"
#include "wlab/pyramid.hpp"

namespace wlab {

void OperatorConfig::validate() const {
  if (rdf_terms < 1) throw DomainError("Rubio de Francia needs at least one term");
  if (maximal == MaximalKind::Powered) {
    if (!(epsilon > 0.0) || epsilon > 1.0) throw DomainError("powered maximal needs eps in (0, 1]");
    if (powered_base == MaximalKind::Powered) throw DomainError("powered maximal needs a plain base");
  }
  if (opnorm_mode == OpnormMode::Supplied && !(opnorm_value >= 1.0)) {
    throw DomainError("a supplied maximal operator norm must be >= 1");
  }
  if (!(cn > 0.0)) throw DomainError("dimensional factor must be positive");
  if (probe_count < 1) throw DomainError("probe corpus must be nonempty");
}

std::string to_string(MaximalKind k) {
  switch (k) {
    case MaximalKind::DyadicLocal: return "dyadic-local";
    case MaximalKind::Centered: return "centered-discrete";
    case MaximalKind::Powered: return "powered";
  }
  return "?";
}

MaximalKind parse_maximal_kind(const std::string& s) {
  if (s == "dyadic-local" || s == "dyadic") return MaximalKind::DyadicLocal;
  if (s == "centered-discrete" || s == "centered") return MaximalKind::Centered;
  if (s == "powered") return MaximalKind::Powered;
  throw DomainError("unknown maximal operator: " + s);
}

GridFunction dyadic_maximal(const GridFunction& f, const CubeIndex& q) {
  const Grid& grid = f.grid();
  grid.require(q);
  const int n = grid.dim();
  const int d = grid.depth();
  std::vector<double> a(f.values().begin(), f.values().end());
  for (double& x : a) x = std::fabs(x);
  const LevelPyramid pyr(grid, a, LevelPyramid::kSum);
  std::vector<double> out(a.size(), 0.0);
  grid.for_each_cell(q, [&](std::int64_t cell) {
    const Coords c = grid.unflat(cell);
    double best = a[static_cast<std::size_t>(cell)];
    for (int k = q.level; k < d; ++k) {
      CubeIndex p;
      p.level = k;
      for (int i = 0; i < n; ++i) p.coords[i] = c[i] >> (d - k);
      const auto cnt = static_cast<double>(std::int64_t{1} << (n * (d - k)));
      best = std::max(best, pyr.sums(k)[static_cast<std::size_t>(grid.level_index(p))] / cnt);
    }
    out[static_cast<std::size_t>(cell)] = best;
  });
  return GridFunction(grid, std::move(out));
}

GridFunction centered_maximal(const GridFunction& f, Exec exec) {
  const Grid& grid = f.grid();
  std::vector<double> a(f.values().begin(), f.values().end());
  for (double& x : a) x = std::fabs(x);
  std::vector<double> out(a.size(), 0.0);
  kernels::centered_maximal(grid, a, grid.root_cube(), out, exec);
  return GridFunction(grid, std::move(out));
}

GridFunction powered_maximal(const GridFunction& f, double eps, MaximalKind base, Exec exec) {
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("powered maximal needs eps in (0, 1]");
  const GridFunction fe = f.map([eps](double v) { return std::pow(std::fabs(v), eps); });
  if (base == MaximalKind::Powered) throw DomainError("powered maximal needs a plain base");
  const GridFunction m = base == MaximalKind::Centered ? centered_maximal(fe, exec)
                                                       : dyadic_maximal(fe, f.grid().root_cube());
  return m.map([eps](double v) { return std::pow(v, 1.0 / eps); });
}

GridFunction apply_maximal(const GridFunction& f, const OperatorConfig& cfg, Exec exec) {
  switch (cfg.maximal) {
    case MaximalKind::DyadicLocal: return dyadic_maximal(f, f.grid().root_cube());
    case MaximalKind::Centered: return centered_maximal(f, exec);
    case MaximalKind::Powered: return powered_maximal(f, cfg.epsilon, cfg.powered_base, exec);
  }
  throw DomainError("unknown maximal operator");
}

namespace {

std::vector<double> restricted(const GridFunction& g, const CubeIndex& q) {
  std::vector<double> v(g.size(), 0.0);
  g.grid().for_each_cell(q, [&](std::int64_t c) { v[static_cast<std::size_t>(c)] = g[c]; });
  return v;
}

void require_nonnegative(const GridFunction& g, const char* what) {
  for (double v : g.values()) {
    if (v < 0.0) throw DomainError(std::string(what) + " needs a nonnegative function");
  }
}

}  // namespace

GridFunction fractional_integral(const GridFunction& g, double alpha, const CubeIndex& q, Exec exec) {
  require_nonnegative(g, "fractional integral");
  const std::vector<double> src = restricted(g, q);
  std::vector<double> out(src.size(), 0.0);
  kernels::fractional_integral(g.grid(), src, alpha, out, exec);
  return GridFunction(g.grid(), std::move(out));
}

double fractional_integral_at(const GridFunction& g, double alpha, const CubeIndex& q,
                              const Point& x) {
  require_nonnegative(g, "fractional integral");
  const Grid& grid = g.grid();
  const int n = grid.dim();
  if (!(alpha > 0.0) || !(alpha < n)) throw DomainError("fractional order must lie in (0, n)");
  const double h = grid.cell_width();
  const double corner = n > 1 ? corner_cube_integral(n, alpha) : 0.0;
  double total = 0.0;
  grid.for_each_cell(q, [&](std::int64_t cell) {
    const double gv = g[cell];
    if (gv == 0.0) return;
    const Coords c = grid.unflat(cell);
    Point lo{};
    for (int i = 0; i < n; ++i) lo[i] = grid.root().corner[i] + static_cast<double>(c[i]) * h;
    if (n == 1) {
      auto prim = [alpha](double t) { return std::copysign(std::pow(std::fabs(t), alpha), t) / alpha; };
      total += gv * (prim(lo[0] + h - x[0]) - prim(lo[0] - x[0]));
      return;
    }
    bool touches = true, vertex = true, center = true;
    for (int i = 0; i < n; ++i) {
      const double t = (x[i] - lo[i]) / h;
      touches = touches && t >= 0.0 && t <= 1.0;
      vertex = vertex && (t == 0.0 || t == 1.0);
      center = center && t == 0.5;
    }
    if (touches && vertex) {
      total += gv * std::pow(h, alpha) * corner;
    } else if (touches && center) {
      total += gv * std::ldexp(1.0, n) * std::pow(0.5 * h, alpha) * corner;
    } else if (touches) {
      throw DomainError("evaluation point must be a grid vertex, a cell center, or off the cube");
    } else {
      // composite midpoint, refined for cells near x
      double dist = 0.0;
      for (int i = 0; i < n; ++i) {
        const double t = std::max({lo[i] - x[i], x[i] - lo[i] - h, 0.0});
        dist = std::max(dist, t / h);
      }
      const int sub = dist < 3.0 ? 8 : 1;
      const double step = h / sub;
      std::array<int, kMaxDim> k{};
      double acc = 0.0;
      while (true) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
          const double y = lo[i] + (k[i] + 0.5) * step - x[i];
          r2 += y * y;
        }
        acc += std::pow(r2, 0.5 * (alpha - n));
        int axis = n - 1;
        while (axis >= 0 && ++k[axis] == sub) k[axis--] = 0;
        if (axis < 0) break;
      }
      total += gv * acc * std::pow(step, n);
    }
  });
  return total;
}

GridFunction truncate(const GridFunction& g, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("truncation level must be positive");
  require_nonnegative(g, "truncation");
  return g.map([lambda](double v) { return std::min(std::max(v - lambda, 0.0), lambda); });
}

namespace {

struct Restricted {
  std::vector<double> values, masses;
  double scale = 0.0;
};

Restricted restrict_to(const GridFunction& g, const Measure& mu, const CubeIndex& q) {
  if (!(g.grid() == mu.grid())) throw DomainError("function and measure live on different grids");
  Restricted r;
  const auto m = mu.cell_masses();
  g.grid().for_each_cell(q, [&](std::int64_t c) {
    r.values.push_back(g[c]);
    r.masses.push_back(m[static_cast<std::size_t>(c)]);
  });
  r.scale = mu.mass(q);
  if (!(r.scale > 0.0)) throw DomainError("measure has no mass on the cube");
  return r;
}

}  // namespace

double weak_norm(const GridFunction& g, double p, const Measure& mu, const CubeIndex& q) {
  const Restricted r = restrict_to(g, mu, q);
  return weak_norm(r.values, r.masses, p, r.scale);
}

double lorentz_p1_norm(const GridFunction& g, double p, const Measure& mu, const CubeIndex& q) {
  const Restricted r = restrict_to(g, mu, q);
  return lorentz_p1_norm(r.values, r.masses, p, r.scale);
}

double triple_norm(const GridFunction& g, double p, const Measure& mu, const CubeIndex& q) {
  const Restricted r = restrict_to(g, mu, q);
  return triple_norm(r.values, r.masses, p, r.scale);
}

double lp_norm(const GridFunction& g, double p, const Measure& mu, const CubeIndex& q) {
  const Restricted r = restrict_to(g, mu, q);
  return lp_norm(r.values, r.masses, p, r.scale);
}

double orlicz_exp_norm(const GridFunction& g, const CubeIndex& q, const Measure& mu) {
  const Restricted r = restrict_to(g, mu, q);
  return orlicz_exp_norm(r.values, r.masses, r.scale);
}

double weighted_lp_norm(const GridFunction& f, const Weight& w, double p) {
  if (!(f.grid() == w.grid())) throw DomainError("function and weight live on different grids");
  const auto m = w.cell_masses();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += std::pow(std::fabs(f[static_cast<std::int64_t>(i)]), p) * m[i];
  }
  return std::pow(s, 1.0 / p);
}

std::vector<GridFunction> probe_corpus(const Grid& grid, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<GridFunction> out;
  const std::int64_t cells = grid.cell_count();
  for (int k = 0; k < count; ++k) {
    std::vector<double> v(static_cast<std::size_t>(cells), 0.0);
    switch (k % 4) {
      case 0:  // rough random field
        for (double& x : v) x = unif(rng);
        break;
      case 1: {  // indicator of a random dyadic cube
        const int level = static_cast<int>(rng() % static_cast<std::uint64_t>(grid.depth() + 1));
        const CubeIndex q = grid.from_level_index(
            level, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(grid.level_size(level))));
        grid.for_each_cell(q, [&](std::int64_t c) { v[static_cast<std::size_t>(c)] = 1.0; });
        break;
      }
      case 2:  // a single spike
        v[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(cells))] = 1.0 + unif(rng);
        break;
      default:  // heavy-tailed random field
        for (double& x : v) x = std::pow(unif(rng), 4.0) * 10.0;
        break;
    }
    out.emplace_back(grid, std::move(v));
  }
  return out;
}

double empirical_opnorm(const std::vector<GridFunction>& corpus, const Weight& w, double p,
                        const OperatorConfig& cfg, int iterates, Exec exec) {
  double best = 1.0;
  for (const GridFunction& f0 : corpus) {
    GridFunction f = f0;
    double nf = weighted_lp_norm(f, w, p);
    if (!(nf > 0.0)) continue;
    for (int j = 0; j < std::max(iterates, 1); ++j) {
      GridFunction mf = apply_maximal(f, cfg, exec);
      const double nm = weighted_lp_norm(mf, w, p);
      best = std::max(best, nm / nf);
      f = std::move(mf);
      nf = nm;
    }
  }
  return best;
}

RdfResult rubio_de_francia(const GridFunction& h, const Weight& w, double p,
                           const OperatorConfig& cfg, Exec exec) {
  cfg.validate();
  if (!(p > 1.0)) throw DomainError("Rubio de Francia needs p > 1");
  require_nonnegative(h, "Rubio de Francia");
  if (!(h.grid() == w.grid())) throw DomainError("function and weight live on different grids");
  const double hn = weighted_lp_norm(h, w, p);
  if (!(hn > 0.0)) throw DomainError("Rubio de Francia needs a nonzero input");
  const int K = cfg.rdf_terms;

  double opnorm = 0.0;
  switch (cfg.opnorm_mode) {
    case OpnormMode::Supplied:
      opnorm = cfg.opnorm_value;
      break;
    case OpnormMode::Empirical: {
      std::vector<GridFunction> corpus = probe_corpus(h.grid(), cfg.probe_seed, cfg.probe_count);
      corpus.push_back(h);
      opnorm = empirical_opnorm(corpus, w, p, cfg, K, exec);
      break;
    }
    case OpnormMode::ApBound: {
      const CubeFamily family(w.grid(), false);
      const double ap = ap_constant(w, p, family, exec).value;
      opnorm = cfg.cn * (p / (p - 1.0)) * std::pow(ap, 1.0 / (p - 1.0));
      break;
    }
  }

  RdfResult res{h, opnorm, K};
  const double q = 1.0 / (2.0 * opnorm);
  std::vector<double> acc(h.values().begin(), h.values().end());
  GridFunction term = h;
  double coef = 1.0;
  for (int k = 1; k <= K; ++k) {
    term = apply_maximal(term, cfg, exec);
    coef *= q;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coef * term[static_cast<std::int64_t>(i)];
  }
  const GridFunction next = apply_maximal(term, cfg, exec);
  res.r = GridFunction(h.grid(), std::move(acc));
  for (std::size_t i = 0; i < next.size(); ++i) {
    const auto c = static_cast<std::int64_t>(i);
    res.pointwise_tail_ratio = std::max(res.pointwise_tail_ratio, coef * q * next[c] / res.r[c]);
  }
  res.tail_bound = std::pow(q, K + 1) / (1.0 - q) * hn;
  res.norm_tail = std::ldexp(hn, -K);
  res.h_norm = hn;
  res.r_norm = weighted_lp_norm(res.r, w, p);
  return res;
}

RdfProperties rdf_properties(const GridFunction& h, const RdfResult& res) {
  RdfProperties pr;
  pr.a_min_gap = HUGE_VAL;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto c = static_cast<std::int64_t>(i);
    pr.a_min_gap = std::min(pr.a_min_gap, res.r[c] - h[c]);
  }
  pr.a_pass = pr.a_min_gap >= 0.0;
  pr.b_ratio = res.r_norm / res.h_norm;
  pr.b_bound = 2.0 + res.tail_bound / res.h_norm;
  pr.b_pass = pr.b_ratio <= pr.b_bound;
  const CubeFamily family(h.grid(), false);
  pr.c_a1 = a1_constant(Weight::from_density(res.r), family).value;
  pr.c_bound = 2.0 * res.opnorm * (1.0 + res.pointwise_tail_ratio);
  pr.c_pass = pr.c_a1 <= pr.c_bound * (1.0 + 1e-12);
  return pr;
}

}  // namespace wlab
