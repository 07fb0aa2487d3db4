#include "wlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wlab/norms.hpp"
#include "wlab/operators.hpp"

namespace wlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-12;

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? kInf : 0.0;
}

struct LineFit {
  double slope = 0.0;
  double residual = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit fit;
  if (xs.size() < 2) return fit;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + fit.slope * (xs[i] - mx));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

/// Dyadic subcubes of q at `level`.
std::vector<CubeIndex> subcubes(const Grid& grid, const CubeIndex& q, int level) {
  const int n = grid.dim();
  const int shift = level - q.level;
  const std::int64_t span = std::int64_t{1} << shift;
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= span;
  std::vector<CubeIndex> out;
  out.reserve(static_cast<std::size_t>(total));
  for (std::int64_t t = 0; t < total; ++t) {
    CubeIndex c{level, {}};
    std::int64_t rest = t;
    for (int i = n - 1; i >= 0; --i) {
      c.coords[i] = (q.coords[i] << shift) + rest % span;
      rest /= span;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<double> center_values(const GridFunction& f, const Weight& u, const CubeIndex& q,
                                  const std::vector<std::int64_t>& cells, const PoincareSpec& spec) {
  std::vector<double> c(cells.size(), 0.0);
  if (spec.vanishing) return c;
  switch (spec.center) {
    case Center::Average:
      std::fill(c.begin(), c.end(), average(f, q));
      break;
    case Center::WeightedAverage:
      std::fill(c.begin(), c.end(), weighted_average(f, u, q));
      break;
    case Center::Projection: {
      const GridFunction pf = project(f, orthonormal_basis(f.grid(), q, spec.m));
      for (std::size_t i = 0; i < cells.size(); ++i) c[i] = pf[cells[i]];
      break;
    }
  }
  return c;
}

/// (sum |v|^s mass / scale)^(1/s); s = inf gives the max over cells of mass > 0.
double power_mean(const std::vector<double>& v, const std::vector<double>& mass, double s, double scale) {
  if (std::isinf(s)) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (mass[i] > 0.0) m = std::max(m, std::fabs(v[i]));
    }
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::pow(std::fabs(v[i]), s) * mass[i];
  return std::pow(acc / scale, 1.0 / s);
}

std::vector<double> gather(std::span<const double> field, const std::vector<std::int64_t>& cells) {
  std::vector<double> out(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) out[i] = field[static_cast<std::size_t>(cells[i])];
  return out;
}

std::string describe_inputs(const std::string& id, const CheckInputs& in) {
  std::ostringstream os;
  const Grid& g = in.f.grid();
  os << id << " n=" << g.dim() << " depth=" << g.depth() << " Q=" << to_string(in.q, g.dim())
     << " p=" << in.p;
  if (in.w) os << " w=" << in.w->describe();
  if (in.u) os << " u=" << in.u->describe();
  if (in.v) os << " v=" << in.v->describe();
  return os.str();
}

double ap_value(const Weight& w, double p, bool shifted) {
  const CubeFamily family(w.grid(), shifted);
  return ap_constant(w, p, family).value;
}

}  // namespace

std::string to_string(ExponentKind k) {
  switch (k) {
    case ExponentKind::Classical: return "classical";
    case ExponentKind::FormulaA: return "A";
    case ExponentKind::FormulaB: return "B";
    case ExponentKind::FormulaM: return "M";
  }
  return "?";
}

ExponentKind parse_exponent_kind(const std::string& s) {
  if (s == "classical") return ExponentKind::Classical;
  if (s == "A") return ExponentKind::FormulaA;
  if (s == "B") return ExponentKind::FormulaB;
  if (s == "M") return ExponentKind::FormulaM;
  throw DomainError("unknown exponent kind: " + s);
}

double sobolev_exponent(ExponentKind kind, double p, int n, double q, double wq, double M) {
  if (!(p >= 1.0) || !(p < n)) throw DomainError("Sobolev exponents need 1 <= p < n");
  if (!(q >= 1.0)) throw DomainError("A_q index must be >= 1");
  if (!(wq >= 1.0)) throw DomainError("A_q constant must be >= 1");
  double gap = 0.0;
  switch (kind) {
    case ExponentKind::Classical: gap = 1.0 / n; break;
    case ExponentKind::FormulaA: gap = 1.0 / (n * (q + std::log(wq))); break;
    case ExponentKind::FormulaB: gap = 1.0 / (n * q); break;
    case ExponentKind::FormulaM:
      if (!(M > 1.0)) throw DomainError("M must exceed 1");
      gap = 1.0 / (n * q * M);
      break;
  }
  return 1.0 / (1.0 / p - gap);
}

Exponents exponents(double p, int n, double q, double wq, std::optional<double> M, int m) {
  Exponents e;
  e.p = p;
  e.q = q;
  e.n = n;
  e.m = m;
  e.p_prime = p > 1.0 ? p / (p - 1.0) : kInf;
  e.n_prime = n > 1 ? static_cast<double>(n) / (n - 1) : kInf;
  e.classical = sobolev_exponent(ExponentKind::Classical, p, n);
  e.formula_a = sobolev_exponent(ExponentKind::FormulaA, p, n, q, wq);
  e.formula_b = sobolev_exponent(ExponentKind::FormulaB, p, n, q, wq);
  if (M) e.formula_m = sobolev_exponent(ExponentKind::FormulaM, p, n, q, wq, *M);
  return e;
}

std::string to_string(Center c) {
  switch (c) {
    case Center::Average: return "average";
    case Center::WeightedAverage: return "weighted-average";
    case Center::Projection: return "projection";
  }
  return "?";
}

Center parse_center(const std::string& s) {
  if (s == "average") return Center::Average;
  if (s == "weighted-average") return Center::WeightedAverage;
  if (s == "projection") return Center::Projection;
  throw DomainError("unknown center: " + s);
}

Sides poincare_sides(const GridFunction& f, const Weight& u, const Weight& v, const CubeIndex& q,
                     const PoincareSpec& spec) {
  const Grid& grid = f.grid();
  if (!(u.grid() == grid) || !(v.grid() == grid)) throw DomainError("function and weights live on different grids");
  grid.require(q);
  if (!(spec.p >= 1.0)) throw DomainError("gradient exponent must be >= 1");
  if (!(spec.lhs_exponent >= 1.0)) throw DomainError("oscillation exponent must be >= 1");
  const std::vector<std::int64_t> cells = grid.cells_of(q);
  const double uq = u.mass(q);
  if (!(uq > 0.0)) throw DomainError("weight has no mass on the cube");

  const std::vector<double> centers = center_values(f, u, q, cells, spec);
  std::vector<double> diff(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) diff[i] = f[cells[i]] - centers[i];
  const std::vector<double> umass = gather(u.cell_masses(), cells);
  const bool mixed = spec.rhs == RhsKind::Mixed;

  Sides s;
  s.lhs = power_mean(diff, umass, spec.lhs_exponent, mixed ? 1.0 : uq);

  const int order = spec.rhs == RhsKind::GradientLp || spec.rhs == RhsKind::TwoWeight ? spec.m : 1;
  const std::vector<double> grad = gather(discrete_gradient(f, order).values(), cells);
  const double ell = grid.side(q);
  switch (spec.rhs) {
    case RhsKind::GradientLp:
    case RhsKind::TwoWeight:
      s.rhs = std::pow(ell, order) * power_mean(grad, gather(v.cell_masses(), cells), spec.p, uq);
      break;
    case RhsKind::Lorentz:
      s.rhs = ell * lorentz_p1_norm(grad, umass, spec.p, uq);
      break;
    case RhsKind::Mixed: {
      const int n = grid.dim();
      if (n < 2) throw DomainError("the mixed form needs n >= 2");
      const double n_prime = static_cast<double>(n) / (n - 1);
      std::vector<double> wq(static_cast<std::size_t>(grid.cell_count()), 0.0);
      for (std::int64_t c : cells) wq[static_cast<std::size_t>(c)] = u.density()[c];
      const GridFunction mw = centered_maximal(GridFunction(grid, std::move(wq)));
      double acc = 0.0;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const double wv = u.density()[cells[i]];
        acc += std::pow(grad[i], spec.p) * std::pow(mw[cells[i]], spec.p / n_prime) /
               std::pow(wv, spec.p - 1.0);
      }
      s.rhs = std::pow(acc * grid.cell_volume(), 1.0 / spec.p);
      break;
    }
  }
  return s;
}

std::vector<std::string> inequality_ids() {
  return {"pp-two-weight", "pp-measure", "sobolev-A", "sobolev-B", "a1-linear",
          "mixed", "lorentz", "higher-order", "exp-JN", "kz-downward",
          "pointwise-i1", "i1-vs-m", "weak-1n'"};
}

double oscillation_constant(const GridFunction& f, const CubeIndex& q, const Functional& a) {
  const Grid& grid = f.grid();
  grid.require(q);
  double best = 0.0;
  for (int level = q.level; level < grid.depth(); ++level) {
    for (const CubeIndex& c : subcubes(grid, q, level)) {
      const double mean = average(f, c);
      double acc = 0.0;
      grid.for_each_cell(c, [&](std::int64_t i) { acc += std::fabs(f[i] - mean); });
      const double osc = acc / static_cast<double>(grid.cells_in(c));
      best = std::max(best, safe_ratio(osc, a.eval(c)));
    }
  }
  return best;
}

CheckResult check_inequality(const std::string& id, const CheckInputs& in) {
  const GridFunction& f = in.f;
  const Grid& grid = f.grid();
  const int n = grid.dim();
  grid.require(in.q);
  const Weight w = in.w ? *in.w : Weight::unit(grid);
  const Weight u = in.u ? *in.u : w;
  const Weight v = in.v ? *in.v : u;
  const double p = in.p;
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");

  CheckResult r;
  r.id = id;
  r.inputs = describe_inputs(id, in);
  PoincareSpec spec;
  spec.p = p;
  spec.lhs_exponent = p;
  auto center_or = [&](Center c) { return in.center ? *in.center : c; };

  if (id == "pp-two-weight") {
    spec.center = center_or(Center::Average);
    spec.rhs = RhsKind::TwoWeight;
    const Sides s = poincare_sides(f, u, v, in.q, spec);
    r.lhs = s.lhs;
    r.rhs = s.rhs;
    const double uv = two_weight_ap(u, v, p, CubeFamily(grid, in.shifted)).value;
    r.bound_factor = std::pow(uv, 1.0 / p);
    r.details["two_weight_ap"] = uv;
  } else if (id == "pp-measure") {
    if (!(in.alpha > 0.0)) throw DomainError("alpha must be positive");
    const Measure mu = in.mu ? *in.mu : Measure::lebesgue(grid);
    spec.center = center_or(Center::Average);
    const Sides s = poincare_sides(f, w, w, in.q, spec);
    const Functional a = Functional::fractional(in.alpha, p, mu, w);
    const double hyp = oscillation_constant(f, in.q, a);
    r.lhs = s.lhs;
    r.rhs = hyp * a.eval(in.q);
    r.bound_factor = 1.0 / in.alpha;
    r.details["hypothesis_constant"] = hyp;
  } else if (id == "sobolev-A" || id == "sobolev-B" || id == "a1-linear" || id == "mixed") {
    if (!(p < n)) throw DomainError(id + " needs p < n");
    if (id == "mixed" || id == "a1-linear") {
      spec.lhs_exponent = sobolev_exponent(ExponentKind::Classical, p, n);
      spec.center = center_or(Center::WeightedAverage);
      spec.rhs = id == "mixed" ? RhsKind::Mixed : RhsKind::GradientLp;
      if (id == "a1-linear") {
        const double a1 = ap_value(w, 1.0, in.shifted);
        r.bound_factor = a1;
        r.details["a1"] = a1;
      }
    } else {
      if (!(in.q_index >= 1.0) || !(in.q_index <= p)) throw DomainError("A_q index must satisfy 1 <= q <= p");
      const double aq = ap_value(w, in.q_index, in.shifted);
      const double ap = ap_value(w, p, in.shifted);
      const bool a = id == "sobolev-A";
      spec.lhs_exponent = sobolev_exponent(a ? ExponentKind::FormulaA : ExponentKind::FormulaB, p, n,
                                           in.q_index, aq);
      spec.center = center_or(Center::Average);
      r.bound_factor = a ? std::pow(ap, 1.0 / p) : std::pow(aq, 1.0 / (n * in.q_index)) * std::pow(ap, 2.0 / p);
      r.explicit_bound = a;
      r.details["aq"] = aq;
      r.details["ap"] = ap;
    }
    r.details["lhs_exponent"] = spec.lhs_exponent;
    const Sides s = poincare_sides(f, w, w, in.q, spec);
    r.lhs = s.lhs;
    r.rhs = s.rhs;
  } else if (id == "lorentz") {
    spec.center = center_or(Center::Average);
    spec.rhs = RhsKind::Lorentz;
    const Sides s = poincare_sides(f, w, w, in.q, spec);
    r.lhs = s.lhs;
    r.rhs = s.rhs;
    const double ap1 = ap1_constant(w, p, CubeFamily(grid, in.shifted)).value;
    r.bound_factor = std::pow(ap1, 1.0 / p);
    r.details["ap1"] = ap1;
  } else if (id == "higher-order") {
    spec.center = center_or(Center::Projection);
    spec.rhs = RhsKind::TwoWeight;
    spec.m = in.m;
    const Sides s = poincare_sides(f, u, v, in.q, spec);
    r.lhs = s.lhs;
    r.rhs = s.rhs;
    const double uv = two_weight_ap(u, v, p, CubeFamily(grid, in.shifted)).value;
    r.bound_factor = std::pow(uv, 1.0 / p);
    r.details["two_weight_ap"] = uv;
    r.details["m"] = in.m;
  } else if (id == "exp-JN") {
    const CubeIndex& q = in.q;
    double bmo = 0.0;
    if (!in.a) bmo = oscillation_constant(f, q, Functional::constant(grid, 1.0));
    const Functional a = in.a ? *in.a : Functional::constant(grid, bmo > 0.0 ? bmo : 1.0);
    const double hyp = oscillation_constant(f, q, a);
    const double mean = average(f, q);
    const GridFunction dev = f.map([mean](double x) { return std::fabs(x - mean); });
    r.lhs = orlicz_exp_norm(dev, q, Measure::lebesgue(grid));
    r.rhs = a.eval(q);
    r.details["hypothesis_constant"] = hyp;
    r.details["hypothesis_holds"] = hyp <= 1.0 + kSlack ? 1.0 : 0.0;
  } else if (id == "kz-downward") {
    if (!(p > 1.0) || !(p < in.p0)) throw DomainError("kz-downward needs 1 < p < p0");
    spec.center = center_or(Center::Average);
    const Sides s = poincare_sides(f, w, w, in.q, spec);
    r.lhs = s.lhs;
    r.rhs = s.rhs;
    const double ap = ap_value(w, p, in.shifted);
    r.bound_factor = std::pow(ap, (in.p0 - 1.0) / (p - 1.0));
    r.details["ap"] = ap;
    r.details["p0"] = in.p0;
  } else if (id == "pointwise-i1" || id == "i1-vs-m") {
    const CubeIndex& q = in.q;
    const std::vector<std::int64_t> cells = grid.cells_of(q);
    std::vector<double> g(static_cast<std::size_t>(grid.cell_count()), 0.0);
    const GridFunction grad = discrete_gradient(f, 1);
    for (std::int64_t c : cells) g[static_cast<std::size_t>(c)] = grad[c];
    const GridFunction gq(grid, std::move(g));
    const GridFunction i1 = fractional_integral(gq, 1.0, q);
    const bool pointwise = id == "pointwise-i1";
    const double mean = average(f, q);
    const GridFunction mg = pointwise ? gq : centered_maximal(gq);
    double best = -1.0;
    for (std::int64_t c : cells) {
      const double num = pointwise ? std::fabs(f[c] - mean) : i1[c];
      const double den = pointwise ? i1[c] : grid.side(q) * mg[c];
      if (num == 0.0 && den == 0.0) continue;
      const double ratio = safe_ratio(num, den);
      if (ratio > best) {
        best = ratio;
        r.lhs = num;
        r.rhs = den;
      }
    }
    r.details["sup_ratio"] = std::max(best, 0.0);
  } else if (id == "weak-1n'") {
    if (n < 2) throw DomainError("weak-1n' needs n >= 2");
    const double n_prime = static_cast<double>(n) / (n - 1);
    const Measure mu = in.mu ? *in.mu : Measure::lebesgue(grid);
    const CubeIndex& q = in.q;
    const std::vector<std::int64_t> cells = grid.cells_of(q);
    const double mean = average(f, q);
    std::vector<double> dev(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) dev[i] = std::fabs(f[cells[i]] - mean);
    r.lhs = weak_norm(dev, gather(mu.cell_masses(), cells), n_prime, 1.0);
    std::vector<double> density(mu.cell_masses().begin(), mu.cell_masses().end());
    for (double& x : density) x /= grid.cell_volume();
    const GridFunction mmu = centered_maximal(GridFunction(grid, std::move(density)));
    const GridFunction grad = discrete_gradient(f, 1);
    double acc = 0.0;
    for (std::int64_t c : cells) acc += grad[c] * std::pow(mmu[c], 1.0 / n_prime);
    r.rhs = acc * grid.cell_volume();
  } else {
    throw DomainError("unknown inequality id: " + id);
  }

  // A vanishing right side with a rounding-level left side (f already a
  // polynomial of the annihilated degree) satisfies the inequality.
  if (r.rhs == 0.0) {
    double scale = 0.0;
    grid.for_each_cell(in.q, [&](std::int64_t c) { scale = std::max(scale, std::fabs(f[c])); });
    if (r.lhs <= 1e-12 * scale) r.lhs = 0.0;
  }
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.measured_constant = r.ratio / r.bound_factor;
  r.pass = r.lhs <= r.bound_factor * r.rhs * (1.0 + kSlack);
  r.status = r.explicit_bound ? (r.pass ? "pass" : "fail") : "reported";
  return r;
}

GridFunction plateau(const Grid& grid, double eps) {
  if (!(eps > 0.0) || !(eps < 0.5)) throw DomainError("plateau needs 0 < eps < 1/2");
  const int n = grid.dim();
  return GridFunction::sample(grid, [eps, n](const Point& x) {
    double r = 0.0;
    for (int i = 0; i < n; ++i) r = std::max(r, std::fabs(x[i]));
    return std::clamp((2.0 * eps - r) / eps, 0.0, 1.0);
  });
}

namespace {

struct PlateauSides {
  double lhs = 0.0, lhs_oscillation = 0.0, rhs = 0.0;
};

PlateauSides plateau_sides(const GridFunction& f, const Weight& w, double p, double p_star) {
  const Grid& grid = f.grid();
  const CubeIndex root = grid.root_cube();
  const std::vector<std::int64_t> cells = grid.cells_of(root);
  const std::vector<double> mass = gather(w.cell_masses(), cells);
  const double total = w.mass(root);
  const std::vector<double> vals = gather(f.values(), cells);
  const double mean = weighted_average(f, w, root);
  std::vector<double> dev(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) dev[i] = vals[i] - mean;
  const std::vector<double> grad = gather(discrete_gradient(f, 1).values(), cells);
  PlateauSides s;
  s.lhs = power_mean(vals, mass, p_star, total);
  s.lhs_oscillation = power_mean(dev, mass, p_star, total);
  s.rhs = grid.side(root) * power_mean(grad, mass, p, total);
  return s;
}

}  // namespace

SharpnessSweep sharpness_sweep(double p, int n, double eps, const std::vector<double>& deltas,
                               int depth, const std::vector<double>& scaling_eps, Exec exec) {
  if (n < 2) throw DomainError("the sharpness example needs n >= 2");
  if (!(p >= 1.0) || !(p <= n)) throw DomainError("sharpness sweep needs 1 <= p <= n");
  if (!(eps > 0.0) || !(eps < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
  if (deltas.empty()) throw DomainError("no deltas given");
  for (double d : deltas) {
    if (!(d > 0.0) || !(d < 1.0)) throw DomainError("deltas must lie in (0, 1)");
  }
  std::vector<double> ds = deltas;
  std::sort(ds.begin(), ds.end(), std::greater<>());

  SharpnessSweep sw;
  sw.p = p;
  sw.n = n;
  sw.epsilon = eps;
  sw.depth = depth;
  sw.p_star = p < n ? n * p / (n - p) : kInf;

  const Grid grid(RootBox::centered(n, 1.0), depth);
  const GridFunction f = plateau(grid, eps);
  const CubeFamily dyadic(grid, false);
  std::vector<double> xs, ys;
  for (double delta : ds) {
    const Weight w = Weight::power(grid, delta, exec);
    SharpnessPoint pt;
    pt.delta = delta;
    pt.a1 = a1_constant(w, dyadic, exec).value;
    pt.weight_mass = w.mass(grid.root_cube());
    const PlateauSides s = plateau_sides(f, w, p, sw.p_star);
    pt.lhs = s.lhs;
    pt.lhs_oscillation = s.lhs_oscillation;
    pt.rhs = s.rhs;
    pt.constant_linear = pt.lhs / (pt.a1 * pt.rhs);
    pt.constant_half = pt.lhs / (std::pow(pt.a1, 1.0 / (2.0 * p)) * pt.rhs);
    xs.push_back(std::log(pt.a1));
    ys.push_back(std::log(pt.lhs / pt.rhs));
    sw.points.push_back(pt);

    if (!scaling_eps.empty()) {
      EpsilonScaling sc;
      sc.delta = delta;
      sc.eps = scaling_eps;
      std::vector<double> le;
      for (double e : scaling_eps) {
        const PlateauSides t = plateau_sides(plateau(grid, e), w, p, sw.p_star);
        sc.lhs.push_back(t.lhs);
        sc.rhs.push_back(t.rhs);
        le.push_back(std::log(e));
      }
      std::vector<double> ll(sc.lhs.size()), lr(sc.rhs.size());
      std::transform(sc.lhs.begin(), sc.lhs.end(), ll.begin(), [](double x) { return std::log(x); });
      std::transform(sc.rhs.begin(), sc.rhs.end(), lr.begin(), [](double x) { return std::log(x); });
      sc.lhs_exponent = least_squares(le, ll).slope;
      sc.rhs_exponent = least_squares(le, lr).slope;
      sc.lhs_predicted = std::isinf(sw.p_star) ? 0.0 : delta / sw.p_star;
      sc.rhs_predicted = delta / p - 1.0;
      auto close = [](double got, double want) {
        return std::fabs(got - want) <= kScalingTolerance * std::max(1.0, std::fabs(want));
      };
      sc.pass = close(sc.lhs_exponent, sc.lhs_predicted) && close(sc.rhs_exponent, sc.rhs_predicted);
      sw.scaling.push_back(std::move(sc));
    }
  }

  const LineFit fit = least_squares(xs, ys);
  sw.beta_hat = fit.slope;
  sw.beta_residual = fit.residual;
  sw.beta_pass = std::isfinite(sw.beta_hat) && sw.beta_hat >= 1.0 / p - kBetaTolerance;
  double lo = kInf, hi = 0.0;
  for (const SharpnessPoint& pt : sw.points) {
    lo = std::min(lo, pt.constant_linear);
    hi = std::max(hi, pt.constant_linear);
  }
  sw.linear_spread = hi / lo;
  sw.half_diverges = sw.points.size() >= 2;
  for (std::size_t i = 1; i < sw.points.size(); ++i) {
    if (!(sw.points[i].constant_half > sw.points[i - 1].constant_half)) sw.half_diverges = false;
  }
  return sw;
}

WeakStrongReport weak_implies_strong_demo(const GridFunction& g, const Measure& mu, const Measure& nu,
                                          double p) {
  const Grid& grid = g.grid();
  if (!(mu.grid() == grid) || !(nu.grid() == grid)) throw DomainError("function and measures live on different grids");
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  if (g.min() < 0.0) throw DomainError("truncation demo needs g >= 0");
  WeakStrongReport rep;
  rep.p = p;
  const auto mmass = mu.cell_masses();
  const auto nmass = nu.cell_masses();
  const std::vector<double> vals(g.values().begin(), g.values().end());
  const std::vector<double> mvec(mmass.begin(), mmass.end());

  double acc = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) acc += std::pow(vals[i], p) * mvec[i];
  rep.strong = std::pow(acc, 1.0 / p);
  rep.weak = weak_norm(vals, mvec, p, 1.0);
  auto grad_integral = [&](const GridFunction& h) {
    const GridFunction d = discrete_gradient(h, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) s += d[static_cast<std::int64_t>(i)] * nmass[i];
    return s;
  };
  rep.gradient_total = grad_integral(g);

  double gmin = kInf;
  for (double x : vals) {
    if (x > 0.0) gmin = std::min(gmin, x);
  }
  if (std::isinf(gmin)) {
    rep.pass = true;
    return rep;
  }
  const int kmin = static_cast<int>(std::floor(std::log2(gmin))) - 2;
  const int kmax = static_cast<int>(std::ceil(std::log2(g.max())));
  for (int k = kmin; k <= kmax; ++k) {
    const double lam = std::ldexp(1.0, k);
    WeakStrongTerm t;
    t.k = k;
    const GridFunction tg = truncate(g, lam);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i] > 2.0 * lam && vals[i] <= 4.0 * lam) t.level_mass += mvec[i];
      if (tg[static_cast<std::int64_t>(i)] > 0.5 * lam) t.truncated_mass += mvec[i];
    }
    t.weak_term = lam * std::pow(t.truncated_mass, 1.0 / p);
    t.gradient_term = grad_integral(tg);
    rep.level_sum += lam * std::pow(t.level_mass, 1.0 / p);
    rep.weak_sum += t.weak_term;
    rep.gradient_sum += t.gradient_term;
    if (t.weak_term > 0.0) rep.weak_constant = std::max(rep.weak_constant, safe_ratio(t.weak_term, t.gradient_term));
    rep.terms.push_back(t);
  }
  rep.chain_constant = 4.0 * rep.weak_constant;
  rep.pass = rep.strong <= rep.chain_constant * rep.gradient_total * (1.0 + kSlack);
  return rep;
}

}  // namespace wlab
