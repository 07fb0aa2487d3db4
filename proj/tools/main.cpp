#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wlab/decomposition.hpp"
#include "wlab/functionals.hpp"
#include "wlab/inequalities.hpp"
#include "wlab/io.hpp"
#include "wlab/kernels.hpp"
#include "wlab/operators.hpp"
#include "wlab/weights.hpp"

using namespace wlab;

namespace {

constexpr int kCliCellBits = 24;

/// Bad command-line configuration; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::uint64_t seed = 1;
  std::optional<int> depth;
  std::string out;
  std::string format = "json";
  std::string csv;
  bool shifted = false;
};

struct Output {
  Json result;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::optional<Grid> grid;
  Json config = Json::object();
  bool explicit_ok = true;
  std::optional<std::string> csv_text;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw UsageError("bad number in list: " + item);
    } catch (const std::logic_error&) {
      throw UsageError("bad number in list: " + item);
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

/// A JSON document given inline or as a path to a file.
Json json_arg(const std::string& s) {
  if (s.empty()) throw UsageError("empty JSON argument");
  const char c = s.front();
  if (c == '{' || c == '[' || c == '"') {
    try {
      return Json::parse(s);
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("bad JSON argument: ") + e.what());
    }
  }
  if (s == "lebesgue" || s == "unit") return s;
  return read_json_file(s);
}

bool is_power_spec(const Json& spec) { return spec.is_object() && spec.contains("power"); }

void check_cap(int n, int depth) {
  if (n < 1 || n > kMaxDim) throw UsageError("dimension must be in [1, 4]");
  if (depth < 0 || n * depth > kCliCellBits) throw UsageError("depth too large: n * depth must be <= 24");
}

Grid make_grid(int n, int depth, bool centered) {
  check_cap(n, depth);
  return Grid(centered ? RootBox::centered(n, 1.0) : RootBox::unit(n), depth);
}

GridFunction builtin_function(const std::string& name, const Grid& grid) {
  const int n = grid.dim();
  auto sum_pow = [n](int k) {
    return [n, k](const Point& x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += std::pow(x[i], k);
      return s;
    };
  };
  if (name == "linear") return GridFunction::sample(grid, sum_pow(1));
  if (name == "quadratic") return GridFunction::sample(grid, sum_pow(2));
  if (name == "cubic") return GridFunction::sample(grid, sum_pow(3));
  if (name == "sine") {
    return GridFunction::sample(grid, [](const Point& x) { return std::sin(2.0 * M_PI * x[0]); });
  }
  if (name.rfind("plateau:", 0) == 0) return plateau(grid, std::stod(name.substr(8)));
  throw UsageError("unknown function: " + name + " (linear, quadratic, cubic, sine, plateau:<eps>)");
}

std::map<std::string, std::string> key_values(const std::vector<std::string>& items) {
  std::map<std::string, std::string> kv;
  for (const std::string& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value, got " + it);
    kv[it.substr(0, eq)] = it.substr(eq + 1);
  }
  return kv;
}

Json family_descriptor(bool shifted) {
  return Json{{"kind", shifted ? "dyadic+shifted" : "dyadic"}};
}

// ---------------------------------------------------------------- constants

struct ConstantsArgs {
  std::vector<std::string> power;
  std::string weight;
  std::string input;
  double p = 2.0;
  int n = 1;
};

Output run_constants(const ConstantsArgs& a, const Global& g) {
  Output o;
  const int depth = g.depth.value_or(8);
  std::optional<Weight> w;
  if (!a.power.empty()) {
    const auto kv = key_values(a.power);
    if (!kv.count("delta")) throw UsageError("--power-weight needs delta=<value>");
    const double delta = std::stod(kv.at("delta"));
    const int n = kv.count("n") ? std::stoi(kv.at("n")) : a.n;
    w = Weight::power(make_grid(n, depth, true), delta);
    o.config["weight"] = Json{{"power", {{"delta", delta}}}};
  } else if (!a.input.empty()) {
    GridFunction d = load_grid_function(a.input);
    check_cap(d.grid().dim(), d.grid().depth());
    w = Weight::from_density(std::move(d));
    o.config["input"] = a.input;
  } else if (!a.weight.empty()) {
    const Json spec = json_arg(a.weight);
    w = weight_from_spec(spec, make_grid(a.n, depth, is_power_spec(spec)));
    o.config["weight"] = spec;
  } else {
    throw UsageError("constants needs --power-weight, --weight or --input");
  }
  if (!(a.p >= 1.0)) throw UsageError("--p must be >= 1");
  o.config["p"] = a.p;
  const WeightConstantsReport r = constants_report(*w, a.p, g.shifted);
  o.grid = w->grid();
  o.result = to_json(r, w->grid().dim());
  std::string csv = "constant,value,argmax_level,argmax_origin\n";
  const int n = w->grid().dim();
  for (const auto& [name, c] : std::vector<std::pair<std::string, const ConstantValue*>>{
           {"ap", &r.ap}, {"a1", &r.a1}, {"ainf", &r.ainf}, {"ap1", &r.ap1}, {"rhinf", &r.rhinf}}) {
    csv += name + "," + format_number(c->value) + "," + std::to_string(c->argmax.level) + ",";
    for (int i = 0; i < n; ++i) csv += (i ? ";" : "") + std::to_string(c->argmax.origin[i]);
    csv += "\n";
  }
  o.csv_text = csv;
  return o;
}

// ---------------------------------------------------------------- cz

struct CzArgs {
  std::string input;
  double L = 2.0;
  std::string emit = "stopping";
  std::string cube;
  bool as_h = false;
  double scale = 1.0;
};

Output run_cz(const CzArgs& a, const Global&) {
  Output o;
  if (a.input.empty()) throw UsageError("cz needs --input");
  if (!(a.scale > 0.0)) throw UsageError("--scale must be positive");
  const GridFunction f = load_grid_function(a.input);
  const Grid& grid = f.grid();
  check_cap(grid.dim(), grid.depth());
  const CubeIndex q = a.cube.empty() ? grid.root_cube() : cube_from_json(json_arg(a.cube), grid);
  GridFunction h = f;
  if (!a.as_h) {
    const double mean = average(f, q);
    h = f.map([mean, s = a.scale](double x) { return std::fabs(x - mean) / s; });
  }
  const CZDecomposition cz = cz_decompose(h, q, a.L);
  o.grid = grid;
  o.config = Json{{"input", a.input}, {"L", a.L}, {"emit", a.emit}, {"as_h", a.as_h}, {"scale", a.scale},
                  {"cube", to_json(q, grid.dim())}};
  if (a.emit == "stopping") {
    o.result = to_json(cz, false).at("stopping");
  } else if (a.emit == "good") {
    o.result = to_json(cz.good);
  } else if (a.emit == "bad") {
    o.result = to_json(cz, true).at("bad");
  } else if (a.emit == "report") {
    o.result = to_json(cz, false);
  } else {
    throw UsageError("--emit must be stopping, good, bad or report");
  }
  o.header = {"level"};
  for (int i = 0; i < grid.dim(); ++i) o.header.push_back("c" + std::to_string(i));
  for (const CubeIndex& s : cz.stopping) {
    std::vector<double> row{static_cast<double>(s.level)};
    for (int i = 0; i < grid.dim(); ++i) row.push_back(static_cast<double>(s.coords[i]));
    o.rows.push_back(std::move(row));
  }
  return o;
}

// ---------------------------------------------------------------- functional-check

struct FunctionalArgs {
  std::string functional;
  std::string weight = "lebesgue";
  double p = 1.0;
  int n = 1;
  std::string mode = "exhaustive";
  int trials = 1000;
  std::string Ls;
  std::string cube;
  std::optional<double> bound_exponent;
};

Output run_functional(const FunctionalArgs& a, const Global& g) {
  Output o;
  if (a.functional.empty()) throw UsageError("functional-check needs --functional");
  const Json spec = json_arg(a.functional);
  const int depth = g.depth.value_or(4);
  const Grid grid = spec.contains("grid") ? grid_from_json(spec.at("grid")) : make_grid(a.n, depth, false);
  check_cap(grid.dim(), grid.depth());
  const Functional fn = functional_from_spec(spec, grid);
  const Json wspec = json_arg(a.weight);
  const Weight w = weight_from_spec(wspec, grid);
  const CubeIndex q = a.cube.empty() ? grid.root_cube() : cube_from_json(json_arg(a.cube), grid);
  SearchMode mode;
  try {
    mode = parse_search_mode(a.mode);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!(a.p >= 1.0)) throw UsageError("--p must be >= 1");
  o.grid = grid;
  o.config = Json{{"functional", spec}, {"weight", wspec}, {"p", a.p}, {"mode", a.mode}, {"trials", a.trials},
                  {"seed", g.seed}, {"cube", to_json(q, grid.dim())}};
  if (a.Ls.empty()) {
    const DpReport r = max_dp_ratio(fn, w, a.p, q, mode, a.trials, g.seed);
    o.result = to_json(r, grid.dim());
    o.header = {"worst_ratio", "trials"};
    o.rows = {{r.worst_ratio, static_cast<double>(r.trials)}};
    return o;
  }
  SdOptions opt;
  opt.mode = mode;
  opt.trials = a.trials;
  opt.seed = g.seed;
  opt.bound_exponent = a.bound_exponent;
  const std::vector<double> Ls = parse_list(a.Ls);
  o.config["Ls"] = Ls;
  const DpReport r = sdp_check(fn, w, a.p, q, Ls, opt);
  o.result = to_json(r, grid.dim());
  o.header = {"L", "max_ratio", "bound", "violations"};
  for (const SmallnessRow& row : r.rows) {
    o.rows.push_back({row.L, row.max_ratio, row.bound.value_or(NAN), static_cast<double>(row.violations)});
    if (row.violations > 0) o.explicit_ok = false;
  }
  return o;
}

// ---------------------------------------------------------------- poincare

struct PoincareArgs {
  std::string id;
  std::string input;
  std::string function;
  std::string weight;
  std::string u, v, mu;
  double p = 1.0;
  double q = 1.0;
  double p0 = 2.0;
  double alpha = 1.0;
  int m = 1;
  int n = 1;
  std::string center;
  std::string cube;
};

Output run_poincare(const PoincareArgs& a, const Global& g) {
  Output o;
  if (a.id.empty()) throw UsageError("poincare needs --id");
  const auto ids = inequality_ids();
  if (a.id != "weak-strong" && std::find(ids.begin(), ids.end(), a.id) == ids.end()) {
    throw UsageError("unknown --id " + a.id);
  }
  std::optional<Json> wspec, uspec, vspec, muspec;
  if (!a.weight.empty()) wspec = json_arg(a.weight);
  if (!a.u.empty()) uspec = json_arg(a.u);
  if (!a.v.empty()) vspec = json_arg(a.v);
  if (!a.mu.empty()) muspec = json_arg(a.mu);
  const bool centered = (wspec && is_power_spec(*wspec)) || (uspec && is_power_spec(*uspec)) ||
                        (vspec && is_power_spec(*vspec));
  std::optional<GridFunction> f;
  if (!a.input.empty()) {
    f = load_grid_function(a.input);
    check_cap(f->grid().dim(), f->grid().depth());
  } else if (!a.function.empty()) {
    f = builtin_function(a.function, make_grid(a.n, g.depth.value_or(6), centered));
  } else {
    throw UsageError("poincare needs --input or --function");
  }
  const Grid& grid = f->grid();
  o.grid = grid;
  o.config = Json{{"id", a.id}, {"p", a.p}, {"q", a.q}, {"p0", a.p0}, {"alpha", a.alpha}, {"m", a.m}};
  if (!a.input.empty()) o.config["input"] = a.input;
  if (!a.function.empty()) o.config["function"] = a.function;

  if (a.id == "weak-strong") {
    const Measure mu = muspec ? measure_from_spec(*muspec, grid) : Measure::lebesgue(grid);
    const Measure nu = wspec ? measure_from_spec(*wspec, grid) : Measure::lebesgue(grid);
    const WeakStrongReport r = weak_implies_strong_demo(f->abs(), mu, nu, a.p);
    o.result = to_json(r);
    o.header = {"k", "weak_term", "gradient_term"};
    for (const WeakStrongTerm& t : r.terms) o.rows.push_back({static_cast<double>(t.k), t.weak_term, t.gradient_term});
    return o;
  }

  CheckInputs in(*f, grid.root_cube());
  if (!a.cube.empty()) in.q = cube_from_json(json_arg(a.cube), grid);
  if (wspec) in.w = weight_from_spec(*wspec, grid);
  if (uspec) in.u = weight_from_spec(*uspec, grid);
  if (vspec) in.v = weight_from_spec(*vspec, grid);
  if (muspec) in.mu = measure_from_spec(*muspec, grid);
  in.p = a.p;
  in.q_index = a.q;
  in.p0 = a.p0;
  in.alpha = a.alpha;
  in.m = a.m;
  in.shifted = g.shifted;
  if (!a.center.empty()) {
    try {
      in.center = parse_center(a.center);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  for (const auto& [k, s] : std::map<std::string, const std::optional<Json>*>{
           {"weight", &wspec}, {"u", &uspec}, {"v", &vspec}, {"mu", &muspec}}) {
    if (*s) o.config[k] = **s;
  }
  const CheckResult r = check_inequality(a.id, in);
  o.result = to_json(r);
  o.header = {"lhs", "rhs", "bound_factor", "ratio", "measured_constant", "pass"};
  o.rows = {{r.lhs, r.rhs, r.bound_factor, r.ratio, r.measured_constant, r.pass ? 1.0 : 0.0}};
  if (r.explicit_bound && !r.pass) o.explicit_ok = false;
  return o;
}

// ---------------------------------------------------------------- sharpness

struct SharpnessArgs {
  double p = 1.0;
  int n = 2;
  double eps = 0.05;
  std::string deltas = "0.5,0.25,0.125,0.0625";
  std::string scaling;
};

Output run_sharpness(const SharpnessArgs& a, const Global& g) {
  Output o;
  const int depth = g.depth.value_or(7);
  check_cap(a.n, depth);
  if (a.n < 2) throw UsageError("--n must be >= 2");
  if (!(a.p >= 1.0) || a.p > a.n) throw UsageError("--p must lie in [1, n]");
  if (!(a.eps > 0.0) || !(a.eps < 0.5)) throw UsageError("--eps must lie in (0, 1/2)");
  const std::vector<double> deltas = parse_list(a.deltas);
  const std::vector<double> scaling = a.scaling.empty() ? std::vector<double>{} : parse_list(a.scaling);
  const SharpnessSweep s = sharpness_sweep(a.p, a.n, a.eps, deltas, depth, scaling);
  o.grid = Grid(RootBox::centered(a.n, 1.0), depth);
  o.config = Json{{"p", a.p}, {"n", a.n}, {"eps", a.eps}, {"deltas", deltas}, {"scaling_eps", scaling}};
  o.result = to_json(s);
  o.header = {"delta", "a1", "lhs", "rhs_no_constant", "constant_linear", "constant_half"};
  for (const SharpnessPoint& pt : s.points) {
    o.rows.push_back({pt.delta, pt.a1, pt.lhs, pt.rhs, pt.constant_linear, pt.constant_half});
  }
  return o;
}

// ---------------------------------------------------------------- rdf

struct RdfArgs {
  std::string weight = "lebesgue";
  std::string input;
  int probe = 0;
  double p = 2.0;
  int n = 1;
  int K = 20;
  std::string maximal = "dyadic";
  std::string opnorm = "empirical";
  double opnorm_value = 0.0;
  double cn = 1.0;
};

Output run_rdf(const RdfArgs& a, const Global& g) {
  Output o;
  const Json wspec = json_arg(a.weight);
  std::optional<GridFunction> h;
  std::optional<Grid> grid;
  if (!a.input.empty()) {
    h = load_grid_function(a.input);
    grid = h->grid();
    check_cap(grid->dim(), grid->depth());
  } else {
    grid = make_grid(a.n, g.depth.value_or(8), is_power_spec(wspec));
  }
  const Weight w = weight_from_spec(wspec, *grid);
  OperatorConfig cfg;
  try {
    cfg.maximal = parse_maximal_kind(a.maximal);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  cfg.rdf_terms = a.K;
  cfg.probe_seed = g.seed;
  if (a.opnorm == "empirical") {
    cfg.opnorm_mode = OpnormMode::Empirical;
  } else if (a.opnorm == "supplied") {
    cfg.opnorm_mode = OpnormMode::Supplied;
    cfg.opnorm_value = a.opnorm_value;
  } else if (a.opnorm == "ap-bound") {
    cfg.opnorm_mode = OpnormMode::ApBound;
    cfg.cn = a.cn;
  } else {
    throw UsageError("--opnorm must be empirical, supplied or ap-bound");
  }
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!h) {
    const auto corpus = probe_corpus(*grid, cfg.probe_seed, cfg.probe_count);
    if (a.probe < 0 || a.probe >= static_cast<int>(corpus.size())) throw UsageError("--probe out of range");
    h = corpus[static_cast<std::size_t>(a.probe)];
  }
  const RdfResult r = rubio_de_francia(*h, w, a.p, cfg);
  const RdfProperties props = rdf_properties(*h, r);
  o.grid = grid;
  o.config = Json{{"weight", wspec}, {"p", a.p}, {"K", a.K}, {"maximal", a.maximal}, {"opnorm", a.opnorm},
                  {"seed", g.seed}};
  if (a.input.empty()) o.config["probe"] = a.probe;
  else o.config["input"] = a.input;
  o.result = to_json(r, props);
  o.header = {"opnorm", "a_min_gap", "b_ratio", "b_bound", "c_a1", "c_bound"};
  o.rows = {{r.opnorm, props.a_min_gap, props.b_ratio, props.b_bound, props.c_a1, props.c_bound}};
  o.explicit_ok = props.a_pass && props.b_pass && props.c_pass;
  return o;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string deltas = "0.5,0.25,0.125,0.0625";
  double p = 2.0;
  int n = 1;
};

Output run_report(const ReportArgs& a, const Global& g) {
  Output o;
  const int depth = g.depth.value_or(10);
  const Grid grid = make_grid(a.n, depth, true);
  const std::vector<double> deltas = parse_list(a.deltas);
  if (!(a.p >= 1.0)) throw UsageError("--p must be >= 1");
  o.grid = grid;
  o.config = Json{{"p", a.p}, {"n", a.n}, {"deltas", deltas}};
  Json identity = to_json(constants_report(Weight::unit(grid), a.p, g.shifted), grid.dim());
  Json points = Json::array();
  std::vector<double> xs, ys;
  for (double d : deltas) {
    const WeightConstantsReport r = constants_report(Weight::power(grid, d), a.p, g.shifted);
    points.push_back(Json{{"delta", d}, {"constants", to_json(r, grid.dim())}});
    o.rows.push_back({d, r.ap.value, r.a1.value, r.ainf.value, r.ap1.value, r.rh.exponent});
    xs.push_back(std::log(d));
    ys.push_back(std::log(r.a1.value));
  }
  double slope = NAN;
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / n, my += ys[i] / n;
    for (std::size_t i = 0; i < xs.size(); ++i) sxx += (xs[i] - mx) * (xs[i] - mx), sxy += (xs[i] - mx) * (ys[i] - my);
    slope = sxy / sxx;
  }
  o.result = Json{{"identity", identity}, {"power", points}, {"a1_slope", std::isfinite(slope) ? Json(slope) : Json(nullptr)}};
  o.header = {"delta", "ap", "a1", "ainf", "ap1", "rh_exponent"};
  return o;
}

void emit(const std::string& command, const Output& o, const Global& g) {
  Json doc{{"command", command},
           {"config", o.config},
           {"seed", g.seed},
           {"family", family_descriptor(g.shifted)},
           {"result", o.result}};
  if (o.grid) doc["grid"] = grid_to_json(*o.grid);
  const std::string json = doc.dump(2) + "\n";
  const std::string csv = o.csv_text.value_or(csv_table(o.header, o.rows));
  const std::string& primary = g.format == "csv" ? csv : json;
  if (g.out.empty() || g.out == "-") {
    std::cout << primary;
  } else {
    write_text_file(g.out, primary);
  }
  if (!g.csv.empty()) write_text_file(g.csv, csv);
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  CLI::App app{"wlab: weighted inequalities on dyadic grids"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  int depth = -1;
  app.add_option("--seed", g.seed, "seed for randomized searches and probe corpora");
  app.add_option("--depth", depth, "grid depth");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--csv", g.csv, "also write plot-ready CSV here");
  app.add_flag("--shifted-grids", g.shifted, "add half-shifted cubes to the family for weight constants");

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "weight constants report");
  constants->add_option("--power-weight", ca.power, "delta=<d> [n=<n>]")->expected(1, 2);
  constants->add_option("--weight", ca.weight, "weight spec (JSON or file)");
  constants->add_option("--input", ca.input, "grid file of weight values");
  constants->add_option("--p", ca.p, "A_p exponent");
  constants->add_option("--n", ca.n, "dimension");

  CzArgs za;
  auto* cz = app.add_subcommand("cz", "stopping-time decomposition");
  cz->add_option("--input", za.input, "grid file of f (or h with --as-h)")->required();
  cz->add_option("--L", za.L, "level L > 1");
  cz->add_option("--emit", za.emit, "stopping, good, bad or report");
  cz->add_option("--cube", za.cube, "[level, [coords...]]");
  cz->add_option("--scale", za.scale, "divide |f - f_Q| by this a(Q)");
  cz->add_flag("--as-h", za.as_h, "use the input as h directly");

  FunctionalArgs fa;
  double bound_exponent = NAN;
  auto* functional = app.add_subcommand("functional-check", "D_p / SD_p checks for a functional");
  functional->add_option("--functional", fa.functional, "functional spec (JSON or file)")->required();
  functional->add_option("--weight", fa.weight, "weight spec");
  functional->add_option("--p", fa.p, "exponent p");
  functional->add_option("--n", fa.n, "dimension");
  functional->add_option("--mode", fa.mode, "exhaustive, random or greedy");
  functional->add_option("--trials", fa.trials, "random trials");
  functional->add_option("--Ls", fa.Ls, "comma-separated smallness levels");
  functional->add_option("--cube", fa.cube, "[level, [coords...]]");
  functional->add_option("--bound-exponent", bound_exponent, "checked exponent in (1/L)^e");

  PoincareArgs pa;
  auto* poincare = app.add_subcommand("poincare", "evaluate a catalog inequality");
  poincare->add_option("--id", pa.id, "inequality id (or weak-strong)")->required();
  poincare->add_option("--input", pa.input, "grid file of f");
  poincare->add_option("--function", pa.function, "built-in f: linear, quadratic, cubic, sine, plateau:<eps>");
  poincare->add_option("--weight", pa.weight, "weight spec");
  poincare->add_option("--u", pa.u, "outer weight for two-weight forms");
  poincare->add_option("--v", pa.v, "inner weight for two-weight forms");
  poincare->add_option("--mu", pa.mu, "measure spec");
  poincare->add_option("--p", pa.p, "gradient exponent");
  poincare->add_option("--q", pa.q, "A_q index");
  poincare->add_option("--p0", pa.p0, "upper exponent for kz-downward");
  poincare->add_option("--alpha", pa.alpha, "fractional order for pp-measure");
  poincare->add_option("--m", pa.m, "derivative order");
  poincare->add_option("--n", pa.n, "dimension for built-in functions");
  poincare->add_option("--center", pa.center, "average, weighted-average or projection");
  poincare->add_option("--cube", pa.cube, "[level, [coords...]]");

  SharpnessArgs sa;
  auto* sharp = app.add_subcommand("sharpness", "power-weight sharpness sweep");
  sharp->add_option("--p", sa.p, "gradient exponent");
  sharp->add_option("--n", sa.n, "dimension");
  sharp->add_option("--eps", sa.eps, "plateau radius");
  sharp->add_option("--deltas", sa.deltas, "comma-separated deltas");
  sharp->add_option("--scaling-eps", sa.scaling, "comma-separated eps values for the scaling check");

  RdfArgs ra;
  auto* rdf = app.add_subcommand("rdf", "Rubio de Francia construction");
  rdf->add_option("--weight", ra.weight, "weight spec");
  rdf->add_option("--input", ra.input, "grid file of h >= 0");
  rdf->add_option("--probe", ra.probe, "probe corpus member when no input is given");
  rdf->add_option("--p", ra.p, "exponent p");
  rdf->add_option("--n", ra.n, "dimension");
  rdf->add_option("--K", ra.K, "number of series terms");
  rdf->add_option("--maximal", ra.maximal, "dyadic, centered or powered");
  rdf->add_option("--opnorm", ra.opnorm, "empirical, supplied or ap-bound");
  rdf->add_option("--opnorm-value", ra.opnorm_value, "operator norm for --opnorm supplied");
  rdf->add_option("--cn", ra.cn, "dimensional factor for --opnorm ap-bound");

  ReportArgs pr;
  auto* report = app.add_subcommand("report", "calibration and power-weight trend report");
  report->add_option("--deltas", pr.deltas, "comma-separated deltas");
  report->add_option("--p", pr.p, "A_p exponent");
  report->add_option("--n", pr.n, "dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (depth >= 0) g.depth = depth;
  if (std::isfinite(bound_exponent)) fa.bound_exponent = bound_exponent;

  try {
    Output o;
    std::string name;
    if (*constants) {
      name = "constants";
      o = run_constants(ca, g);
    } else if (*cz) {
      name = "cz";
      o = run_cz(za, g);
    } else if (*functional) {
      name = "functional-check";
      o = run_functional(fa, g);
    } else if (*poincare) {
      name = "poincare";
      o = run_poincare(pa, g);
    } else if (*sharp) {
      name = "sharpness";
      o = run_sharpness(sa, g);
    } else if (*rdf) {
      name = "rdf";
      o = run_rdf(ra, g);
    } else {
      name = "report";
      o = run_report(pr, g);
    }
    emit(name, o, g);
    return o.explicit_ok ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
