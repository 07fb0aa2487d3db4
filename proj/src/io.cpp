#include "wlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wlab {

namespace {

/// Non-finite values become strings; JSON has no infinity.
Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json cube_list(const std::vector<CubeIndex>& cubes, int n) {
  Json out = Json::array();
  for (const CubeIndex& c : cubes) out.push_back(to_json(c, n));
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json grid_to_json(const Grid& grid) {
  const int n = grid.dim();
  Json corner = Json::array();
  for (int i = 0; i < n; ++i) corner.push_back(grid.root().corner[i]);
  return Json{{"n", n}, {"depth", grid.depth()}, {"root", {{"corner", corner}, {"side", grid.root().side}}}};
}

Grid grid_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("grid description must be a JSON object");
  const int n = j.at("n").get<int>();
  const int depth = j.at("depth").get<int>();
  if (n < 1 || n > kMaxDim) throw DomainError("grid dimension must be in [1, 4]");
  RootBox root = RootBox::unit(n);
  if (j.contains("root")) {
    const Json& r = j.at("root");
    root.side = r.at("side").get<double>();
    const Json& c = r.at("corner");
    if (!c.is_array() || static_cast<int>(c.size()) != n) throw DomainError("root corner must have n entries");
    for (int i = 0; i < n; ++i) root.corner[i] = c[static_cast<std::size_t>(i)].get<double>();
  }
  return Grid(root, depth);
}

Json to_json(const GridFunction& f) {
  Json j = grid_to_json(f.grid());
  Json vals = Json::array();
  for (double x : f.values()) vals.push_back(x);
  j["values"] = std::move(vals);
  return j;
}

GridFunction grid_function_from_json(const Json& j) {
  const Grid grid = grid_from_json(j);
  const Json& vals = j.at("values");
  if (!vals.is_array() || static_cast<std::int64_t>(vals.size()) != grid.cell_count()) {
    throw DomainError("grid file needs exactly 2^(n*depth) values");
  }
  std::vector<double> v;
  v.reserve(vals.size());
  for (const Json& x : vals) {
    if (!x.is_number()) throw DomainError("grid values must be numbers");
    const double d = x.get<double>();
    if (!std::isfinite(d)) throw DomainError("grid values must be finite");
    v.push_back(d);
  }
  return GridFunction(grid, std::move(v));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

GridFunction load_grid_function(const std::string& path) {
  return grid_function_from_json(read_json_file(path));
}

void save_grid_function(const std::string& path, const GridFunction& f) {
  write_text_file(path, to_json(f).dump() + "\n");
}

namespace {

GridFunction inline_or_path(const Json& j) {
  return j.is_string() ? load_grid_function(j.get<std::string>()) : grid_function_from_json(j);
}

}  // namespace

Weight weight_from_spec(const Json& spec, const Grid& grid) {
  if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    if (s == "lebesgue" || s == "unit") return Weight::unit(grid);
    throw DomainError("unknown weight spec: " + s);
  }
  if (!spec.is_object() || spec.size() != 1) throw DomainError("weight spec must be a string or a one-key object");
  if (spec.contains("power")) return Weight::power(grid, spec.at("power").at("delta").get<double>());
  if (spec.contains("step")) {
    const Json& s = spec.at("step");
    if (!s.is_array() || s.size() != 2) throw DomainError("step weight needs two values");
    const double a = s[0].get<double>(), b = s[1].get<double>();
    const double mid = grid.root().corner[0] + 0.5 * grid.root().side;
    return Weight::from_density(GridFunction::sample(grid, [=](const Point& x) { return x[0] < mid ? a : b; }));
  }
  if (spec.contains("grid")) {
    GridFunction d = inline_or_path(spec.at("grid"));
    if (!(d.grid() == grid)) throw DomainError("weight grid does not match the experiment grid");
    return Weight::from_density(std::move(d));
  }
  throw DomainError("unknown weight spec: " + spec.dump());
}

Measure measure_from_spec(const Json& spec, const Grid& grid) {
  if (spec.is_object() && spec.contains("atoms")) {
    std::vector<std::pair<Point, double>> atoms;
    for (const Json& a : spec.at("atoms")) {
      if (!a.is_array() || a.size() != 2) throw DomainError("atom must be [[x...], mass]");
      Point x{};
      const Json& xs = a[0];
      if (!xs.is_array() || static_cast<int>(xs.size()) != grid.dim()) throw DomainError("atom position needs n coordinates");
      for (int i = 0; i < grid.dim(); ++i) x[i] = xs[static_cast<std::size_t>(i)].get<double>();
      atoms.emplace_back(x, a[1].get<double>());
    }
    return Measure::atomic(grid, atoms);
  }
  if (spec.is_string() && spec.get<std::string>() == "lebesgue") return Measure::lebesgue(grid);
  return Measure::of_weight(weight_from_spec(spec, grid));
}

Functional functional_from_spec(const Json& spec, const Grid& grid) {
  const std::string kind = spec.at("kind").get<std::string>();
  auto weight_or_unit = [&](const char* key) {
    return spec.contains(key) ? weight_from_spec(spec.at(key), grid) : Weight::unit(grid);
  };
  if (kind == "fractional") {
    const Weight w = weight_or_unit("w");
    const Measure mu = spec.contains("mu") ? measure_from_spec(spec.at("mu"), grid) : Measure::of_weight(w);
    return Functional::fractional(spec.at("alpha").get<double>(), spec.at("p").get<double>(), mu, w);
  }
  if (kind == "gradient") {
    const GridFunction f = inline_or_path(spec.at("f"));
    if (!(f.grid() == grid)) throw DomainError("gradient functional: f lives on a different grid");
    const int m = spec.value("m", 1);
    const double p = spec.at("p").get<double>();
    const double scale = spec.value("scale", 1.0);
    if (spec.contains("u") || spec.contains("v")) {
      return Functional::gradient(f, m, p, weight_or_unit("v"), weight_or_unit("u"), scale);
    }
    return Functional::gradient(f, m, p, weight_or_unit("w"), scale);
  }
  if (kind == "increasing") {
    return Functional::increasing(grid, spec.at("table").get<std::vector<std::vector<double>>>());
  }
  if (kind == "constant") return Functional::constant(grid, spec.at("value").get<double>());
  throw DomainError("unknown functional kind: " + kind);
}

Json to_json(const CubeIndex& q, int n) {
  Json coords = Json::array();
  for (int i = 0; i < n; ++i) coords.push_back(q.coords[i]);
  return Json::array({q.level, coords});
}

CubeIndex cube_from_json(const Json& j, const Grid& grid) {
  if (!j.is_array() || j.size() != 2 || !j[1].is_array()) throw DomainError("cube must be [level, [coords...]]");
  CubeIndex q;
  q.level = j[0].get<int>();
  const Json& c = j[1];
  if (static_cast<int>(c.size()) != grid.dim()) throw DomainError("cube needs n coordinates");
  for (int i = 0; i < grid.dim(); ++i) q.coords[i] = c[static_cast<std::size_t>(i)].get<std::int64_t>();
  grid.require(q);
  return q;
}

Json to_json(const FamilyCube& c, int n) {
  Json origin = Json::array();
  for (int i = 0; i < n; ++i) origin.push_back(c.origin[i]);
  return Json{{"level", c.level}, {"origin", origin}};
}

Json to_json(const ConstantValue& c, int n) {
  return Json{{"value", num(c.value)}, {"argmax", to_json(c.argmax, n)}};
}

Json to_json(const WeightConstantsReport& r, int n) {
  return Json{{"p", r.p},
              {"ap", to_json(r.ap, n)},
              {"a1", to_json(r.a1, n)},
              {"ainf", to_json(r.ainf, n)},
              {"ap1", to_json(r.ap1, n)},
              {"rhinf", to_json(r.rhinf, n)},
              {"rh", {{"exponent", num(r.rh.exponent)},
                      {"worst_ratio", num(r.rh.worst_ratio)},
                      {"argmax", to_json(r.rh.argmax, n)},
                      {"pass", r.rh.pass}}},
              {"depth", r.depth},
              {"family", {{"shifted", r.shifted}, {"size", r.family_size}}}};
}

Json to_json(const CZDecomposition& cz, bool with_functions) {
  const int n = cz.good.grid().dim();
  Json j{{"q", to_json(cz.q, n)},
         {"L", cz.L},
         {"average", num(cz.average)},
         {"stopping", cube_list(cz.stopping, n)},
         {"omega_cells", cz.omega_cells}};
  if (with_functions) {
    Json good = Json::array();
    for (double x : cz.good.values()) good.push_back(x);
    j["good"] = std::move(good);
    Json bad = Json::array();
    for (const BadPart& b : cz.bad) bad.push_back(Json{{"cube", to_json(b.cube, n)}, {"values", b.values}});
    j["bad"] = std::move(bad);
  }
  return j;
}

Json to_json(const DpReport& r, int n) {
  Json rows = Json::array();
  for (const SmallnessRow& row : r.rows) {
    Json jr{{"L", row.L},
            {"max_ratio", num(row.max_ratio)},
            {"witness", cube_list(row.witness, n)},
            {"families", row.families},
            {"violations", row.violations}};
    jr["bound"] = row.bound ? num(*row.bound) : Json(nullptr);
    rows.push_back(std::move(jr));
  }
  Json j{{"p", r.p},
         {"mode", to_string(r.mode)},
         {"worst_ratio", num(r.worst_ratio)},
         {"witness", cube_list(r.witness, n)},
         {"trials", r.trials},
         {"rows", rows},
         {"slope_residual", num(r.slope_residual)}};
  j["slope"] = r.slope ? num(*r.slope) : Json(nullptr);
  return j;
}

Json to_json(const CheckResult& r) {
  Json details = Json::object();
  for (const auto& [k, v] : r.details) details[k] = num(v);
  return Json{{"id", r.id},
              {"lhs", num(r.lhs)},
              {"rhs", num(r.rhs)},
              {"bound_factor", num(r.bound_factor)},
              {"ratio", num(r.ratio)},
              {"measured_constant", num(r.measured_constant)},
              {"explicit_bound", r.explicit_bound},
              {"pass", r.pass},
              {"status", r.status},
              {"inputs", r.inputs},
              {"details", details}};
}

Json to_json(const SharpnessSweep& s) {
  Json pts = Json::array();
  for (const SharpnessPoint& p : s.points) {
    pts.push_back(Json{{"delta", p.delta},
                       {"a1", num(p.a1)},
                       {"lhs", num(p.lhs)},
                       {"lhs_oscillation", num(p.lhs_oscillation)},
                       {"rhs_no_constant", num(p.rhs)},
                       {"weight_mass", num(p.weight_mass)},
                       {"constant_linear", num(p.constant_linear)},
                       {"constant_half", num(p.constant_half)}});
  }
  Json scaling = Json::array();
  for (const EpsilonScaling& e : s.scaling) {
    scaling.push_back(Json{{"delta", e.delta},
                           {"eps", e.eps},
                           {"lhs", e.lhs},
                           {"rhs", e.rhs},
                           {"lhs_exponent", num(e.lhs_exponent)},
                           {"lhs_predicted", num(e.lhs_predicted)},
                           {"rhs_exponent", num(e.rhs_exponent)},
                           {"rhs_predicted", num(e.rhs_predicted)},
                           {"pass", e.pass}});
  }
  return Json{{"p", s.p},
              {"n", s.n},
              {"epsilon", s.epsilon},
              {"depth", s.depth},
              {"p_star", num(s.p_star)},
              {"points", pts},
              {"beta_hat", num(s.beta_hat)},
              {"beta_residual", num(s.beta_residual)},
              {"beta_pass", s.beta_pass},
              {"linear_spread", num(s.linear_spread)},
              {"half_diverges", s.half_diverges},
              {"scaling", scaling}};
}

Json to_json(const RdfResult& r, const RdfProperties& props) {
  return Json{{"opnorm", num(r.opnorm)},
              {"terms", r.terms},
              {"tail_bound", num(r.tail_bound)},
              {"norm_tail", num(r.norm_tail)},
              {"pointwise_tail_ratio", num(r.pointwise_tail_ratio)},
              {"h_norm", num(r.h_norm)},
              {"r_norm", num(r.r_norm)},
              {"properties",
               {{"a_min_gap", num(props.a_min_gap)},
                {"a_pass", props.a_pass},
                {"b_ratio", num(props.b_ratio)},
                {"b_bound", num(props.b_bound)},
                {"b_pass", props.b_pass},
                {"c_a1", num(props.c_a1)},
                {"c_bound", num(props.c_bound)},
                {"c_pass", props.c_pass}}}};
}

Json to_json(const WeakStrongReport& r) {
  Json terms = Json::array();
  for (const WeakStrongTerm& t : r.terms) {
    terms.push_back(Json{{"k", t.k},
                         {"level_mass", num(t.level_mass)},
                         {"truncated_mass", num(t.truncated_mass)},
                         {"weak_term", num(t.weak_term)},
                         {"gradient_term", num(t.gradient_term)}});
  }
  return Json{{"p", r.p},
              {"strong", num(r.strong)},
              {"weak", num(r.weak)},
              {"level_sum", num(r.level_sum)},
              {"weak_sum", num(r.weak_sum)},
              {"gradient_sum", num(r.gradient_sum)},
              {"gradient_total", num(r.gradient_total)},
              {"weak_constant", num(r.weak_constant)},
              {"chain_constant", num(r.chain_constant)},
              {"terms", terms},
              {"pass", r.pass}};
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace wlab
