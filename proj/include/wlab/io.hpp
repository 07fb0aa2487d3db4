#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wlab/decomposition.hpp"
#include "wlab/functionals.hpp"
#include "wlab/grid.hpp"
#include "wlab/inequalities.hpp"
#include "wlab/operators.hpp"
#include "wlab/weights.hpp"

namespace wlab {

using Json = nlohmann::json;

/// Grid file: {"n": 2, "depth": 3, "root": {"corner": [0, 0], "side": 1},
/// "values": [... row-major, axis 0 slowest ...]}. "root" is optional and
/// defaults to the unit cube.
Json grid_to_json(const Grid& grid);
Grid grid_from_json(const Json& j);
Json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const Json& j);
GridFunction load_grid_function(const std::string& path);
void save_grid_function(const std::string& path, const GridFunction& f);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Weight specs:
///   "lebesgue"                         w = 1
///   {"power": {"delta": 0.25}}         |x|^(delta - n), needs a centered root
///   {"step": [a, b]}                   a on the lower half along axis 0, b on the upper
///   {"grid": <grid file or path>}      cell values
Weight weight_from_spec(const Json& spec, const Grid& grid);
/// Measure specs: the weight specs above, plus {"atoms": [[[x...], mass], ...]}.
Measure measure_from_spec(const Json& spec, const Grid& grid);
/// Functional specs, e.g. {"kind": "fractional", "alpha": 1, "p": 2,
/// "mu": <measure>, "w": <weight>}; kinds fractional, gradient (with "f",
/// "m", "p", "w" or "u"/"v", "scale"), increasing ("table") and constant
/// ("value").
Functional functional_from_spec(const Json& spec, const Grid& grid);

Json to_json(const CubeIndex& q, int n);
CubeIndex cube_from_json(const Json& j, const Grid& grid);
Json to_json(const FamilyCube& c, int n);
Json to_json(const ConstantValue& c, int n);
Json to_json(const WeightConstantsReport& r, int n);
Json to_json(const CZDecomposition& cz, bool with_functions);
Json to_json(const DpReport& r, int n);
Json to_json(const CheckResult& r);
Json to_json(const SharpnessSweep& s);
Json to_json(const RdfResult& r, const RdfProperties& props);
Json to_json(const WeakStrongReport& r);

/// Comma-separated table with a header row; numbers in shortest round-trip form.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

}  // namespace wlab
