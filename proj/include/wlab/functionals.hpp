#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wlab/grid.hpp"
#include "wlab/weights.hpp"

namespace wlab {

/// A positive set function Q -> a(Q) on the dyadic cubes of a grid. Values
/// for every dyadic cube are computed once at construction.
class Functional {
 public:
  /// l(Q)^alpha (mu(Q) / w(Q))^(1/p). Rejected if mu vanishes on some cell.
  static Functional fractional(double alpha, double p, const Measure& mu, const Weight& w);
  /// scale * l(Q)^m ((1/u(Q)) * integral over Q of |grad^m f|^p v)^(1/p);
  /// u = v for the one-weight form. May vanish where f is locally constant.
  static Functional gradient(const GridFunction& f, int m, double p, const Weight& v,
                             const Weight& u, double scale = 1.0);
  static Functional gradient(const GridFunction& f, int m, double p, const Weight& w,
                             double scale = 1.0);
  /// l(Q) * ||grad f|| in L^{p,1}(Q, w dx / w(Q)).
  static Functional lorentz_gradient(const GridFunction& f, double p, const Weight& w);
  /// Per-level tables indexed by level index; must be monotone under inclusion.
  static Functional increasing(const Grid& grid, std::vector<std::vector<double>> table);
  static Functional constant(const Grid& grid, double value);

  const Grid& grid() const { return grid_; }
  const std::string& kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double p() const { return p_; }

  double eval(const CubeIndex& q) const;

 private:
  Functional(Grid grid, std::string kind) : grid_(std::move(grid)), kind_(std::move(kind)) {}
  void require_positive() const;

  Grid grid_;
  std::string kind_;
  double alpha_ = 0.0;
  double p_ = 1.0;
  std::vector<std::vector<double>> values_;  // [level][level index]
};

/// Disjoint dyadic subcubes of `parent` with total volume at most |parent|/L.
struct SmallFamily {
  CubeIndex parent;
  std::vector<CubeIndex> members;
  double L = 2.0;

  /// Throws DomainError when an invariant fails.
  void validate(const Grid& grid) const;
};

/// (sum a(Q_i)^p w(Q_i))^(1/p) / (a(Q)^p w(Q))^(1/p).
double dp_ratio(const Functional& a, const Weight& w, double p, const CubeIndex& q,
                const std::vector<CubeIndex>& family);

enum class SearchMode { Exhaustive, Random, Greedy };
std::string to_string(SearchMode m);
SearchMode parse_search_mode(const std::string& s);

struct SmallnessRow {
  double L = 0.0;
  double max_ratio = 0.0;
  std::vector<CubeIndex> witness;
  std::optional<double> bound;  // (1/L)^exponent when an exact bound is checked
  std::int64_t families = 0;
  std::int64_t violations = 0;
};

struct DpReport {
  double p = 1.0;
  SearchMode mode = SearchMode::Exhaustive;
  double worst_ratio = 0.0;
  std::vector<CubeIndex> witness;
  std::int64_t trials = 0;
  std::vector<SmallnessRow> rows;
  /// Least-squares slope of log(max ratio) against log(1/L) and its RMS residual.
  std::optional<double> slope;
  double slope_residual = 0.0;
};

/// Number of antichains (including the empty one) of the dyadic tree below q,
/// saturating at `cap` + 1.
std::int64_t antichain_count(const Grid& grid, const CubeIndex& q, std::int64_t cap);

inline constexpr std::int64_t kExhaustiveCap = 1'000'000;

/// Largest D_p ratio over families of disjoint dyadic subcubes of q.
DpReport max_dp_ratio(const Functional& a, const Weight& w, double p, const CubeIndex& q,
                      SearchMode mode, int trials = 1000, std::uint64_t seed = 1);

struct SdOptions {
  SearchMode mode = SearchMode::Exhaustive;
  int trials = 1000;
  std::uint64_t seed = 1;
  /// Checked bound (1/L)^exponent. Defaults to alpha/n for the fractional
  /// functional and to no bound otherwise.
  std::optional<double> bound_exponent;
  double tolerance = 1e-12;
};

/// For each L: max D_p ratio over L-small families, checked against the
/// bound when one applies, plus the fitted smallness slope.
DpReport sdp_check(const Functional& a, const Weight& w, double p, const CubeIndex& q,
                   const std::vector<double>& Ls, const SdOptions& opt);

/// Random disjoint dyadic subcubes of q, filled until the volume budget
/// floor(cells(q) / L) is used up exactly.
SmallFamily random_small_family(const Grid& grid, const CubeIndex& q, double L, std::mt19937_64& rng);

}  // namespace wlab
