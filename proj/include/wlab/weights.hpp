#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wlab/grid.hpp"
#include "wlab/kernels.hpp"
#include "wlab/pyramid.hpp"

namespace wlab {

/// Positive weight materialized on a grid. A sampled weight stores its cell
/// values; a power weight |x|^(delta - n) stores integrated cell masses and
/// uses mass / cell volume as its cell value.
class Weight {
 public:
  static Weight from_density(GridFunction density);
  static Weight unit(const Grid& grid);
  /// |x|^(delta - n), delta in (0, 1], on a root box centered at the origin.
  static Weight power(const Grid& grid, double delta, Exec exec = Exec::Parallel);

  const Grid& grid() const { return s_->density.grid(); }
  bool is_power() const { return s_->power; }
  double delta() const { return s_->delta; }

  const GridFunction& density() const { return s_->density; }
  std::span<const double> cell_masses() const { return s_->masses; }

  double mass(const CubeIndex& q) const { return s_->mass_pyramid.sum(q); }
  double mass(const CubeFamily& family, const FamilyCube& c) const {
    return family.sum(s_->mass_pyramid, c);
  }
  /// Sum/min/max of cell values over every dyadic cube.
  const LevelPyramid& pyramid() const { return s_->pyramid; }

  std::string describe() const;

 private:
  struct State {
    GridFunction density;
    std::vector<double> masses;
    LevelPyramid pyramid;
    LevelPyramid mass_pyramid;
    bool power = false;
    double delta = 0.0;
  };
  explicit Weight(std::shared_ptr<const State> s) : s_(std::move(s)) {}
  static Weight build(GridFunction density, std::vector<double> masses, bool power, double delta);

  std::shared_ptr<const State> s_;
};

/// Nonnegative measure on the root box, stored as cell masses.
class Measure {
 public:
  enum class Kind { Lebesgue, Density, Atomic, FromWeight };

  static Measure lebesgue(const Grid& grid);
  static Measure density(const GridFunction& d);
  /// Point masses; each atom is assigned to the cell containing it.
  static Measure atomic(const Grid& grid, const std::vector<std::pair<Point, double>>& atoms);
  static Measure of_weight(const Weight& w);

  Kind kind() const { return kind_; }
  const Grid& grid() const { return *grid_; }
  std::span<const double> cell_masses() const { return *masses_; }
  double mass(const CubeIndex& q) const;
  double total() const;

 private:
  Measure(Kind kind, const Grid& grid, std::vector<double> masses);

  Kind kind_;
  std::shared_ptr<const Grid> grid_;
  std::shared_ptr<const std::vector<double>> masses_;
  std::shared_ptr<const LevelPyramid> pyramid_;
};

/// (1/w(q)) * integral of f w over q.
double weighted_average(const GridFunction& f, const Weight& w, const CubeIndex& q);

struct ConstantValue {
  double value = 0.0;
  FamilyCube argmax;
};

/// sup over the family of (avg w)(avg w^(1-p'))^(p-1); for p = 1,
/// (avg w) * max of 1/w.
ConstantValue ap_constant(const Weight& w, double p, const CubeFamily& family,
                          Exec exec = Exec::Parallel);
ConstantValue a1_constant(const Weight& w, const CubeFamily& family, Exec exec = Exec::Parallel);

/// sup of (avg u)(avg v^(1-p'))^(p-1); p = 1 gives (avg u) * max of 1/v.
ConstantValue two_weight_ap(const Weight& u, const Weight& v, double p, const CubeFamily& family,
                            Exec exec = Exec::Parallel);

/// sup of (avg w) * ||1/w||^p in weak L^(p') of (Q, w dx / |Q|).
ConstantValue ap1_constant(const Weight& w, double p, const CubeFamily& family,
                           Exec exec = Exec::Parallel);

/// sup of (max of w on Q) / (avg of w on Q).
ConstantValue rhinf_constant(const Weight& w, const CubeFamily& family, Exec exec = Exec::Parallel);

/// sup over dyadic Q of (1/w(Q)) * integral over Q of M(w chi_Q), where M is
/// the pointwise max of the discrete centered maximal function and the
/// dyadic maximal function local to Q.
ConstantValue ainf_fujii_wilson(const Weight& w, Exec exec = Exec::Parallel);

/// 1 + 1 / (2^(n+1) * ainf - 1).
double rh_exponent(int n, double ainf);

struct RhCheck {
  double exponent = 0.0;
  double worst_ratio = 0.0;
  FamilyCube argmax;
  bool pass = false;
};

/// Reverse Hoelder check with the exponent above: worst ratio of
/// avg(w^r) / (avg w)^r over dyadic cubes, passing when it is at most 2.
RhCheck rh_exponent_and_check(const Weight& w, double ainf);
RhCheck rh_exponent_and_check(const Weight& w);

struct WeightConstantsReport {
  double p = 2.0;
  ConstantValue ap, a1, ainf, ap1, rhinf;
  RhCheck rh;
  int depth = 0;
  bool shifted = false;
  std::size_t family_size = 0;
};

/// All constants for one weight. A_p, A_1, A_{p,1} and RH_inf use the chosen
/// family; A_inf and the reverse Hoelder check use the dyadic cubes.
WeightConstantsReport constants_report(const Weight& w, double p, bool shifted,
                                       Exec exec = Exec::Parallel);

}  // namespace wlab
