#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wlab/decomposition.hpp"
#include "wlab/functionals.hpp"
#include "wlab/grid.hpp"
#include "wlab/weights.hpp"

namespace wlab {

enum class ExponentKind { Classical, FormulaA, FormulaB, FormulaM };
std::string to_string(ExponentKind k);
ExponentKind parse_exponent_kind(const std::string& s);

/// Sobolev-type exponent p* solving 1/p - 1/p* = gap, where the gap is
///   classical  1/n
///   A          1/(n (q + log wq))
///   B          1/(n q)
///   M          1/(n q M)
/// Requires 1 <= p < n, q >= 1, wq >= 1 and M > 1 for kind M.
double sobolev_exponent(ExponentKind kind, double p, int n, double q = 1.0, double wq = 1.0,
                        double M = 2.0);

struct Exponents {
  double p = 1.0, q = 1.0;
  int n = 2;
  int m = 1;
  double p_prime = 0.0;  // p / (p - 1), infinite for p = 1
  double n_prime = 0.0;
  double classical = 0.0;
  double formula_a = 0.0;
  double formula_b = 0.0;
  std::optional<double> formula_m;
};

Exponents exponents(double p, int n, double q, double wq, std::optional<double> M = std::nullopt,
                    int m = 1);

enum class Center { Average, WeightedAverage, Projection };
enum class RhsKind { GradientLp, TwoWeight, Lorentz, Mixed };
std::string to_string(Center c);
Center parse_center(const std::string& s);

struct PoincareSpec {
  /// LHS exponent; +infinity gives the sup of |f - center| over cells of
  /// positive weight.
  double lhs_exponent = 1.0;
  double p = 1.0;
  int m = 1;
  Center center = Center::Average;
  RhsKind rhs = RhsKind::GradientLp;
  /// Subtract nothing: LHS of |f| instead of |f - center|.
  bool vanishing = false;
};

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// LHS: (1/u(Q) integral over Q of |f - center|^s u)^(1/s), unnormalized
/// for the mixed form. RHS by kind:
///   gradient-Lp  l(Q)^m (1/w(Q) integral |grad^m f|^p w)^(1/p)
///   two-weight   l(Q)^m (1/u(Q) integral |grad^m f|^p v)^(1/p)
///   lorentz      l(Q) ||grad f|| in L^{p,1}(Q, w dx / w(Q))
///   mixed        (integral |grad f|^p M(w chi_Q)^(p/n') / w^(p-1))^(1/p)
/// For one-weight forms pass the same weight as u and v.
Sides poincare_sides(const GridFunction& f, const Weight& u, const Weight& v, const CubeIndex& q,
                     const PoincareSpec& spec);

/// Catalog of checkable inequalities.
std::vector<std::string> inequality_ids();

struct CheckInputs {
  CheckInputs(GridFunction f_, CubeIndex q_) : f(std::move(f_)), q(q_) {}

  GridFunction f;
  CubeIndex q;
  std::optional<Weight> w;  // one-weight forms; defaults to Lebesgue
  std::optional<Weight> u, v;  // two-weight forms; default to w
  std::optional<Measure> mu;   // pp-measure, weak-1n'
  std::optional<Functional> a;  // exp-JN; defaults to the dyadic BMO constant of f
  double p = 1.0;
  double q_index = 1.0;  // A_q class for the Sobolev forms
  double p0 = 2.0;       // kz-downward
  double alpha = 1.0;    // pp-measure
  int m = 1;             // higher-order
  std::optional<Center> center;  // overrides the catalog default
  bool shifted = false;          // family for the weight constants
};

struct CheckResult {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double bound_factor = 1.0;
  double ratio = 0.0;
  /// ratio / bound_factor: the unknown constant the data requires.
  double measured_constant = 0.0;
  /// True when the inequality carries no unknown constant.
  bool explicit_bound = false;
  bool pass = false;
  std::string status;  // "pass", "fail" or "reported"
  std::string inputs;
  std::map<std::string, double> details;
};

/// Evaluates one catalog inequality. pass is lhs <= bound_factor * rhs;
/// status is pass/fail only when the bound is explicit.
CheckResult check_inequality(const std::string& id, const CheckInputs& in);

/// sup over dyadic P inside q of (avg_P |f - f_P|) / a(P).
double oscillation_constant(const GridFunction& f, const CubeIndex& q, const Functional& a);

struct SharpnessPoint {
  double delta = 0.0;
  double a1 = 0.0;
  double lhs = 0.0;           // (1/w(Q) integral |f|^{p*} w)^(1/p*)
  double lhs_oscillation = 0.0;  // same about f_{Q,w}
  double rhs = 0.0;           // l(Q) (1/w(Q) integral |grad f|^p w)^(1/p)
  double weight_mass = 0.0;
  double constant_linear = 0.0;  // lhs / (a1 * rhs)
  double constant_half = 0.0;    // lhs / (a1^(1/(2p)) * rhs)
};

struct EpsilonScaling {
  double delta = 0.0;
  std::vector<double> eps;
  std::vector<double> lhs, rhs;
  double lhs_exponent = 0.0, lhs_predicted = 0.0;
  double rhs_exponent = 0.0, rhs_predicted = 0.0;
  bool pass = false;
};

struct SharpnessSweep {
  double p = 1.0;
  int n = 2;
  double epsilon = 0.05;
  int depth = 7;
  double p_star = 0.0;  // infinite when p = n
  std::vector<SharpnessPoint> points;
  double beta_hat = 0.0;
  double beta_residual = 0.0;
  bool beta_pass = false;
  double linear_spread = 0.0;  // max / min of constant_linear
  bool half_diverges = false;  // constant_half strictly increasing as delta decreases
  std::vector<EpsilonScaling> scaling;
};

inline constexpr double kBetaTolerance = 0.15;
inline constexpr double kScalingTolerance = 0.15;

/// Plateau f = 1 on (-eps, eps)^n, 0 off (-2 eps, 2 eps)^n, affine in the
/// sup norm between, sampled at cell centers.
GridFunction plateau(const Grid& grid, double eps);

/// Sweep over delta of the plateau example against |x|^(delta - n) on
/// (-1, 1)^n. Requires 1 <= p <= n (p = n uses the sup norm for p* = inf),
/// 0 < eps < 1/2 and deltas in (0, 1). Empty `scaling_eps` skips the
/// epsilon-scaling check.
SharpnessSweep sharpness_sweep(double p, int n, double eps, const std::vector<double>& deltas,
                               int depth, const std::vector<double>& scaling_eps = {},
                               Exec exec = Exec::Parallel);

struct WeakStrongTerm {
  int k = 0;
  double level_mass = 0.0;       // mu(G_{k+1}), G_j = {2^j < g <= 2^{j+1}}
  double truncated_mass = 0.0;   // mu{T_{2^k} g > 2^(k-1)}
  double weak_term = 0.0;        // 2^k mu{T_{2^k} g > 2^(k-1)}^(1/p)
  double gradient_term = 0.0;    // integral |grad T_{2^k} g| dnu
};

struct WeakStrongReport {
  double p = 1.0;
  double strong = 0.0;       // ||g|| in L^p(mu)
  double weak = 0.0;         // sup_t t mu{g > t}^(1/p)
  double level_sum = 0.0;    // sum 2^k mu(G_{k+1})^(1/p)
  double weak_sum = 0.0;     // sum of weak terms
  double gradient_sum = 0.0;  // sum of gradient terms
  double gradient_total = 0.0;  // integral |grad g| dnu
  double weak_constant = 0.0;   // max_k weak_term / gradient_term
  double chain_constant = 0.0;  // 4 * weak_constant
  std::vector<WeakStrongTerm> terms;
  bool pass = false;  // strong <= chain_constant * gradient_total
};

WeakStrongReport weak_implies_strong_demo(const GridFunction& g, const Measure& mu,
                                          const Measure& nu, double p);

}  // namespace wlab
