#pragma once

#include <span>
#include <vector>

namespace wlab {

/// Distribution of a nonnegative step function: distinct values in
/// decreasing order and the mass of {g >= value} for each, with masses
/// divided by `scale` (the normalizing measure, e.g. w(Q) or |Q|).
/// Cells with zero mass are ignored.
struct StepDistribution {
  std::vector<double> level;
  std::vector<double> upper_mass;  // normalized mass of {g >= level[i]}
  std::vector<double> upper_integral;  // normalized integral of g over the same set
};

StepDistribution step_distribution(std::span<const double> values, std::span<const double> masses,
                                   double scale);

/// sup_t t * mu{|g| > t}^(1/p), attained in the limit at each step value.
double weak_norm(std::span<const double> values, std::span<const double> masses, double p,
                 double scale);

/// Integral over t in (0, inf) of mu{|g| > t}^(1/p): exact on step functions.
double lorentz_p1_norm(std::span<const double> values, std::span<const double> masses, double p,
                       double scale);

/// sup over sets E of mu(E)^(1/p - 1) * integral of |g| over E. For fixed
/// mu(E) the integral is largest on the top of the distribution, and along
/// each linear piece the objective is quasiconvex, so the sup is a max over
/// the superlevel sets.
double triple_norm(std::span<const double> values, std::span<const double> masses, double p,
                   double scale);

double lp_norm(std::span<const double> values, std::span<const double> masses, double p,
               double scale);

/// Luxemburg norm for Phi(t) = e^t - 1: the lambda with
/// (1/scale) * sum (e^(|g|/lambda) - 1) * mass = 1, to relative 1e-9.
double orlicz_exp_norm(std::span<const double> values, std::span<const double> masses,
                       double scale);

}  // namespace wlab
