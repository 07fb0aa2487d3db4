#include "wlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wlab/grid.hpp"

namespace wlab {

StepDistribution step_distribution(std::span<const double> values, std::span<const double> masses,
                                   double scale) {
  if (values.size() != masses.size()) throw DomainError("values and masses differ in length");
  if (!(scale > 0.0)) throw DomainError("normalizing mass must be positive");
  std::vector<std::size_t> order;
  order.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (masses[i] < 0.0) throw DomainError("negative mass");
    if (masses[i] > 0.0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = std::fabs(values[a]), vb = std::fabs(values[b]);
    return va != vb ? va > vb : a < b;
  });
  StepDistribution d;
  double mass = 0.0, integral = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = std::fabs(values[order[k]]);
    mass += masses[order[k]];
    integral += v * masses[order[k]];
    const bool last_of_level = k + 1 == order.size() || std::fabs(values[order[k + 1]]) != v;
    if (last_of_level && v > 0.0) {
      d.level.push_back(v);
      d.upper_mass.push_back(mass / scale);
      d.upper_integral.push_back(integral / scale);
    }
  }
  return d;
}

double weak_norm(std::span<const double> values, std::span<const double> masses, double p,
                 double scale) {
  if (!(p > 0.0)) throw DomainError("weak norm needs p > 0");
  const StepDistribution d = step_distribution(values, masses, scale);
  double best = 0.0;
  for (std::size_t i = 0; i < d.level.size(); ++i) {
    best = std::max(best, d.level[i] * std::pow(d.upper_mass[i], 1.0 / p));
  }
  return best;
}

double lorentz_p1_norm(std::span<const double> values, std::span<const double> masses, double p,
                       double scale) {
  if (!(p > 0.0)) throw DomainError("Lorentz norm needs p > 0");
  const StepDistribution d = step_distribution(values, masses, scale);
  double total = 0.0;
  for (std::size_t i = 0; i < d.level.size(); ++i) {
    const double next = i + 1 < d.level.size() ? d.level[i + 1] : 0.0;
    total += (d.level[i] - next) * std::pow(d.upper_mass[i], 1.0 / p);
  }
  return total;
}

double triple_norm(std::span<const double> values, std::span<const double> masses, double p,
                   double scale) {
  if (!(p > 1.0)) throw DomainError("triple norm needs p > 1");
  const StepDistribution d = step_distribution(values, masses, scale);
  double best = 0.0;
  for (std::size_t i = 0; i < d.level.size(); ++i) {
    best = std::max(best, std::pow(d.upper_mass[i], 1.0 / p - 1.0) * d.upper_integral[i]);
  }
  return best;
}

double lp_norm(std::span<const double> values, std::span<const double> masses, double p,
               double scale) {
  if (!(p > 0.0)) throw DomainError("Lp norm needs p > 0");
  if (values.size() != masses.size()) throw DomainError("values and masses differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += std::pow(std::fabs(values[i]), p) * masses[i];
  return std::pow(s / scale, 1.0 / p);
}

double orlicz_exp_norm(std::span<const double> values, std::span<const double> masses,
                       double scale) {
  const StepDistribution d = step_distribution(values, masses, scale);
  if (d.level.empty()) return 0.0;
  // modular of g/lambda with masses per distinct level
  std::vector<double> level_mass(d.level.size());
  for (std::size_t i = 0; i < d.level.size(); ++i) {
    level_mass[i] = d.upper_mass[i] - (i ? d.upper_mass[i - 1] : 0.0);
  }
  auto modular = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.level.size(); ++i) {
      const double t = d.level[i] / lambda;
      if (t > 700.0) return HUGE_VAL;
      s += std::expm1(t) * level_mass[i];
    }
    return s;
  };
  const double top = d.level.front();
  const double total = d.upper_mass.back();
  // modular(hi) <= (e^(top/hi) - 1) * total = 1, modular(lo) >= (e^(top/lo) - 1) * mass(top) = 1
  double hi = top / std::log1p(1.0 / total);
  double lo = top / std::log1p(1.0 / d.upper_mass.front());
  if (!(modular(hi) <= 1.0) || !(modular(lo) >= 1.0)) {
    throw DomainError("exp-L norm search failed to bracket");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    (modular(mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace wlab
