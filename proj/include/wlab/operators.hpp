#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wlab/grid.hpp"
#include "wlab/kernels.hpp"
#include "wlab/weights.hpp"

namespace wlab {

enum class MaximalKind { DyadicLocal, Centered, Powered };
enum class OpnormMode { Supplied, Empirical, ApBound };

struct OperatorConfig {
  MaximalKind maximal = MaximalKind::DyadicLocal;
  /// Inner maximal operator and exponent for MaximalKind::Powered.
  MaximalKind powered_base = MaximalKind::Centered;
  double epsilon = 1.0;
  int rdf_terms = 20;
  OpnormMode opnorm_mode = OpnormMode::Empirical;
  double opnorm_value = 0.0;  // for Supplied
  double cn = 1.0;            // dimensional factor for ApBound
  std::uint64_t probe_seed = 20240601;
  int probe_count = 20;

  void validate() const;
};

std::string to_string(MaximalKind k);
MaximalKind parse_maximal_kind(const std::string& s);

/// max over dyadic P with x in P inside q of avg_P |f|; zero outside q.
GridFunction dyadic_maximal(const GridFunction& f, const CubeIndex& q);
/// Cube-window centered maximal function of |f|, windows clipped to the root.
GridFunction centered_maximal(const GridFunction& f, Exec exec = Exec::Parallel);
/// M(|f|^eps)^(1/eps) with the given inner maximal operator.
GridFunction powered_maximal(const GridFunction& f, double eps, MaximalKind base,
                             Exec exec = Exec::Parallel);
GridFunction apply_maximal(const GridFunction& f, const OperatorConfig& cfg,
                           Exec exec = Exec::Parallel);

/// I_alpha(g chi_q) at every cell center of the grid.
GridFunction fractional_integral(const GridFunction& g, double alpha, const CubeIndex& q,
                                 Exec exec = Exec::Parallel);
/// I_alpha(g chi_q)(x) at a single point. In 1D every cell integral is exact;
/// in higher dimension x must be a grid vertex, a cell center, or lie off
/// every closed cell of q, and cells touching x are integrated exactly.
double fractional_integral_at(const GridFunction& g, double alpha, const CubeIndex& q,
                              const Point& x);

/// Cellwise min(max(g - lambda, 0), lambda).
GridFunction truncate(const GridFunction& g, double lambda);

/// Norms of g restricted to q, with respect to mu / mu(q).
double weak_norm(const GridFunction& g, double p, const Measure& mu, const CubeIndex& q);
double lorentz_p1_norm(const GridFunction& g, double p, const Measure& mu, const CubeIndex& q);
double triple_norm(const GridFunction& g, double p, const Measure& mu, const CubeIndex& q);
double lp_norm(const GridFunction& g, double p, const Measure& mu, const CubeIndex& q);
double orlicz_exp_norm(const GridFunction& g, const CubeIndex& q, const Measure& mu);

/// Unnormalized (sum |f|^p w)^(1/p) over the whole grid.
double weighted_lp_norm(const GridFunction& f, const Weight& w, double p);

/// Fixed seeded corpus of nonnegative test functions for operator norms.
std::vector<GridFunction> probe_corpus(const Grid& grid, std::uint64_t seed, int count);

/// Largest observed ||M f|| / ||f|| in L^p(w) over the corpus and the first
/// `iterates` powers M^j f of each member.
double empirical_opnorm(const std::vector<GridFunction>& corpus, const Weight& w, double p,
                        const OperatorConfig& cfg, int iterates, Exec exec = Exec::Parallel);

struct RdfResult {
  GridFunction r;
  double opnorm = 0.0;
  int terms = 0;
  /// (1/(2||M||))^(K+1) / (1 - 1/(2||M||)) * ||h||
  double tail_bound = 0.0;
  /// 2^-K ||h||, the L^p(w) bound on the omitted terms
  double norm_tail = 0.0;
  /// max over cells of the first omitted term divided by R(h)
  double pointwise_tail_ratio = 0.0;
  double h_norm = 0.0;
  double r_norm = 0.0;
};

/// sum_{k=0..K} M^k h / (2 ||M||)^k in L^p(w).
RdfResult rubio_de_francia(const GridFunction& h, const Weight& w, double p,
                           const OperatorConfig& cfg, Exec exec = Exec::Parallel);

struct RdfProperties {
  double a_min_gap = 0.0;  // min over cells of R(h) - h
  bool a_pass = false;
  double b_ratio = 0.0;  // ||R(h)|| / ||h||
  double b_bound = 0.0;  // 2 + tail_bound / ||h||
  bool b_pass = false;
  double c_a1 = 0.0;     // dyadic A_1 constant of R(h)
  double c_bound = 0.0;  // 2 ||M|| (1 + pointwise tail ratio)
  bool c_pass = false;
};

/// Checks h <= R(h), ||R(h)|| <= 2||h|| + tail and the A_1 bound on R(h)
/// over dyadic cubes.
RdfProperties rdf_properties(const GridFunction& h, const RdfResult& res);

}  // namespace wlab
