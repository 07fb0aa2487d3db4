#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "wlab/inequalities.hpp"
#include "wlab/operators.hpp"

using namespace wlab;
using wlab::testing::unit_grid;

namespace {

GridFunction linear(const Grid& g) {
  return GridFunction::sample(g, [n = g.dim()](const Point& x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i];
    return s;
  });
}

CheckInputs inputs(const GridFunction& f) { return CheckInputs(f, CubeIndex{}); }

}  // namespace

TEST_CASE("Sobolev exponents") {
  CHECK(sobolev_exponent(ExponentKind::Classical, 2.0, 4) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(sobolev_exponent(ExponentKind::FormulaA, 2.0, 4, 1.0, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(sobolev_exponent(ExponentKind::FormulaB, 2.0, 4, 2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  // 1/2 - 1/p* = 1/(4 * 2 * 3)
  CHECK(sobolev_exponent(ExponentKind::FormulaM, 2.0, 4, 2.0, 1.0, 3.0) == doctest::Approx(1.0 / (0.5 - 1.0 / 24.0)).epsilon(1e-14));
  CHECK_THROWS_AS(sobolev_exponent(ExponentKind::Classical, 2.0, 2), DomainError);
  CHECK_THROWS_AS(sobolev_exponent(ExponentKind::FormulaA, 1.5, 3, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(sobolev_exponent(ExponentKind::FormulaM, 1.5, 3, 1.0, 1.0, 1.0), DomainError);

  for (int n = 2; n <= 4; ++n) {
    for (double p : {1.0, 1.25, 1.5}) {
      CHECK(sobolev_exponent(ExponentKind::FormulaB, p, n, 1.0) == sobolev_exponent(ExponentKind::Classical, p, n));
    }
  }
  const Exponents e = exponents(1.0, 3, 1.0, 1.0);
  CHECK(std::isinf(e.p_prime));
  CHECK(e.n_prime == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(e.classical == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_FALSE(e.formula_m.has_value());
  CHECK(parse_exponent_kind(to_string(ExponentKind::FormulaB)) == ExponentKind::FormulaB);
}

TEST_CASE("Poincare sides") {
  SUBCASE("constants") {
    const Grid g = unit_grid(2, 3);
    const GridFunction c = GridFunction::constant(g, 4.0);
    const Weight w = Weight::unit(g);
    for (Center center : {Center::Average, Center::WeightedAverage, Center::Projection}) {
      for (double s : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
        PoincareSpec spec;
        spec.lhs_exponent = s;
        spec.center = center;
        spec.m = center == Center::Projection ? 2 : 1;
        CHECK(poincare_sides(c, w, w, CubeIndex{}, spec).lhs == doctest::Approx(0.0));
      }
    }
  }
  SUBCASE("f = x in 1D") {
    const Grid g = unit_grid(1, 8);
    const Weight w = Weight::unit(g);
    const Sides s = poincare_sides(linear(g), w, w, CubeIndex{}, PoincareSpec{});
    CHECK(s.lhs == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(s.rhs == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("x + y on the unit square, p = q = 2") {
    const Grid g = unit_grid(2, 6);
    const Weight w = Weight::unit(g);
    PoincareSpec spec;
    spec.lhs_exponent = 2.0;
    spec.p = 2.0;
    const Sides s = poincare_sides(linear(g), w, w, CubeIndex{}, spec);
    CHECK(s.lhs * s.lhs == doctest::Approx(1.0 / 6.0).epsilon(1e-2));
    CHECK(s.rhs * s.rhs == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(s.lhs / s.rhs == doctest::Approx(1.0 / std::sqrt(6.0) / 2.0).epsilon(1e-2));
  }
  SUBCASE("vanishing plateau uses |f|") {
    const Grid g(RootBox::centered(2, 1.0), 5);
    const Weight w = Weight::unit(g);
    PoincareSpec spec;
    spec.vanishing = true;
    spec.lhs_exponent = std::numeric_limits<double>::infinity();
    CHECK(poincare_sides(plateau(g, 0.1), w, w, CubeIndex{}, spec).lhs == doctest::Approx(1.0));
  }
}

TEST_CASE("inequality catalog") {
  SUBCASE("pp-two-weight with unit weights") {
    const Grid g = unit_grid(1, 8);
    CheckInputs in = inputs(linear(g));
    in.u = Weight::unit(g);
    in.v = Weight::unit(g);
    const CheckResult r = check_inequality("pp-two-weight", in);
    CHECK(r.ratio == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.bound_factor == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.measured_constant == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.pass);
    CHECK(r.status == "reported");
  }
  SUBCASE("exp-JN on a two-valued function") {
    const Grid g = unit_grid(1, 6);
    const GridFunction f = GridFunction::sample(g, [](const Point& x) { return x[0] < 0.5 ? -1.0 : 1.0; });
    CheckInputs in = inputs(f);
    in.a = Functional::constant(g, 1.0);
    const CheckResult r = check_inequality("exp-JN", in);
    CHECK(r.lhs == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-8));
    CHECK(r.rhs == doctest::Approx(1.0));
    CHECK(r.measured_constant == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-8));
  }
  SUBCASE("sobolev-A is the explicit bound") {
    const Grid g(RootBox::centered(2, 1.0), 5);
    CheckInputs in = inputs(linear(g));
    in.w = Weight::power(g, 0.5);
    in.p = 1.5;
    in.q_index = 1.5;
    const CheckResult r = check_inequality("sobolev-A", in);
    CHECK(r.explicit_bound);
    CHECK(r.status == (r.pass ? "pass" : "fail"));
    CHECK(r.pass);
    in.q_index = 2.0;
    CHECK_THROWS_AS(check_inequality("sobolev-A", in), DomainError);
  }
  SUBCASE("every id evaluates on a weighted 2D example") {
    const Grid g = unit_grid(2, 4);
    const GridFunction f = GridFunction::sample(g, [](const Point& x) { return std::sin(3.0 * x[0]) + x[1] * x[1]; });
    for (const std::string& id : inequality_ids()) {
      CheckInputs in = inputs(f);
      in.w = wlab::testing::step_weight(g, 1.0, 3.0);
      in.mu = Measure::lebesgue(g);
      in.p = 1.5;
      in.q_index = 1.5;
      in.p0 = 3.0;
      in.m = 2;
      const CheckResult r = check_inequality(id, in);
      CAPTURE(id);
      CHECK(r.id == id);
      CHECK(std::isfinite(r.lhs));
      CHECK(std::isfinite(r.rhs));
      CHECK(r.rhs > 0.0);
      CHECK(std::isfinite(r.measured_constant));
      CHECK(r.explicit_bound == (id == "sobolev-A"));
    }
    CHECK_THROWS_AS(check_inequality("no-such-id", inputs(f)), DomainError);
  }
  SUBCASE("pointwise-i1 ratio is stable under refinement") {
    std::vector<double> ratios;
    for (int depth = 4; depth <= 6; ++depth) {
      ratios.push_back(check_inequality("pointwise-i1", inputs(linear(unit_grid(2, depth)))).ratio);
    }
    for (double r : ratios) CHECK(std::isfinite(r));
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    CHECK(*hi <= 2.0 * *lo);
  }
}

TEST_CASE("oscillation constant against a functional") {
  const Grid g = unit_grid(1, 5);
  const GridFunction f = linear(g);
  // avg_P |f - f_P| = l(P)/4, so the constant against a(P) = l(P) is 1/4
  const Functional a = Functional::fractional(1.0, 1.0, Measure::lebesgue(g), Weight::unit(g));
  CHECK(oscillation_constant(f, CubeIndex{}, a) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("sharpness sweep structure") {
  const SharpnessSweep s = sharpness_sweep(1.0, 2, 0.1, {0.25, 0.5}, 5);
  CHECK(s.p_star == doctest::Approx(2.0));
  REQUIRE(s.points.size() == 2);
  CHECK(s.points[0].delta == 0.5);
  CHECK(s.points[0].a1 < s.points[1].a1);
  for (const SharpnessPoint& pt : s.points) {
    CHECK(pt.constant_linear == doctest::Approx(pt.lhs / (pt.a1 * pt.rhs)).epsilon(1e-12));
    CHECK(pt.constant_half == doctest::Approx(pt.lhs / (std::sqrt(pt.a1) * pt.rhs)).epsilon(1e-12));
    CHECK(pt.lhs > 0.0);
  }
  CHECK(std::isfinite(s.beta_hat));
  CHECK_THROWS_AS(sharpness_sweep(3.0, 2, 0.1, {0.5}, 4), DomainError);
  CHECK_THROWS_AS(sharpness_sweep(1.0, 2, 0.6, {0.5}, 4), DomainError);

  const GridFunction pl = plateau(Grid(RootBox::centered(2, 1.0), 5), 0.1);
  CHECK(pl.max() == 1.0);
  CHECK(pl.min() == 0.0);
}

TEST_CASE("weak implies strong via truncation") {
  SUBCASE("zero input") {
    const Grid g = unit_grid(1, 5);
    const WeakStrongReport r = weak_implies_strong_demo(GridFunction::constant(g, 0.0), Measure::lebesgue(g),
                                                        Measure::lebesgue(g), 1.0);
    CHECK(r.strong == 0.0);
    CHECK(r.weak_sum == 0.0);
    CHECK(r.gradient_sum == 0.0);
  }
  SUBCASE("plateau: truncated gradients never exceed the full gradient") {
    const Grid g(RootBox::centered(2, 1.0), 6);
    const WeakStrongReport r = weak_implies_strong_demo(plateau(g, 0.1), Measure::lebesgue(g), Measure::lebesgue(g), 2.0);
    CHECK(r.gradient_sum <= r.gradient_total * (1 + 1e-12));
    CHECK(r.pass);
  }
  SUBCASE("f = x: strong / weak ratio is stable under refinement") {
    std::vector<double> ratios;
    for (int depth = 5; depth <= 9; ++depth) {
      const Grid g = unit_grid(1, depth);
      const WeakStrongReport r = weak_implies_strong_demo(linear(g), Measure::lebesgue(g), Measure::lebesgue(g), 2.0);
      CHECK(r.pass);
      CHECK(r.strong <= 4.0 * r.level_sum * (1 + 1e-12));
      ratios.push_back(r.strong / r.weak);
    }
    for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] == doctest::Approx(ratios[i - 1]).epsilon(0.05));
  }
}
