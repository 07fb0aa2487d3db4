#include <algorithm>
#include <cmath>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "wlab/norms.hpp"
#include "wlab/operators.hpp"

using namespace wlab;
using wlab::testing::from_values;
using wlab::testing::unit_grid;

namespace {

/// Integral of 1/|y| over the rectangle [0,a] x [0,b].
double corner_rect(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return a * std::asinh(b / a) + b * std::asinh(a / b);
}

/// Integral over [0,1]^2 of 1/|y - x|, split into the four rectangles at x.
double unit_square_riesz(double x0, double x1) {
  return corner_rect(x0, x1) + corner_rect(1 - x0, x1) + corner_rect(x0, 1 - x1) +
         corner_rect(1 - x0, 1 - x1);
}

}  // namespace

TEST_CASE("dyadic maximal function") {
  const GridFunction c = GridFunction::constant(unit_grid(2, 3), -2.0);
  const GridFunction mc = dyadic_maximal(c, CubeIndex{});
  CHECK(mc.min() == 2.0);
  CHECK(mc.max() == 2.0);

  const GridFunction f = from_values(1, 2, {4, 0, 0, 0});
  const GridFunction m = dyadic_maximal(f, CubeIndex{});
  CHECK(m[0] == 4.0);
  CHECK(m[1] == 2.0);
  CHECK(m[2] == 1.0);
  CHECK(m[3] == 1.0);

  SUBCASE("superlevel sets are unions of dyadic cubes") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
      const Grid g = unit_grid(1 + t % 2, 4);
      const GridFunction h = wlab::testing::random_function(g, rng);
      const GridFunction mh = dyadic_maximal(h, CubeIndex{});
      const GridFunction ah = h.abs();
      for (std::int64_t x = 0; x < g.cell_count(); ++x) {
        // the largest dyadic cube through x whose average attains M(x)
        // lies inside the superlevel set {M >= M(x)}
        const CubeIndex cell = g.cell_cube(x);
        for (int level = 0; level <= g.depth(); ++level) {
          const CubeIndex p = g.ancestor(cell, level);
          if (average(ah, p) == mh[x]) {
            for (std::int64_t y : g.cells_of(p)) CHECK(mh[y] >= mh[x]);
            break;
          }
        }
        CHECK(mh[x] >= ah[x]);
      }
    }
  }
}

TEST_CASE("centered maximal function") {
  const GridFunction c = GridFunction::constant(unit_grid(2, 3), 3.0);
  const GridFunction mc = centered_maximal(c);
  CHECK(mc.min() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(mc.max() == doctest::Approx(3.0).epsilon(1e-14));

  const Grid g = unit_grid(1, 6);
  std::vector<double> v(64, 0.0);
  v[32] = 1.0;
  const GridFunction m = centered_maximal(GridFunction(g, v));
  // windows stay inside the root up to k = 15
  for (int k = 1; k < 16; ++k) CHECK(m[32 + k] == doctest::Approx(1.0 / (2.0 * k + 1.0)).epsilon(1e-14));

  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const GridFunction h = wlab::testing::random_function(unit_grid(2, 4), rng);
    const GridFunction mh = centered_maximal(h);
    for (std::size_t i = 0; i < h.size(); ++i) {
      CHECK(mh[static_cast<std::int64_t>(i)] >= std::fabs(h[static_cast<std::int64_t>(i)]) * (1 - 1e-14));
    }
  }
}

TEST_CASE("fractional integral") {
  SUBCASE("1D alpha = 1/2 at the endpoint") {
    const GridFunction one = GridFunction::constant(unit_grid(1, 6), 1.0);
    CHECK(fractional_integral_at(one, 0.5, CubeIndex{}, Point{0.0}) == doctest::Approx(2.0).epsilon(1e-2));
  }
  SUBCASE("zero input") {
    const GridFunction zero = GridFunction::constant(unit_grid(2, 3), 0.0);
    CHECK(fractional_integral(zero, 1.0, CubeIndex{}).max() == 0.0);
    CHECK(fractional_integral_at(zero, 1.0, CubeIndex{}, Point{0.5, 0.5}) == 0.0);
  }
  SUBCASE("2D alpha = 1 at the center of the unit square") {
    const GridFunction one = GridFunction::constant(unit_grid(2, 5), 1.0);
    const double exact = unit_square_riesz(0.5, 0.5);
    CHECK(fractional_integral_at(one, 1.0, CubeIndex{}, Point{0.5, 0.5}) == doctest::Approx(exact).epsilon(2e-2));
  }
  SUBCASE("2D alpha = 1 at cell centers") {
    const Grid g = unit_grid(2, 5);
    const GridFunction one = GridFunction::constant(g, 1.0);
    const GridFunction i1 = fractional_integral(one, 1.0, CubeIndex{});
    for (std::int64_t cell : {std::int64_t{0}, std::int64_t{37}, std::int64_t{500}, g.cell_count() - 1}) {
      const Point x = g.cell_center(cell);
      CHECK(i1[cell] == doctest::Approx(unit_square_riesz(x[0], x[1])).epsilon(2e-2));
    }
  }
  SUBCASE("restriction to a subcube") {
    const Grid g = unit_grid(1, 5);
    const GridFunction one = GridFunction::constant(g, 1.0);
    const GridFunction i = fractional_integral(one, 0.5, CubeIndex{1, {0}});
    // integral over [0,1/2) of |x - y|^(-1/2) at x = 3/4: 2 (sqrt(3/4) - sqrt(1/4))
    CHECK(fractional_integral_at(one, 0.5, CubeIndex{1, {0}}, Point{0.75}) ==
          doctest::Approx(2.0 * (std::sqrt(0.75) - 0.5)).epsilon(1e-12));
    CHECK(i.min() > 0.0);
  }
}

TEST_CASE("truncation") {
  const Grid g(RootBox{1, {0.0}, 4.0}, 2);
  const GridFunction x = GridFunction::sample(g, [](const Point& p) { return p[0]; });
  const GridFunction t = truncate(x, 1.0);
  CHECK(t[0] == 0.0);
  CHECK(t[1] == 0.5);
  CHECK(t[2] == 1.0);
  CHECK(t[3] == 1.0);
  CHECK(truncate(x, 4.0).max() == 0.0);

  std::mt19937_64 rng(8);
  for (int s = 0; s < 20; ++s) {
    const GridFunction h = wlab::testing::random_function(unit_grid(1, 6), rng, false);
    std::vector<double> sum(h.size(), 0.0);
    for (int k = -20; k <= 20; ++k) {
      const GridFunction tk = truncate(h, std::ldexp(1.0, k));
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += tk[static_cast<std::int64_t>(i)];
    }
    for (std::size_t i = 0; i < sum.size(); ++i) {
      CHECK(h[static_cast<std::int64_t>(i)] <= sum[i] + std::ldexp(1.0, -20) + 1e-12);
    }
  }
}

TEST_CASE("weak, Lorentz and triple norms") {
  const Grid g = unit_grid(2, 3);
  const Measure leb = Measure::lebesgue(g);
  SUBCASE("indicator of a set") {
    const GridFunction chi = GridFunction::sample(g, [](const Point& p) { return p[0] < 0.25 ? 1.0 : 0.0; });
    for (double p : {1.0, 2.0, 3.0}) {
      CHECK(weak_norm(chi, p, leb, CubeIndex{}) == doctest::Approx(std::pow(0.25, 1.0 / p)).epsilon(1e-14));
      CHECK(weak_norm(chi, p, leb, CubeIndex{1, {0, 0}}) == doctest::Approx(std::pow(0.5, 1.0 / p)).epsilon(1e-14));
      CHECK(lorentz_p1_norm(chi, p, leb, CubeIndex{}) == doctest::Approx(std::pow(0.25, 1.0 / p)).epsilon(1e-14));
    }
  }
  SUBCASE("sandwich weak <= triple <= p' weak and the L^p ordering") {
    std::mt19937_64 rng(50);
    for (int s = 0; s < 50; ++s) {
      const Grid gs = unit_grid(1 + s % 2, 4);
      const GridFunction h = wlab::testing::random_function(gs, rng);
      const Measure mu = Measure::of_weight(wlab::testing::random_weight(gs, rng));
      for (double p : {1.5, 2.0, 4.0}) {
        const double weak = weak_norm(h, p, mu, CubeIndex{});
        const double triple = triple_norm(h, p, mu, CubeIndex{});
        const double pp = p / (p - 1.0);
        CHECK(weak <= triple * (1 + 1e-12));
        CHECK(triple <= pp * weak * (1 + 1e-12));
        const double lp = lp_norm(h, p, mu, CubeIndex{});
        CHECK(weak <= lp * (1 + 1e-12));
        CHECK(lp <= lorentz_p1_norm(h, p, mu, CubeIndex{}) * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("exp-L Orlicz norm") {
  const Grid g = unit_grid(1, 4);
  const Measure leb = Measure::lebesgue(g);
  CHECK(orlicz_exp_norm(GridFunction::constant(g, 3.0), CubeIndex{}, leb) ==
        doctest::Approx(3.0 / std::log(2.0)).epsilon(1e-9));
  CHECK(orlicz_exp_norm(GridFunction::constant(g, 0.0), CubeIndex{}, leb) == 0.0);

  // two values a on mass 1/4 and b on mass 3/4: locate the root of
  // (1/4)(e^(a/l) - 1) + (3/4)(e^(b/l) - 1) = 1 by a dense scan
  const double a = 2.0, b = 0.5;
  const GridFunction two = GridFunction::sample(g, [=](const Point& p) { return p[0] < 0.25 ? a : b; });
  auto phi = [=](double l) { return 0.25 * std::expm1(a / l) + 0.75 * std::expm1(b / l) - 1.0; };
  double root = NAN;
  const int steps = 2'000'000;
  for (int i = 0; i < steps; ++i) {
    const double l0 = 0.1 + 10.0 * i / steps, l1 = 0.1 + 10.0 * (i + 1) / steps;
    if (phi(l0) > 0.0 && phi(l1) <= 0.0) {
      root = 0.5 * (l0 + l1);
      break;
    }
  }
  REQUIRE(std::isfinite(root));
  CHECK(orlicz_exp_norm(two, CubeIndex{}, leb) == doctest::Approx(root).epsilon(1e-5));
}

TEST_CASE("Rubio de Francia construction") {
  const Grid g = unit_grid(1, 6);
  SUBCASE("constant input is a fixed point of M") {
    OperatorConfig cfg;
    cfg.opnorm_mode = OpnormMode::Supplied;
    cfg.opnorm_value = 1.0;
    cfg.rdf_terms = 20;
    const RdfResult r = rubio_de_francia(GridFunction::constant(g, 1.0), Weight::unit(g), 2.0, cfg);
    const double expected = 2.0 - std::ldexp(1.0, -20);
    CHECK(r.r.min() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(r.r.max() == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("properties on the probe corpus") {
    OperatorConfig cfg;
    std::mt19937_64 rng(9);
    const Weight w = wlab::testing::random_weight(g, rng);
    for (const GridFunction& h : probe_corpus(g, 17, 8)) {
      const RdfResult r = rubio_de_francia(h, w, 2.0, cfg);
      const RdfProperties props = rdf_properties(h, r);
      CHECK(props.a_pass);
      CHECK(props.a_min_gap >= 0.0);
      CHECK(props.b_pass);
      CHECK(props.c_pass);
      for (std::size_t i = 0; i < h.size(); ++i) CHECK(r.r[static_cast<std::int64_t>(i)] >= h[static_cast<std::int64_t>(i)]);
    }
  }
  SUBCASE("invalid configurations") {
    OperatorConfig cfg;
    cfg.rdf_terms = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    OperatorConfig eps;
    eps.maximal = MaximalKind::Powered;
    eps.epsilon = 1.5;
    CHECK_THROWS_AS(eps.validate(), DomainError);
    CHECK_THROWS_AS(rubio_de_francia(GridFunction::constant(g, -1.0), Weight::unit(g), 2.0, OperatorConfig{}),
                    DomainError);
  }
}

TEST_CASE("powered maximal") {
  const Grid g = unit_grid(1, 5);
  std::mt19937_64 rng(12);
  const GridFunction h = wlab::testing::random_function(g, rng, false);
  // eps = 1 is the plain operator; smaller eps never exceeds it (Jensen)
  const GridFunction m1 = powered_maximal(h, 1.0, MaximalKind::Centered);
  const GridFunction m = centered_maximal(h);
  const GridFunction mh = powered_maximal(h, 0.5, MaximalKind::Centered);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto k = static_cast<std::int64_t>(i);
    CHECK(m1[k] == doctest::Approx(m[k]).epsilon(1e-12));
    CHECK(mh[k] <= m[k] * (1 + 1e-12));
    CHECK(mh[k] >= h[k] * (1 - 1e-12));
  }
}
