#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cocircular;
using std::numbers::pi;

namespace {

CurvedPolygonConfig random_polygon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::size_t n = 2 + static_cast<std::size_t>(rng() % 5);
  CircularConfig c;
  c.r = 0.3 + 2.0 * U(rng);
  const double spacing = 2 * pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.alpha.push_back(i == 0 ? 0.0 : spacing * (static_cast<double>(i) + 0.35 * (U(rng) - 0.5)));
    c.masses.m.push_back(0.5 + 2.0 * U(rng));
  }
  return lift(c, 0.1 + U(rng));
}

}  // namespace

TEST(Curved, MinkowskiForm) {
  EXPECT_EQ(minkowski({1, 2, 3}, {1, 1, 2}), -3.0);
  const auto p = hyperboloid_point({0.3, -1.2});
  EXPECT_NEAR(minkowski(p, p), -1.0, 1e-15);
}

TEST(Curved, LiftOntoUpperSheet) {
  CircularConfig c;
  c.r = 1.0;
  c.alpha = {0.0, pi};
  c.masses.m = {1, 1};
  const auto cc = lift(c, 0.3);
  EXPECT_NEAR(cc.z, std::sqrt(2.0), 1e-15);
  EXPECT_NO_THROW(validate(cc));
  auto bad = cc;
  bad.z = 1.0;
  EXPECT_THROW(validate(bad), DomainError);
  bad = cc;
  bad.spin = -1.0;
  EXPECT_THROW(validate(bad), DomainError);
}

TEST(Curved, OrbitStaysOnHyperboloid) {
  std::mt19937_64 rng(1);
  const auto cc = random_polygon(rng);
  for (double t : {0.0, 0.7, 3.1}) {
    for (std::size_t i = 0; i < cc.size(); ++i) {
      const auto p = curved_position(cc, t, i);
      const auto v = curved_velocity(cc, t, i);
      EXPECT_NEAR(minkowski(p, p), -1.0, 1e-13);
      EXPECT_NEAR(minkowski(p, v), 0.0, 1e-13);
    }
  }
}

TEST(Curved, ReducedProblemUsesCurvedKernel) {
  std::mt19937_64 rng(2);
  const auto rp = reduced_problem(random_polygon(rng));
  EXPECT_EQ(rp.spec.kernel.family, KernelFamily::curved_hyperbolic);
  EXPECT_EQ(rp.spec.variant, Variant::curved);
  EXPECT_NO_THROW(validate(rp.spec));
}

TEST(Curved, DirectResidualMatchesReduction) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> T(0.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cc = random_polygon(rng);
    const auto rp = reduced_problem(cc);
    const auto res = residuals(rp.spec, rp.config);
    const double t = T(rng);
    for (std::size_t i = 0; i < cc.size(); ++i) {
      const auto direct = direct_residual(cc, t, i);
      const auto predicted = predicted_direct_residual(cc, res, i);
      EXPECT_NEAR(direct.outward, predicted.outward, 1e-10) << trial;
      EXPECT_NEAR(direct.tangential, predicted.tangential, 1e-10) << trial;
      EXPECT_NEAR(direct.vertical, predicted.vertical, 1e-10) << trial;
    }
  }
}

TEST(Curved, TwoBodyFixtureSpin) {
  // Bisect the direct third-component residual in B, independent of the reduction.
  CircularConfig c;
  c.r = 1.0;
  c.alpha = {0.0, pi};
  c.masses.m = {1, 1};
  const double B = oracle::bisect([&](double b) { return direct_residual(lift(c, b), 0.0, 0).vertical; }, 0.01, 2.0);
  const auto h = InteractionKernel::curved_hyperbolic();
  EXPECT_NEAR(B, std::sqrt(2.0 * eval_f(h, 2.0)), 1e-12);
  EXPECT_NEAR(B, 0.2973017, 1e-7);
}

TEST(Curved, RegularPolygonsAreRelativeEquilibria) {
  for (std::size_t n = 2; n <= 6; ++n) {
    ProblemSpec s;
    s.kernel = InteractionKernel::curved_hyperbolic();
    s.variant = Variant::curved;
    s.masses.m.assign(n, 1.0);
    s.spin = 0.4;
    const double rho = oracle::regular_ngon_radius(s, n, 1.0);
    const auto cc = lift(regular_ngon(n, rho, s.masses), s.spin);
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = direct_residual(cc, 1.3, i);
      EXPECT_NEAR(d.outward, 0.0, 1e-10);
      EXPECT_NEAR(d.tangential, 0.0, 1e-10);
      EXPECT_NEAR(d.vertical, 0.0, 1e-10);
    }
  }
}

TEST(Curved, CoincidentPointsThrow) {
  std::vector<HyperboloidPoint> p{hyperboloid_point({0.5, 0.0}), hyperboloid_point({0.5, 0.0})};
  EXPECT_THROW(curved_interaction(p, {1.0, 1.0}, 0), DomainError);
}
