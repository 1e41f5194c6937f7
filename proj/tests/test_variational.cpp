#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cocircular;
using std::numbers::pi;

namespace {

ProblemSpec two_body_spec() {
  ProblemSpec s;
  s.kernel = InteractionKernel::power_law(3.0);
  s.masses.m = {1, 1};
  s.spin = 0.5;
  return s;
}

CircularConfig on_circle(const ProblemSpec& s, double r, std::vector<double> alpha) {
  CircularConfig c;
  c.r = r;
  c.alpha = std::move(alpha);
  c.masses = s.masses;
  return c;
}

}  // namespace

TEST(Variational, TwoBodyPotentialAndHessian) {
  const auto s = two_body_spec();
  const auto c = on_circle(s, 1.0, {0.0, pi});
  EXPECT_NEAR(potential(s, c), -1.5, 1e-14);
  EXPECT_LT(gradient(s, c).norm(), 1e-14);
  const auto H = hessian(s, c);
  EXPECT_NEAR(H(0, 0), -3.0, 1e-14);
  EXPECT_NEAR(H(2, 2), -0.25, 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gauge_fixed(H));
  EXPECT_NEAR(es.eigenvalues()(0), -3.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(1), -0.25, 1e-14);
}

TEST(Variational, EquilateralIsStationary) {
  ProblemSpec s;
  s.kernel = InteractionKernel::power_law(3.0);
  s.masses.m = {1, 1, 1};
  s.spin = std::sqrt(1.0 / std::sqrt(3.0));
  const auto c = on_circle(s, 1.0, {0.0, 2 * pi / 3, 4 * pi / 3});
  EXPECT_LT(gradient(s, c).norm(), 1e-14);
  EXPECT_LT(residuals(s, c).max_abs(), 1e-14);
}

TEST(Variational, CentralMassFixture) {
  ProblemSpec s;
  s.kernel = InteractionKernel::power_law(3.0);
  s.masses = MassVector{{1, 1}, 1.0};
  s.variant = Variant::central_mass;
  s.spin = std::sqrt(1.25);
  const auto c = on_circle(s, 1.0, {0.0, pi});
  EXPECT_LT(residuals(s, c).max_abs(), 1e-14);
  EXPECT_LT(gradient(s, c).norm(), 1e-14);
  EXPECT_NEAR(feasibility_margin(s, c), 0.25, 1e-14);
  s.spin = 0.5;
  EXPECT_NEAR(feasibility_margin(s, c), -0.75, 1e-14);
  EXPECT_THROW(feasibility_margin(two_body_spec(), c), UsageError);
}

TEST(Variational, PotentialMatchesCartesianOracle) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    const auto rc = oracle::random_case(rng, t);
    const double ref = oracle::potential_cartesian(rc.spec, rc.config.masses, oracle::pack(rc.config));
    EXPECT_NEAR(potential(rc.spec, rc.config), ref, 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Variational, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 120; ++t) {
    const auto rc = oracle::random_case(rng, t);
    auto f = [&](const Eigen::VectorXd& x) { return oracle::potential_cartesian(rc.spec, rc.config.masses, x); };
    const auto x = oracle::pack(rc.config);
    EXPECT_LT(oracle::max_rel_error(gradient(rc.spec, rc.config), oracle::fd_gradient(f, x)), 1e-6) << "case " << t;
    EXPECT_LT(oracle::max_rel_error(hessian(rc.spec, rc.config), oracle::fd_hessian(f, x)), 1e-5) << "case " << t;
  }
}

TEST(Variational, GradientIsResidualMap) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 40; ++t) {
    const auto rc = oracle::random_case(rng, t);
    const auto g = gradient(rc.spec, rc.config);
    const auto res = residuals(rc.spec, rc.config);
    double radial_sum = 0.0;
    for (double v : res.radial) radial_sum += v;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    EXPECT_NEAR(g(0), -2.0 * radial_sum, 1e-12 * scale);
    for (std::size_t i = 0; i < rc.config.size(); ++i) {
      EXPECT_NEAR(g(static_cast<Eigen::Index>(i + 1)), 2.0 * res.tangential[i], 1e-12 * scale);
    }
  }
}

TEST(Variational, RotationGeneratorIsNullDirection) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto rc = oracle::random_case(rng, t);
    const auto H = hessian(rc.spec, rc.config);
    const auto v = rotation_generator(rc.config.size());
    EXPECT_LT((H * v).norm(), 1e-12 * std::max(1.0, H.norm()));
    EXPECT_NEAR(gradient(rc.spec, rc.config).dot(v), 0.0, 1e-12 * std::max(1.0, H.norm()));
  }
}

TEST(Variational, QuadraticFormAgreesWithConcavityFormAtStationaryPoints) {
  for (std::size_t n : {2u, 3u, 5u, 6u}) {
    ProblemSpec s;
    s.kernel = InteractionKernel::quasi_homogeneous(1, 3, 0.5, 4);
    s.masses.m.assign(n, 1.0);
    s.spin = 0.8;
    const double r = oracle::regular_ngon_radius(s, n, 1.0);
    const auto c = regular_ngon(n, r, s.masses);
    ASSERT_LT(gradient(s, c).norm(), 1e-10);
    std::mt19937_64 rng(n);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
      HessianProbe p{N(rng), {}};
      for (std::size_t i = 0; i < n; ++i) p.gamma.push_back(N(rng));
      const double q = quadratic_form(s, c, p);
      EXPECT_NEAR(q, concavity_form(s, c, p), 1e-10 * std::max(1.0, std::abs(q)));
      EXPECT_LE(q, 1e-12);
    }
  }
}

TEST(Variational, ConcavityFormWithCentralMass) {
  ProblemSpec s;
  s.kernel = InteractionKernel::power_law(3.0);
  s.masses = MassVector{{1, 1, 1, 1}, 2.0};
  s.variant = Variant::central_mass;
  s.spin = 1.1;
  const double r = oracle::regular_ngon_radius(s, 4, 1.0, 2.0);
  const auto c = regular_ngon(4, r, s.masses);
  ASSERT_LT(gradient(s, c).norm(), 1e-10);
  HessianProbe p{0.7, {0.1, -0.4, 0.9, 0.3}};
  EXPECT_NEAR(quadratic_form(s, c, p), concavity_form(s, c, p), 1e-10);
}

TEST(Variational, Errors) {
  const auto s = two_body_spec();
  EXPECT_THROW(potential(s, on_circle(s, 1.0, {0.0, 0.0})), DomainError);
  auto cm = s;
  cm.variant = Variant::central_mass;
  EXPECT_THROW(validate(cm), DomainError);
  auto bad = s;
  bad.spin = -1.0;
  EXPECT_THROW(validate(bad), DomainError);
  HessianProbe p{1.0, {0.0}};
  EXPECT_THROW(quadratic_form(s, on_circle(s, 1.0, {0.0, pi}), p), UsageError);
}
