#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "unidym/crossratio.hpp"
#include "unidym/rng.hpp"
#include "unidym/schwarzian.hpp"

using namespace unidym;

namespace {

MapModel cubic(double lambda) { return MapModel::cubic_perturbation(lambda); }

}  // namespace

TEST(SchwarzianAt, Examples) {
  EXPECT_NEAR(schwarzian_at(cubic(0.01), 0.0), 600.0, 1e-9);
  EXPECT_NEAR(schwarzian_at(MapModel::polynomial(Polynomial{0.0, 0.0, 0.0, 1.0}), 0.5), -16.0, 1e-12);
  EXPECT_NEAR(schwarzian_at(MapModel::mobius(2, 1, 1, 3), 0.7), 0.0, 1e-10);
}

TEST(SchwarzianAt, ClosedFormForCubicFamily) {
  for (double lambda : {1.0, 0.1, 0.01, 0.001}) {
    for (double x : {-0.3, 0.0, 0.05, 0.4}) {
      const double exact = 6.0 * (lambda - 6 * x * x) / std::pow(lambda + 3 * x * x, 2);
      EXPECT_NEAR(schwarzian_at(cubic(lambda), x), exact, 1e-12 * std::abs(exact) + 1e-12);
    }
  }
}

TEST(SchwarzianAt, CriticalPoint) {
  EXPECT_THROW(schwarzian_at(MapModel::logistic(4.0), 0.5), CriticalPointError);
}

TEST(SchwarzianAt, CompositionRule) {
  CounterRng rng(31);
  for (int i = 0; i < 100; ++i) {
    auto r = rng.substream(i);
    const auto f = MapModel::polynomial(Polynomial{r.uniform(-1, 1), r.uniform(1, 3), r.uniform(-1, 1), r.uniform(-1, 1)});
    const auto g = MapModel::polynomial(Polynomial{r.uniform(-1, 1), r.uniform(1, 3), r.uniform(-1, 1)});
    const double x = r.uniform(-0.3, 0.3);
    const Jet gj = g.jet(x);
    if (std::abs(gj.d1) < 0.1 || std::abs(f.jet(gj.f).d1) < 0.1) continue;
    const double lhs = schwarzian_at(MapModel::compose(f, g), x);
    const double rhs = schwarzian_at(f, gj.f) * gj.d1 * gj.d1 + schwarzian_at(g, x);
    EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::abs(rhs)));
  }
}

TEST(SchwarzianAt, AlternativeForm) {
  // Sf = -2 sqrt(Df) D^2 (1/sqrt(Df))
  const auto f = MapModel::polynomial(Polynomial{0.1, 1.0, 0.4, 0.3});
  auto phi = [&](double x) { return 1.0 / std::sqrt(f.jet(x).d1); };
  for (double x : {-0.2, 0.1, 0.35}) {
    const double h = 1e-4;
    const double d2 = (phi(x + h) - 2 * phi(x) + phi(x - h)) / (h * h);
    EXPECT_NEAR(-2.0 * std::sqrt(f.jet(x).d1) * d2, schwarzian_at(f, x), 1e-6);
  }
}

TEST(SchwarzianSup, Examples) {
  EXPECT_NEAR(schwarzian_sup(MapModel::mobius(1, 0, 1, 1), {0.0, 2.0}), 0.0, 1e-10);
  EXPECT_NEAR(schwarzian_sup(cubic(0.01), {-0.001, 0.001}), 600.0, 1e-6);
  EXPECT_NEAR(schwarzian_sup(MapModel::polynomial(Polynomial{0.0, 0.0, 1.0}), {1.0, 2.0}), -0.375, 1e-12);
  EXPECT_NEAR(schwarzian_inf(MapModel::polynomial(Polynomial{0.0, 0.0, 1.0}), {1.0, 2.0}), -1.5, 1e-12);
  EXPECT_THROW(schwarzian_sup(MapModel::logistic(4.0), {0.4, 0.6}), CriticalPointError);
}

TEST(CosBound, Arithmetic) {
  EXPECT_NEAR(cos_bound(2.0, 1.0), 0.291927, 1e-6);
  const auto rep = verify_cos_bound(MapModel::mobius(1, 0, 1, 1), {0.0, 1.0}, {0.25, 0.5}, 2.0);
  EXPECT_TRUE(rep.hypothesis_ok);
  EXPECT_NEAR(rep.measured_B, 1.0, 1e-10);
  EXPECT_TRUE(rep.holds());
}

TEST(CosBound, HypothesisViolationReported) {
  const auto rep = verify_cos_bound(MapModel::identity(), {0.0, 1.0}, {0.25, 0.5}, 10.0);
  EXPECT_FALSE(rep.hypothesis_ok);
  ASSERT_FALSE(rep.violations.empty());
}

TEST(CosBound, RandomFamilyHolds) {
  CounterRng rng(32);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto r = rng.substream(i);
    const double lambda = std::pow(10.0, r.uniform(-2, 0));
    const double lo = r.uniform(-0.5, 0.4);
    const OrientedInterval T(lo, lo + r.uniform(0.02, 0.3));
    const OrientedInterval J(T.lo() + 0.25 * T.length(), T.lo() + 0.6 * T.length());
    const auto f = cubic(lambda);
    const double C = std::max(1e-3, schwarzian_sup(f, T) * 1.01 + 1e-3);
    const auto rep = verify_cos_bound(f, T, J, C);
    if (!rep.hypothesis_ok) continue;
    ++checked;
    EXPECT_GE(rep.margin, -1e-9) << "lambda " << lambda << " T " << T.lo() << "," << T.hi();
  }
  EXPECT_GT(checked, 50);
}

TEST(SinhBound, Arithmetic) {
  EXPECT_NEAR(sinh_bound(2.0, 1.0, 0.5), 2.0 * std::sinh(0.5), 1e-12);
  EXPECT_NEAR(sinh_bound(2.0, 1.0, 0.5), 1.042190, 1e-6);
  EXPECT_NEAR(sinh_secondary_bound(2.0, 1.0, 0.5), 1.0 + 1.0 / 24.0, 1e-12);
  EXPECT_GE(sinh_bound(2.0, 1.0, 0.5), sinh_secondary_bound(2.0, 1.0, 0.5));
}

TEST(SinhBound, ZeroDeltaIsPrecondition) {
  EXPECT_THROW(verify_sinh_bound(MapModel::identity(), {0.0, 1.0}, 0.0, 1.0), PreconditionError);
}

TEST(SinhBound, SquareMap) {
  const auto sq = MapModel::polynomial(Polynomial{0.0, 0.0, 1.0});
  // T = [1,2], J centred with delta = 0.5
  const auto rep = verify_sinh_bound(sq, {1.25, 1.75}, 0.5, 0.375);
  EXPECT_TRUE(rep.hypothesis_ok);
  EXPECT_GT(rep.measured_B, rep.bound_value);
  EXPECT_GE(rep.bound_value, rep.secondary_bound);
}

TEST(OdeComparison, ConstantSchwarzianEquality) {
  const double C = 3.0;
  const auto rep = ode_comparison_oracle([C](double) { return C; }, {0.0, 1.0}, 0.0, 1.0, C,
                                         ComparisonSign::positive);
  EXPECT_LT(rep.max_abs_difference, 1e-9);
}

TEST(OdeComparison, MobiusBelowCos) {
  const auto rep = ode_comparison_oracle(MapModel::mobius(1, 0, 1, 1), {0.0, 1.0}, 0.0, 1.0, 2.0,
                                         ComparisonSign::positive);
  EXPECT_TRUE(rep.ordering_holds);
  for (double v : rep.phi) EXPECT_NEAR(v, 1.0, 1e-9);
  EXPECT_LT(rep.integration_residual, 1e-8);
}

TEST(OdeComparison, CubicAwayFromZero) {
  const auto f = cubic(0.1);
  const OrientedInterval T(0.05, 0.3);
  const double C = schwarzian_sup(f, T) + 0.01;
  ASSERT_GT(C, 0.0);
  const auto rep = ode_comparison_oracle(f, T, T.lo(), T.hi(), C, ComparisonSign::positive);
  EXPECT_TRUE(rep.ordering_holds);
  EXPECT_EQ(rep.xs.size(), 1025u);
  EXPECT_LT(rep.integration_residual, 1e-8);
}

TEST(Sharpness, WitnessBelowThresholdAboveCriticalValue) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const auto w = constant_schwarzian_min_distortion(1.5 * pi2, 121, 32);
  EXPECT_LT(w.min_B, 0.05);
  const auto below = constant_schwarzian_min_distortion(0.9 * pi2, 61, 24);
  EXPECT_GT(below.min_B, 0.05);
}
