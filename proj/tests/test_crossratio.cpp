#include <gtest/gtest.h>

#include <cmath>

#include "unidym/crossratio.hpp"
#include "unidym/rng.hpp"
#include "unidym/schwarzian.hpp"

using namespace unidym;

TEST(CrossRatio, Examples) {
  EXPECT_DOUBLE_EQ(cross_ratio({0.0, 1.0}, {0.25, 0.75}), 8.0);
  EXPECT_DOUBLE_EQ(cross_ratio({0.0, 4.0}, {1.0, 2.0}), 2.0);
  EXPECT_THROW(cross_ratio({0.0, 1.0}, {0.0, 0.5}), DegenerateConfigurationError);
  EXPECT_THROW(cross_ratio({0.0, 1.0}, {0.5, 1.5}), DegenerateConfigurationError);
}

TEST(CrossRatio, AffineInvariant) {
  CounterRng rng(21);
  for (int i = 0; i < 200; ++i) {
    auto r = rng.substream(i);
    const double a = r.uniform(-3, 3), b = a + r.uniform(0.1, 2);
    const double c = r.uniform(a, b), d = r.uniform(a, b);
    const OrientedInterval T(a, b), J(std::min(c, d), std::max(c, d));
    if (J.length() < 1e-6 || J.lo() - a < 1e-6 || b - J.hi() < 1e-6) continue;
    const double s = r.uniform(0.5, 4), t = r.uniform(-10, 10);
    const OrientedInterval T2(s * a + t, s * b + t), J2(s * J.lo() + t, s * J.hi() + t);
    EXPECT_NEAR(cross_ratio(T, J), cross_ratio(T2, J2), 1e-9 * cross_ratio(T, J));
  }
}

TEST(Distortion, Examples) {
  EXPECT_NEAR(distortion(MapModel::mobius(1, 0, 1, 1), {0.0, 1.0}, {0.25, 0.5}), 1.0, 1e-10);
  EXPECT_NEAR(distortion(MapModel::identity(), {0.0, 3.0}, {1.0, 2.5}), 1.0, 1e-15);
  const auto sq = MapModel::polynomial(Polynomial{0.0, 0.0, 1.0});
  EXPECT_GT(distortion(sq, {1.0, 2.0}, {1.2, 1.5}), 1.0);
  EXPECT_THROW(distortion(sq, {-1.0, 1.0}, {-0.5, 0.5}), NotDiffeoError);
}

TEST(Distortion, MobiusInvariance) {
  CounterRng rng(22);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    auto r = rng.substream(i);
    const double a = r.uniform(-2, 2), b = r.uniform(-2, 2), c = r.uniform(-2, 2), d = r.uniform(-2, 2);
    if (std::abs(a * d - b * c) < 0.1) continue;
    const auto f = MapModel::mobius(a, b, c, d);
    const double pole = c != 0.0 ? -d / c : 1e300;
    double lo = r.uniform(-3, 3), hi = lo + r.uniform(0.05, 1.0);
    if (pole > lo - 0.05 && pole < hi + 0.05) continue;
    const OrientedInterval T(lo, hi);
    const double u = r.uniform(0.1, 0.45), v = r.uniform(0.55, 0.9);
    const OrientedInterval J(lo + u * T.length(), lo + v * T.length());
    EXPECT_NEAR(distortion(f, T, J), 1.0, 1e-10);
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(Distortion, Multiplicative) {
  CounterRng rng(23);
  for (int i = 0; i < 100; ++i) {
    auto r = rng.substream(i);
    const auto f = MapModel::polynomial(Polynomial{r.uniform(-1, 1), r.uniform(1, 2), r.uniform(-0.2, 0.2), r.uniform(0.5, 1)});
    const auto g = MapModel::polynomial(Polynomial{r.uniform(-1, 1), r.uniform(1, 2), 0.0, r.uniform(0.2, 1)});
    const double lo = r.uniform(-1, 1);
    const OrientedInterval T(lo, lo + r.uniform(0.1, 0.5));
    const OrientedInterval J(T.lo() + 0.3 * T.length(), T.lo() + 0.6 * T.length());
    if (!is_diffeo_on(g, T)) continue;
    const auto gT = image_interval(g, T), gJ = image_interval(g, J);
    if (!is_diffeo_on(f, gT)) continue;
    const double lhs = distortion(MapModel::compose(f, g), T, J);
    const double rhs = distortion(f, gT, gJ) * distortion(g, T, J);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(rhs));
  }
}

TEST(Distortion, NegativeSchwarzianExpands) {
  CounterRng rng(24);
  const auto f = MapModel::logistic(3.9);
  for (int i = 0; i < 200; ++i) {
    auto r = rng.substream(i);
    const double lo = r.uniform(0.0, 0.4);
    const OrientedInterval T(lo, std::min(0.49, lo + r.uniform(0.01, 0.3)));
    ASSERT_LT(schwarzian_sup(f, T), 0.0);
    const OrientedInterval J(T.lo() + 0.2 * T.length(), T.lo() + 0.7 * T.length());
    EXPECT_GT(distortion(f, T, J), 1.0);
  }
}

TEST(ScaledNeighborhood, Examples) {
  auto N = scaled_neighborhood({0.0, 1.0}, 0.5);
  EXPECT_DOUBLE_EQ(N.lo(), -0.5);
  EXPECT_DOUBLE_EQ(N.hi(), 1.5);
  N = scaled_neighborhood({2.0, 4.0}, 0.0);
  EXPECT_DOUBLE_EQ(N.lo(), 2.0);
  EXPECT_DOUBLE_EQ(N.hi(), 4.0);
  N = scaled_neighborhood({-1.0, 1.0}, 1.0);
  EXPECT_DOUBLE_EQ(N.lo(), -3.0);
  EXPECT_DOUBLE_EQ(N.hi(), 3.0);
  EXPECT_THROW(scaled_neighborhood({0.0, 1.0}, -0.1), ParameterError);
}

TEST(ScaledSpace, InverseOfNeighborhood) {
  const OrientedInterval J(1.0, 2.0);
  EXPECT_NEAR(scaled_space(scaled_neighborhood(J, 0.75), J), 0.75, 1e-15);
}

TEST(MinimumPrinciple, Examples) {
  auto rep = minimum_principle_check(MapModel::affine(2.0, 0.0), 1, {0.0, 0.1}, 0.5);
  EXPECT_TRUE(rep.verified()) << rep.reason;
  rep = minimum_principle_check(MapModel::identity(), 1, {0.0, 1.0}, 0.1);
  EXPECT_EQ(rep.status, MinimumPrincipleReport::Status::counterexample);
  const auto cubic = MapModel::polynomial(Polynomial{0.0, 1.0, 0.0, 1.0});
  rep = minimum_principle_check(cubic, 1, {0.5, 0.6}, 0.3);
  EXPECT_TRUE(rep.verified()) << rep.reason;
  EXPECT_GT(rep.min_sampled_derivative, 1.3);
}

TEST(MinimumPrinciple, NotMonotone) {
  EXPECT_THROW(minimum_principle_check(MapModel::logistic(4.0), 1, {0.4, 0.6}, 0.1), NotDiffeoError);
}

TEST(MinimumPrinciple, IteratePower) {
  const auto g = MapModel::affine(1.5, 0.0);
  const auto rep = minimum_principle_check(g, 2, {0.0, 0.1}, 0.5);
  EXPECT_TRUE(rep.verified()) << rep.reason;
}
