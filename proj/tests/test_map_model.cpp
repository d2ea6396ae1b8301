#include <gtest/gtest.h>

#include <cmath>

#include "unidym/map_analysis.hpp"
#include "unidym/map_model.hpp"
#include "unidym/rng.hpp"

using namespace unidym;

namespace {

MapModel square() { return MapModel::polynomial(Polynomial{0.0, 0.0, 1.0}); }

Polynomial random_poly(CounterRng& rng, int degree) {
  std::vector<double> c;
  for (int k = 0; k <= degree; ++k) c.push_back(rng.uniform(-2.0, 2.0));
  return Polynomial(c);
}

}  // namespace

TEST(EvalDerivatives, CubicPlusLinearAtOne) {
  const auto f = MapModel::polynomial(Polynomial{0.0, 1.0, 0.0, 1.0});
  const auto d = f.eval_derivatives(1.0, 3);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_DOUBLE_EQ(d[0], 2.0);
  EXPECT_DOUBLE_EQ(d[1], 4.0);
  EXPECT_DOUBLE_EQ(d[2], 6.0);
  EXPECT_DOUBLE_EQ(d[3], 6.0);
}

TEST(EvalDerivatives, OrderOutOfRange) {
  EXPECT_THROW(MapModel::identity().eval_derivatives(0.0, 4), ParameterError);
}

TEST(EvalDerivatives, OutsideDomain) {
  EXPECT_THROW(MapModel::logistic(4.0).value(1.5), DomainError);
}

TEST(EvalDerivatives, MatchesCentralDifferences) {
  CounterRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = rng.substream(trial);
    const Polynomial p = random_poly(r, 5);
    const auto f = MapModel::polynomial(p);
    const double x = r.uniform(-1.0, 1.0);
    const Jet j = f.jet(x);
    auto err = [&](double h) {
      const double fd = (f.value(x + h) - f.value(x - h)) / (2 * h);
      return std::abs(fd - j.d1);
    };
    const double e1 = err(1e-2), e2 = err(1e-3);
    // second-order convergence: a tenfold smaller step cuts the error about 100x
    EXPECT_LT(e2, e1 / 50.0 + 1e-10);
    const double h = 1e-4;
    const double fd2 = (f.jet(x + h).d1 - f.jet(x - h).d1) / (2 * h);
    const double fd3 = (f.jet(x + h).d2 - f.jet(x - h).d2) / (2 * h);
    EXPECT_NEAR(fd2, j.d2, 1e-6 * (1 + std::abs(j.d2)));
    EXPECT_NEAR(fd3, j.d3, 1e-6 * (1 + std::abs(j.d3)));
  }
}

TEST(Composition, MatchesPolynomialExpansion) {
  CounterRng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = rng.substream(trial);
    const Polynomial p = random_poly(r, 3), q = random_poly(r, 2);
    const auto composed = MapModel::compose(MapModel::polynomial(p), MapModel::polynomial(q));
    const auto direct = MapModel::polynomial(p.compose(q));
    const double x = r.uniform(-1.0, 1.0);
    const Jet a = composed.jet(x), b = direct.jet(x);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-10 * (1 + std::abs(b[k])));
  }
}

TEST(Composition, PowerIsIteratedCompose) {
  const auto g = MapModel::logistic(3.7);
  const auto g3 = MapModel::power(g, 3);
  const double x = 0.3;
  EXPECT_NEAR(g3.value(x), g.value(g.value(g.value(x))), 1e-15);
  const auto p = g3.as_polynomial();
  ASSERT_TRUE(p);
  EXPECT_EQ(p->degree(), 8);
  EXPECT_NEAR(g3.jet(x).d1, MapModel::polynomial(*p).jet(x).d1, 1e-9);
}

TEST(Mobius, RejectsSingular) { EXPECT_THROW(MapModel::mobius(1, 2, 2, 4), ParameterError); }

TEST(CriticalPoints, Logistic) {
  const auto cps = critical_points(MapModel::logistic(4.0), {0.0, 1.0});
  ASSERT_EQ(cps.size(), 1u);
  EXPECT_NEAR(cps[0].location, 0.5, 1e-12);
  EXPECT_EQ(cps[0].multiplicity, 1);
}

TEST(CriticalPoints, CubeHasDoubleCriticalPoint) {
  const auto cps = critical_points(MapModel::polynomial(Polynomial{0.0, 0.0, 0.0, 1.0}), {-1.0, 1.0});
  ASSERT_EQ(cps.size(), 1u);
  EXPECT_NEAR(cps[0].location, 0.0, 1e-10);
  EXPECT_EQ(cps[0].multiplicity, 2);
  EXPECT_FALSE(cps[0].is_turning());
}

TEST(CriticalPoints, IdentityHasNone) {
  EXPECT_TRUE(critical_points(MapModel::identity(), {-5.0, 5.0}).empty());
}

TEST(CriticalPoints, NoMissedSignChange) {
  CounterRng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    auto r = rng.substream(trial);
    const auto f = MapModel::polynomial(random_poly(r, 6));
    const OrientedInterval region(-1.0, 1.0);
    const auto cps = critical_points(f, region);
    int found = 0;
    for (const auto& c : cps)
      if (c.is_turning()) ++found;
    int changes = 0;
    double prev = f.jet(-1.0).d1;
    for (int i = 1; i <= 20000; ++i) {
      const double d = f.jet(-1.0 + 2.0 * i / 20000).d1;
      if ((d > 0) != (prev > 0) && d != 0.0) ++changes;
      if (d != 0.0) prev = d;
    }
    EXPECT_EQ(found, changes) << "trial " << trial;
  }
}

TEST(CriticalPoints, NonPolynomialScan) {
  // tan has no critical points; the compose with x^2 adds one at 0
  const auto t = MapModel::constant_schwarzian(2.0, 0.0);
  const auto f = MapModel::compose(t, square());
  const auto cps = critical_points(f, {-0.5, 0.5});
  ASSERT_EQ(cps.size(), 1u);
  EXPECT_NEAR(cps[0].location, 0.0, 1e-8);
}

TEST(ImageInterval, Examples) {
  auto I = image_interval(MapModel::logistic(4.0), {0.0, 1.0});
  EXPECT_NEAR(I.lo(), 0.0, 1e-15);
  EXPECT_NEAR(I.hi(), 1.0, 1e-15);
  I = image_interval(MapModel::identity(), {0.2, 0.3});
  EXPECT_DOUBLE_EQ(I.lo(), 0.2);
  EXPECT_DOUBLE_EQ(I.hi(), 0.3);
  I = image_interval(square(), {-1.0, 2.0});
  EXPECT_NEAR(I.lo(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(I.hi(), 4.0);
}

TEST(ImageInterval, OutsideDomain) {
  EXPECT_THROW(image_interval(MapModel::logistic(4.0), {-0.5, 0.5}), DomainError);
}

TEST(IsDiffeoOn, Examples) {
  EXPECT_TRUE(is_diffeo_on(MapModel::logistic(4.0), {0.0, 0.4}));
  EXPECT_FALSE(is_diffeo_on(MapModel::logistic(4.0), {0.4, 0.6}));
  EXPECT_TRUE(is_diffeo_on(MapModel::identity(), {-100.0, 100.0}));
  EXPECT_FALSE(is_diffeo_on(MapModel::mobius(1, 0, 1, 1), {-2.0, 0.0}));
  EXPECT_TRUE(is_diffeo_on(MapModel::mobius(1, 0, 1, 1), {0.0, 1.0}));
}

TEST(Domain, CircleReduceAndExtended) {
  const Domain c = Domain::circle(1.0);
  EXPECT_TRUE(c.is_circle());
  EXPECT_NEAR(c.reduce(1.25), 0.25, 1e-15);
  EXPECT_NEAR(c.reduce(-0.25), 0.75, 1e-15);
  const auto arc = c.shorter_arc(0.9, 0.1);
  EXPECT_NEAR(arc.length(), 0.2, 1e-12);
  const Domain ext = Domain::interval(0.0, 1.0).extended();
  EXPECT_DOUBLE_EQ(ext.bounds().lo(), -1.0);
  EXPECT_DOUBLE_EQ(ext.bounds().hi(), 2.0);
}

TEST(Interval, ScaledAndIntersection) {
  const OrientedInterval I(0.0, 1.0);
  const auto s = I.scaled(3.0);
  EXPECT_DOUBLE_EQ(s.lo(), -1.0);
  EXPECT_DOUBLE_EQ(s.hi(), 2.0);
  EXPECT_FALSE(I.intersection({2.0, 3.0}));
  EXPECT_DOUBLE_EQ(I.overlap({0.5, 3.0}), 0.5);
}
