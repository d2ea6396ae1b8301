#include <gtest/gtest.h>

#include <cmath>

#include "unidym/chains.hpp"
#include "unidym/critical_intervals.hpp"
#include "unidym/rng.hpp"
#include "unidym/schwarzian.hpp"

using namespace unidym;

namespace {

MapModel poly(std::initializer_list<double> c) { return MapModel::polynomial(Polynomial(c)); }

}  // namespace

TEST(ComputeCriticalIntervals, CubicPlusX) {
  const auto S = compute_critical_intervals(poly({0.0, 1.0, 0.0, 1.0}));
  ASSERT_EQ(S.d_E(), 1);
  EXPECT_NEAR(S.intervals[0].a, 0.0, 1e-12);
  EXPECT_NEAR(S.intervals[0].b, 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(S.intervals[0].E().lo(), -1.1547005383792515, 1e-12);
  EXPECT_NEAR(S.intervals[0].E().hi(), 1.1547005383792515, 1e-12);
}

TEST(ComputeCriticalIntervals, CubicMinusXIsEmpty) {
  EXPECT_TRUE(compute_critical_intervals(poly({0.0, -1.0, 0.0, 1.0})).empty());
}

TEST(ComputeCriticalIntervals, QuarticExcludesRealRoot) {
  const auto S = compute_critical_intervals(poly({0.0, 0.0, 1.0, 0.0, 1.0}));
  ASSERT_EQ(S.d_E(), 1);
  EXPECT_NEAR(S.intervals[0].a, 0.0, 1e-12);
  EXPECT_NEAR(S.intervals[0].b, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(S.intervals[0].E().hi(), std::sqrt(2.0), 1e-12);
}

TEST(ComputeCriticalIntervals, Preconditions) {
  EXPECT_THROW(compute_critical_intervals(MapModel::affine(2.0, 1.0)), PreconditionError);
  EXPECT_THROW(compute_critical_intervals(MapModel::constant_schwarzian(1.0, 0.0)), PreconditionError);
}

TEST(ComputeCriticalIntervals, CountBoundAndSorting) {
  CounterRng rng(41);
  for (int i = 0; i < 200; ++i) {
    auto r = rng.substream(i);
    const int d = static_cast<int>(r.integer(2, 12));
    std::vector<double> c;
    for (int k = 0; k <= d; ++k) c.push_back(r.uniform(-1, 1));
    c.back() = r.uniform(0.5, 1.5);
    const auto S = compute_critical_intervals(MapModel::polynomial(Polynomial(c)));
    EXPECT_LE(S.d_E(), (d - 1) / 2);
    for (std::size_t j = 1; j < S.intervals.size(); ++j)
      EXPECT_LE(S.intervals[j - 1].length(), S.intervals[j].length());
    for (const auto& ci : S.intervals) {
      EXPECT_GT(ci.b, 0.0);
      EXPECT_DOUBLE_EQ(ci.doubled().length(), 2.0 * ci.E().length());
    }
  }
}

TEST(SchwarzianUpperBound, EqualityCase) {
  for (double lambda : {1.0, 0.5, 0.1, 0.01}) {
    const auto f = MapModel::cubic_perturbation(lambda);
    const auto S = compute_critical_intervals(f);
    const double bound = schwarzian_upper_bound(f, 0.0, S);
    EXPECT_NEAR(bound, 6.0 / lambda, 1e-10 * 6.0 / lambda);
    EXPECT_NEAR(schwarzian_at(f, 0.0), bound, 1e-10 * bound);
  }
}

TEST(SchwarzianUpperBound, NegativeOutside) {
  const auto f = poly({0.0, -1.0, 0.0, 1.0});
  const auto S = compute_critical_intervals(f);
  for (double x : {-2.0, 0.1, 0.3, 1.5}) {
    EXPECT_EQ(schwarzian_upper_bound(f, x, S), 0.0);
    EXPECT_LT(schwarzian_at(f, x), 0.0);
  }
  const auto g = poly({0.0, 1.0, 0.0, 1.0});
  EXPECT_EQ(schwarzian_upper_bound(g, 2.0, compute_critical_intervals(g)), 0.0);
  EXPECT_LT(schwarzian_at(g, 2.0), 0.0);
}

TEST(SchwarzianUpperBound, PointwiseDomination) {
  CounterRng rng(42);
  const std::vector<MapModel> fams{poly({0.0, 0.3, 0.0, 1.0}), poly({0.0, 0.0, 1.0, 0.0, 1.0}),
                                   poly({0.2, 1.0, -0.5, 0.4, 0.3, 0.1})};
  for (std::size_t fi = 0; fi < fams.size(); ++fi) {
    const auto& f = fams[fi];
    const auto S = compute_critical_intervals(f);
    auto r = rng.substream(fi);
    for (int i = 0; i < 10000; ++i) {
      const double x = r.uniform(-3, 3);
      if (std::abs(f.jet(x).d1) < 1e-6) continue;
      const double s = schwarzian_at(f, x);
      const double b = schwarzian_upper_bound(f, x, S);
      EXPECT_LE(s, b + 1e-9 * (1 + std::abs(b))) << "x=" << x;
      bool inside = false;
      for (const auto& ci : S.intervals) inside = inside || ci.E().contains(x);
      if (!inside) {
        EXPECT_LT(s, 0.0) << "x=" << x;
      }
    }
  }
}

TEST(ExcepPart1, BoundArithmetic) {
  const auto f = MapModel::cubic_perturbation(1.0);
  const auto rep = verify_excep_part1(f, {{{5.0, 6.0}, {5.2, 5.5}}}, 0.05, 1);
  EXPECT_EQ(rep.d_E, 1);
  EXPECT_NEAR(rep.bound, std::exp(-0.8), 1e-15);
  EXPECT_NEAR(rep.bound, 0.449329, 1e-6);
  EXPECT_TRUE(rep.hypotheses_ok);
  EXPECT_GT(rep.product_B, 1.0);
}

TEST(ExcepPart1, RandomAdmissibleConfigurations) {
  const auto f = MapModel::cubic_perturbation(0.01);
  const auto S = compute_critical_intervals(f);
  const double kappa = 0.2;
  const double E = S.intervals[0].length();
  CounterRng rng(43);
  int accepted = 0;
  for (int trial = 0; trial < 200 && accepted < 20; ++trial) {
    auto r = rng.substream(trial);
    std::vector<std::pair<OrientedInterval, OrientedInterval>> Ts;
    for (int i = 0; i < 3; ++i) {
      const double len = r.uniform(0.05, 0.9) * kappa * E;
      const double lo = r.uniform(-0.3, 0.3);
      const OrientedInterval T(lo, lo + len);
      const OrientedInterval J(lo + r.uniform(0.05, 0.4) * len, lo + r.uniform(0.6, 0.95) * len);
      Ts.emplace_back(T, J);
    }
    const auto rep = verify_excep_part1(f, Ts, kappa, 3, &S);
    if (!rep.hypotheses_ok) continue;
    ++accepted;
    EXPECT_GE(rep.product_B, rep.bound);
    EXPECT_LE(rep.measured_multiplicity, 3);
  }
  EXPECT_EQ(accepted, 20);
}

TEST(ExcepPart1, LargeKappaReported) {
  const auto rep = verify_excep_part1(MapModel::cubic_perturbation(1.0), {{{5.0, 6.0}, {5.2, 5.5}}}, 0.3, 1);
  EXPECT_FALSE(rep.hypotheses_ok);
}

TEST(ExcepPart2, BoundArithmetic) {
  EXPECT_NEAR(excep_part2_bound(1, 2.0, 0.01, 1.0), 1.0 + (16.0 / 153.0 - 32 * 1e-4 / 4) / 12.0 / 9.0, 1e-15);
  EXPECT_NEAR(excep_part2_bound(1, 2.0, 0.01, 1.0), 1.000961, 1e-6);
}

TEST(ExcepPart2, KappaPrecondition) {
  const auto f = MapModel::cubic_perturbation(1.0);
  EXPECT_THROW(verify_excep_part2(f, {-0.3, 0.3}, {-0.1, 0.1}, 2.0, 0.1, 1.0), PreconditionError);
}

TEST(ExcepPart2, CriticalIntervalCase) {
  // x^3 + x: E = [-1.1547, 1.1547], 2E = [-2.3094, 2.3094]; T pokes out of 2E
  // while 2T still reaches back into E
  const auto f = MapModel::cubic_perturbation(1.0);
  const auto S = compute_critical_intervals(f);
  const double kappa = 0.05, lambda = 2.0, delta = 1.0;
  const double e = S.intervals[0].E().hi();
  const OrientedInterval T = OrientedInterval::centered(e + 0.8, 0.4);
  const OrientedInterval J = OrientedInterval::centered(T.midpoint(), 0.4 / 3.0);
  const auto rep = verify_excep_part2(f, T, J, lambda, kappa, delta, &S);
  ASSERT_TRUE(rep.hypotheses_ok) << (rep.violations.empty() ? "" : rep.violations.front());
  EXPECT_NE(rep.which, ExcepPart2Report::Case::not_applicable);
  EXPECT_GT(rep.B, rep.bound);
}

TEST(ExcepPart2, CriticalPointCase) {
  const auto f = MapModel::polynomial(Polynomial{0.0, -1.0, 0.0, 1.0});
  const double c = 1.0 / std::sqrt(3.0);
  const OrientedInterval J(c + 0.01, c + 0.02);
  const OrientedInterval T = scaled_neighborhood(J, 0.5);
  const auto rep = verify_excep_part2(f, T, J, 4.0, 0.05, 0.5);
  EXPECT_EQ(rep.which, ExcepPart2Report::Case::critical_point);
  EXPECT_GT(rep.B, rep.bound);
}

TEST(ExcepPart2, NotApplicable) {
  const auto f = MapModel::polynomial(Polynomial{0.0, -1.0, 0.0, 1.0});
  const OrientedInterval J(3.0, 3.1);
  const auto rep = verify_excep_part2(f, scaled_neighborhood(J, 0.5), J, 2.0, 0.05, 0.5);
  EXPECT_EQ(rep.which, ExcepPart2Report::Case::not_applicable);
}

TEST(Accounting, MobiusStepIsNeutral) {
  const auto g = MapModel::mobius(1, 0, 1, 1, Domain::interval(0.0, 10.0));
  Chain c;
  c.intervals = {OrientedInterval(1.0, 2.0), image_interval(g, {1.0, 2.0})};
  c.multiplicity = intersection_multiplicity(c.intervals);
  const auto rep = composed_distortion_accounting(g, c, {1.3, 1.6}, 0.5);
  EXPECT_NEAR(rep.log_B_total, 0.0, 1e-10);
}

TEST(Accounting, LedgerMatchesDirectLogistic) {
  const auto g = MapModel::logistic(4.0);
  // the orbit passes 0.4974 at step 8, so T_10 has to be small enough that
  // the pulled back T_8 stays clear of 0.5
  std::vector<double> orbit = forward_orbit(g, 0.1234, 10);
  const OrientedInterval Tm = OrientedInterval::centered(orbit.back(), 1e-6);
  PullbackOptions popt;
  popt.diffeomorphic = true;
  const Chain c = pull_back_chain(g, *Tm.intersection({0.0, 1.0}), orbit, popt);
  const OrientedInterval& T0 = c.head();
  const OrientedInterval J(T0.lo() + 0.3 * T0.length(), T0.lo() + 0.6 * T0.length());
  const auto rep = composed_distortion_accounting(g, c, J, 0.2);
  ASSERT_EQ(rep.steps.size(), 10u);
  EXPECT_NEAR(rep.log_B_total, rep.log_B_direct, 1e-9);
}

TEST(Accounting, OversizedStepListed) {
  const auto g = MapModel::logistic(4.0);
  std::vector<double> orbit = forward_orbit(g, 0.05, 3);
  PullbackOptions popt;
  popt.diffeomorphic = true;
  const Chain c = pull_back_chain(g, OrientedInterval::centered(orbit.back(), 0.05), orbit, popt);
  const OrientedInterval& T0 = c.head();
  const OrientedInterval J(T0.lo() + 0.3 * T0.length(), T0.lo() + 0.6 * T0.length());
  const auto rep = composed_distortion_accounting(g, c, J, 1e-3);
  EXPECT_FALSE(rep.hypotheses_ok);
  bool listed = false;
  for (const auto& s : rep.steps) listed = listed || !s.violations.empty();
  EXPECT_TRUE(listed);
}
