#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "unidym/critical_intervals.hpp"
#include "unidym/cutting.hpp"
#include "unidym/orbits.hpp"

using namespace unidym;

namespace {

const PeriodicOrbit* orbit_near(const std::vector<PeriodicOrbit>& os, double x) {
  for (const auto& o : os)
    if (o.contains(x, 1e-6)) return &o;
  return nullptr;
}

MapModel folding() { return MapModel::polynomial(Polynomial{0.0, 1.9, 0.0, -0.9}, Domain::interval(-1.5, 1.5)); }

}  // namespace

TEST(FindPeriodicOrbits, LogisticFourFixedPoints) {
  const auto res = find_periodic_orbits(MapModel::logistic(4.0), 1, {0.0, 1.0});
  const auto& fixed = res.period(1);
  ASSERT_EQ(fixed.size(), 2u);
  const auto* zero = orbit_near(fixed, 0.0);
  const auto* other = orbit_near(fixed, 0.75);
  ASSERT_TRUE(zero && other);
  EXPECT_NEAR(zero->multiplier, 4.0, 1e-9);
  EXPECT_NEAR(other->multiplier, -2.0, 1e-9);
}

TEST(FindPeriodicOrbits, Logistic32TwoCycle) {
  const auto res = find_periodic_orbits(MapModel::logistic(3.2), 2, {0.0, 1.0});
  ASSERT_EQ(res.period(2).size(), 1u);
  const auto& o = res.period(2).front();
  ASSERT_EQ(o.points.size(), 2u);
  EXPECT_NEAR(o.points[0], 0.513045, 1e-6);
  EXPECT_NEAR(o.points[1], 0.799455, 1e-6);
  EXPECT_NEAR(o.multiplier, -3.2 * 3.2 + 2 * 3.2 + 4, 1e-8);
  EXPECT_NEAR(o.multiplier, 0.16, 1e-8);
  EXPECT_TRUE(res.period(1).empty());
}

TEST(FindPeriodicOrbits, IdentityIsDegenerate) {
  const auto res = find_periodic_orbits_upto(MapModel::identity(Domain::interval(0.0, 1.0)), 2, {0.0, 1.0});
  EXPECT_TRUE(res.degenerate);
  EXPECT_FALSE(res.flags.empty());
}

TEST(FindPeriodicOrbits, BadArguments) {
  EXPECT_THROW(find_periodic_orbits(MapModel::logistic(3.0), 0, {0.0, 1.0}), ParameterError);
  EXPECT_THROW(find_periodic_orbits(MapModel::logistic(3.0), 1, {0.0, 2.0}), DomainError);
}

TEST(FindPeriodicOrbits, MultiplierChainRule) {
  const auto g = MapModel::logistic(3.9);
  const auto res = find_periodic_orbits_upto(g, 6, {0.0, 1.0});
  for (const auto& o : res.all()) {
    const double n = o.period;
    ASSERT_EQ(o.points.size(), static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < o.points.size(); ++s) {
      double prod = 1.0, x = o.points[s];
      for (int k = 0; k < o.period; ++k) {
        prod *= g.jet(x).d1;
        x = g.value(x);
      }
      EXPECT_NEAR(prod, o.multiplier, 1e-8 * std::max(1.0, std::abs(o.multiplier)));
      EXPECT_NEAR(x, o.points[s], 1e-9);
    }
  }
}

TEST(ClassifyOrbit, Examples) {
  EXPECT_EQ(classify_orbit(0.16, 0.1), OrbitClass::attracting);
  EXPECT_EQ(classify_orbit(-2.0, 0.5), OrbitClass::repelling_expansive);
  EXPECT_EQ(classify_orbit(1.0, 0.3), OrbitClass::neutral_band);
  EXPECT_EQ(classify_orbit(1.0, 0.0), OrbitClass::neutral_band);
  EXPECT_EQ(classify_orbit(-1.04, 0.05), OrbitClass::neutral_band);
}

TEST(GroupIntoPacks, SingletonAttractingFixedPoint) {
  const auto g = MapModel::logistic(2.8);
  const auto orbits = find_periodic_orbits_upto(g, 2, {0.0, 1.0}).all();
  const auto packs = group_into_packs(orbits, g);
  int attracting = 0;
  for (const auto& pk : packs) {
    if (!pk.has_attracting()) continue;
    ++attracting;
    EXPECT_EQ(pk.members.size(), 1u);
    EXPECT_NEAR(pk.members.front().points.front(), 1.0 - 1.0 / 2.8, 1e-10);
  }
  EXPECT_EQ(attracting, 1);
}

TEST(GroupIntoPacks, OddCubicSharedPack) {
  const auto g = MapModel::odd_cubic(-1.2);
  const auto orbits = find_periodic_orbits_upto(g, 2, {-0.6, 0.6}).all();
  ASSERT_EQ(orbits.size(), 2u);
  const auto packs = group_into_packs(orbits, g);
  ASSERT_EQ(packs.size(), 1u);
  const auto& pk = packs.front();
  EXPECT_EQ(pk.members.size(), 2u);
  EXPECT_EQ(pk.orientation_preserving_period, 2);
  EXPECT_NEAR(pk.carrier.I.lo(), -std::sqrt(0.2), 1e-9);
  EXPECT_NEAR(pk.carrier.I.hi(), std::sqrt(0.2), 1e-9);
  const auto* fixed = orbit_near(pk.members, 0.0);
  ASSERT_TRUE(fixed);
  EXPECT_NEAR(fixed->multiplier, -1.2, 1e-12);
  const auto* two = orbit_near(pk.members, std::sqrt(0.2));
  ASSERT_TRUE(two);
  EXPECT_NEAR(two->multiplier, 0.36, 1e-9);
}

TEST(GroupIntoPacks, ThreeSingletonsAcrossRepeller) {
  const auto g = folding();
  const auto orbits = find_periodic_orbits_upto(g, 1, {-1.2, 1.2}).all();
  ASSERT_EQ(orbits.size(), 3u);
  const auto packs = group_into_packs(orbits, g);
  EXPECT_EQ(packs.size(), 3u);
  for (const auto& pk : packs) EXPECT_EQ(pk.members.size(), 1u);
}

TEST(GroupIntoPacks, Soundness) {
  for (double a : {3.2, 3.5, 3.83, 3.9}) {
    const auto g = MapModel::logistic(a);
    const auto orbits = find_periodic_orbits_upto(g, 6, {0.0, 1.0}).all();
    for (const auto& pk : group_into_packs(orbits, g)) {
      const int N = pk.orientation_preserving_period;
      for (const auto& o : pk.members) {
        EXPECT_EQ(o.orientation_preserving_period(), N) << "a=" << a;
        const auto gN = MapModel::power(g, N);
        for (double p : o.points) EXPECT_GE(gN.jet(p).d1, -1e-9) << "a=" << a << " p=" << p;
      }
      if (pk.carrier.I.is_degenerate()) continue;
      EXPECT_EQ(periodic_interval_test(g, pk.carrier.I, pk.carrier.n), PeriodicTest::periodic);
      const int n = pk.carrier.n;
      for (const auto& o : orbits) {
        for (double p : o.points) {
          if (!pk.carrier.I.contains(p)) continue;
          EXPECT_TRUE(o.period == n || o.period == 2 * n || 2 * o.period == n) << "a=" << a;
        }
      }
    }
  }
}

TEST(GroupIntoPacks, PushedOrbitSharesPack) {
  // p = 0 of the odd cubic: U_0^r pulled back over the op-period holds the 2-cycle point.
  const auto g = MapModel::odd_cubic(-1.2);
  const auto orbits = find_periodic_orbits_upto(g, 2, {-0.6, 0.6}).all();
  const auto packs = group_into_packs(orbits, g);
  USequenceOptions opt;
  opt.U_n = OrientedInterval(-0.6, 0.6);
  const auto seq = build_u_sequence(g, 0.0, 2, 2.0, compute_critical_intervals(g), opt);
  const auto rep = pack_grouping_check(g, seq, packs);
  if (rep.applicable) {
    for (bool same : rep.same_pack) EXPECT_TRUE(same);
  }
  // the constructed configuration: both orbits in one pack
  ASSERT_EQ(packs.size(), 1u);
}

TEST(Census, Logistic32) {
  CensusOptions opt;
  opt.n_max = 4;
  opt.rho = 0.05;
  const auto row = census_one(MapModel::logistic(3.2), {0.0, 1.0}, opt);
  EXPECT_EQ(row.exceptional_count, 1);
  ASSERT_EQ(row.critical_basins.size(), 1u);
  EXPECT_NEAR(row.critical_basins[0].first, 0.5, 1e-12);
  ASSERT_GE(row.critical_basins[0].second, 0);
  const auto& pk = row.packs[row.critical_basins[0].second];
  EXPECT_TRUE(orbit_near(pk.members, 0.513045));
}

TEST(Census, LogisticFourHasNoExceptional) {
  CensusOptions opt;
  opt.n_max = 4;
  opt.rho = 0.01;
  const auto row = census_one(MapModel::logistic(4.0), {0.0, 1.0}, opt);
  EXPECT_EQ(row.exceptional_count, 0);
  EXPECT_GT(row.min_nonexceptional_multiplier, 1.01);
}

TEST(Census, CubicFamilyMerger) {
  CensusOptions opt;
  opt.n_max = 1;
  const auto rows = census([](double l) { return MapModel::cubic_perturbation(l); }, {0.5, 1.5},
                           {-2.0, 2.0}, opt);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].orbit_count, 3);
  EXPECT_EQ(rows[1].orbit_count, 1);
  EXPECT_EQ(rows[0].d_E, 1);
}

TEST(Census, ErrorsRecordedPerRow) {
  CensusOptions opt;
  opt.n_max = 1;
  const auto rows = census([](double a) { return MapModel::logistic(a); }, {3.0}, {-1.0, 1.0}, opt);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].error.empty());
}

TEST(BasinMembership, Examples) {
  const auto g = MapModel::logistic(3.2);
  const auto orbits = find_periodic_orbits_upto(g, 2, {0.0, 1.0}).all();
  const auto packs = group_into_packs(orbits, g);
  const PeriodicPack* cyc = nullptr;
  for (const auto& pk : packs)
    if (pk.has_attracting()) cyc = &pk;
  ASSERT_TRUE(cyc);
  EXPECT_TRUE(basin_membership(g, 0.5, *cyc).member);
  EXPECT_FALSE(basin_membership(g, 0.0, *cyc).member);
  for (const auto& pk : packs)
    if (!pk.has_attracting()) {
      EXPECT_THROW(basin_membership(g, 0.5, pk), PreconditionError);
    }
}

TEST(BasinMembership, Escape) {
  const auto g = MapModel::cubic_perturbation(0.5);
  const auto orbits = find_periodic_orbits_upto(g, 1, {-0.5, 0.5}).all();
  const auto packs = group_into_packs(orbits, g);
  ASSERT_EQ(packs.size(), 1u);
  const auto r = basin_membership(g, 10.0, packs.front());
  EXPECT_FALSE(r.member);
  EXPECT_TRUE(r.escaped);
  EXPECT_TRUE(basin_membership(g, 0.3, packs.front()).member);
}

TEST(FirstEntry, LogisticFour) {
  const auto g = MapModel::logistic(4.0);
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back((i + 0.5) / 1000.0);
  const auto rep = first_entry_schwarzian_check(g, OrientedInterval::centered(0.5, 0.05), xs, 40);
  EXPECT_GT(rep.entered, 500);
  EXPECT_EQ(rep.violations, 0);
}

TEST(FirstEntry, CubicViolates) {
  const auto g = MapModel::cubic_perturbation(0.1, Domain::interval(-1.0, 1.0));
  std::vector<double> xs;
  for (int i = 0; i < 200; ++i) xs.push_back(-0.05 + 0.1 * (i + 0.5) / 200.0);
  const auto rep = first_entry_schwarzian_check(g, OrientedInterval::centered(0.0, 0.05), xs, 5);
  EXPECT_GT(rep.violations, 0);
}

TEST(FirstEntry, DirectEntryIsSchwarzianSign) {
  const auto g = MapModel::logistic(3.7);
  const std::vector<double> xs{0.3, 0.35};
  const auto rep = first_entry_schwarzian_check(g, {0.25, 0.4}, xs, 10);
  EXPECT_EQ(rep.entered, 2);
  EXPECT_NEAR(rep.max_schwarzian, std::max(schwarzian_at(g, 0.3), schwarzian_at(g, 0.35)), 1e-12);
}

TEST(QuadraticBound, Examples) {
  const auto g = MapModel::polynomial(Polynomial{1.0, 0.0, -2.0});
  auto rep = quadratic_schwarzian_bound_check(g, {0.0, 1}, {-0.5, 0.5});
  EXPECT_DOUBLE_EQ(rep.A, 4.0);
  EXPECT_DOUBLE_EQ(rep.B, 4.0);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_NEAR(rep.worst_ratio, -1.5, 1e-9);
  rep = quadratic_schwarzian_bound_check(MapModel::logistic(4.0), {0.5, 1}, {0.2, 0.8});
  EXPECT_DOUBLE_EQ(rep.A, 8.0);
  EXPECT_DOUBLE_EQ(rep.B, 8.0);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_THROW(quadratic_schwarzian_bound_check(MapModel::polynomial(Polynomial{0.0, 0.0, 0.0, 1.0}),
                                                {0.0, 2}, {-0.5, 0.5}),
               PreconditionError);
}

TEST(UniformContraction, AffineHalf) {
  const auto g = MapModel::affine(0.5, 0.0, Domain::interval(-1.0, 1.0));
  ContractionOptions opt;
  opt.epsilon = 0.1;
  opt.n_max = 3;
  opt.exclude_basins = false;
  const auto row = uniform_contraction_scan(g, {-1.0, 1.0}, opt);
  // components are 2^n |J| clipped: need 8|J| < 0.1
  EXPECT_DOUBLE_EQ(row.delta_hat, 0.01);
  EXPECT_NEAR(row.max_component, 0.08, 1e-12);
}

TEST(UniformContraction, LogisticFour) {
  ContractionOptions opt;
  opt.epsilon = 0.1;
  const auto row = uniform_contraction_scan(MapModel::logistic(4.0), {0.0, 1.0}, opt);
  EXPECT_GT(row.delta_hat, 0.0);
  EXPECT_FALSE(row.neutral_flag);
}

TEST(UniformContraction, NearParabolicCollapses) {
  ContractionOptions opt;
  opt.epsilon = 0.1;
  opt.n_max = 6;
  const auto near = uniform_contraction_scan(MapModel::logistic(3.0), {0.0, 1.0}, opt);
  const auto far = uniform_contraction_scan(MapModel::logistic(4.0), {0.0, 1.0}, opt);
  EXPECT_TRUE(near.neutral_flag || near.delta_hat <= far.delta_hat);
}
