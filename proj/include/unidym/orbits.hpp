#ifndef UNIDYM_ORBITS_HPP
#define UNIDYM_ORBITS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "unidym/chains.hpp"
#include "unidym/critical_intervals.hpp"
#include "unidym/cutting.hpp"
#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/map_analysis.hpp"
#include "unidym/map_model.hpp"
#include "unidym/schwarzian.hpp"

namespace unidym {

/// One periodic cycle, listed in dynamical order starting at its smallest point.
struct PeriodicOrbit {
  std::vector<double> points;
  int period = 1;
  /// Dg^n(p) = prod Dg(points[i])
  double multiplier = 0.0;
  /// Multiplier within the neutral tolerance of +1, or found as a
  /// tangential zero of g^n(x) - x.
  bool tangential = false;

  int orientation_preserving_period() const noexcept {
    return multiplier >= 0.0 ? period : 2 * period;
  }
  bool contains(double x, double tol = 1e-9) const {
    return std::any_of(points.begin(), points.end(),
                       [&](double p) { return std::abs(p - x) <= tol * (1.0 + std::abs(x)); });
  }
};

enum class OrbitClass { attracting, repelling_expansive, neutral_band };

inline const char* to_string(OrbitClass c) {
  switch (c) {
    case OrbitClass::attracting: return "attracting";
    case OrbitClass::repelling_expansive: return "repelling_expansive";
    case OrbitClass::neutral_band: return "neutral_band";
  }
  return "?";
}

inline constexpr double kNeutralTolerance = 1e-6;

inline OrbitClass classify_orbit(double multiplier, double rho, double tol = kNeutralTolerance) {
  const double m = std::abs(multiplier);
  if (m < 1.0 - tol) return OrbitClass::attracting;
  if (m > 1.0 + rho) return OrbitClass::repelling_expansive;
  return OrbitClass::neutral_band;
}

inline OrbitClass classify_orbit(const PeriodicOrbit& o, double rho, double tol = kNeutralTolerance) {
  return classify_orbit(o.multiplier, rho, tol);
}

struct OrbitSearchOptions {
  /// Grid step as a fraction of the region length.
  double resolution = 1.0 / 1048576.0;
  int bisection_iterations = 80;
  int newton_steps = 3;
  /// Relative distance under which two roots are the same point.
  double same_point_tolerance = 1e-9;
  /// |g^n(x) - x| accepted for a tangential (touching) root.
  double tangential_residual = 1e-10;
  double neutral_tolerance = kNeutralTolerance;
};

struct OrbitSearchResult {
  /// orbits[n - 1] holds the cycles of minimal period n.
  std::vector<std::vector<PeriodicOrbit>> by_period;
  /// g^n(x) = x on a whole sub-interval for some n (a continuum of periodic points).
  bool degenerate = false;
  std::vector<std::string> flags;

  std::vector<PeriodicOrbit> all() const {
    std::vector<PeriodicOrbit> out;
    for (const auto& v : by_period) out.insert(out.end(), v.begin(), v.end());
    return out;
  }
  const std::vector<PeriodicOrbit>& period(int n) const { return by_period.at(n - 1); }
};

namespace detail {

inline double raw_iterate(const Node& g, double x, int n) {
  for (int i = 0; i < n && std::isfinite(x); ++i) x = node_value(g, x);
  return x;
}

inline std::optional<PeriodicOrbit> make_orbit(const MapModel& g, double x, int n,
                                               const OrbitSearchOptions& opt) {
  std::vector<double> pts{x};
  double mult = 1.0;
  double y = x;
  for (int k = 0; k < n; ++k) {
    const Jet j = detail::node_jet(g.root(), y);
    mult *= j.d1;
    y = j.f;
    if (!std::isfinite(y)) return std::nullopt;
    if (k + 1 < n) {
      if (n % (k + 1) == 0 && std::abs(y - x) <= opt.same_point_tolerance * (1.0 + std::abs(x)))
        return std::nullopt;  // lower period
      pts.push_back(y);
    }
  }
  PeriodicOrbit o;
  const auto it = std::min_element(pts.begin(), pts.end());
  std::rotate(pts.begin(), it, pts.end());
  o.points = std::move(pts);
  o.period = n;
  o.multiplier = mult;
  o.tangential = std::abs(mult - 1.0) < opt.neutral_tolerance;
  return o;
}

inline double polish_periodic(const MapModel& g, double a, double b, int n,
                              const OrbitSearchOptions& opt) {
  const Node& root = g.root();
  auto h = [&](double x) { return raw_iterate(root, x, n) - x; };
  double ha = h(a);
  for (int i = 0; i < opt.bisection_iterations; ++i) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double hm = h(m);
    if (hm == 0.0) return m;
    if ((hm < 0) == (ha < 0)) {
      a = m;
      ha = hm;
    } else {
      b = m;
    }
  }
  double x = 0.5 * (a + b);
  for (int i = 0; i < opt.newton_steps; ++i) {
    double y = x, d = 1.0;
    for (int k = 0; k < n; ++k) {
      const Jet j = node_jet(root, y);
      d *= j.d1;
      y = j.f;
    }
    const double hx = y - x;
    if (d == 1.0 || !std::isfinite(hx)) break;
    const double next = x - hx / (d - 1.0);
    if (!(std::abs(h(next)) < std::abs(hx))) break;
    x = next;
  }
  return x;
}

inline double minimize_abs(const std::function<double(double)>& h, double a, double b) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (std::abs(h(c)) < std::abs(h(d))) b = d;
    else a = c;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// All cycles of minimal period 1..n_max inside `region` (orbit points may
/// leave the region). Roots of g^n(x) - x are bracketed by sign changes on a
/// uniform grid, refined by bisection and Newton; touching zeros (local
/// minima of |g^n(x) - x| that vanish) are kept and flagged tangential.
inline OrbitSearchResult find_periodic_orbits_upto(const MapModel& g, int n_max,
                                                   const OrientedInterval& region,
                                                   const OrbitSearchOptions& opt = {}) {
  if (n_max < 1) throw ParameterError("n_max must be positive");
  if (!region.is_bounded() || region.is_degenerate())
    throw ParameterError("orbit search needs a bounded non-degenerate region");
  if (!g.domain().contains(region.lo()) || !g.domain().contains(region.hi()))
    throw DomainError("search region lies outside the domain");
  if (!(opt.resolution > 0.0 && opt.resolution <= 0.5)) throw ParameterError("bad resolution");

  const Node& root = g.root();
  const long N = static_cast<long>(std::ceil(1.0 / opt.resolution));
  const double step = region.length() / N;
  const std::size_t nm = static_cast<std::size_t>(n_max);

  struct Candidate {
    double a, b;
    bool bracket;
  };
  std::vector<std::vector<Candidate>> cand(nm);
  std::vector<double> h0(nm), h1(nm), h2(nm), x0(nm);
  std::vector<int> zero_run(nm, 0);
  std::vector<bool> degenerate(nm, false);

  auto sample = [&](double x, std::vector<double>& out) {
    double y = x;
    for (std::size_t n = 0; n < nm; ++n) {
      y = std::isfinite(y) ? detail::node_value(root, y) : y;
      out[n] = y - x;
    }
  };

  double xprev2 = 0.0, xprev = 0.0;
  for (long i = 0; i <= N; ++i) {
    const double x = i == N ? region.hi() : region.lo() + step * i;
    sample(x, h2);
    for (std::size_t n = 0; n < nm; ++n) {
      const double cur = h2[n];
      const double ztol = 1e-15 * (1.0 + std::abs(x));
      zero_run[n] = std::abs(cur) <= ztol ? zero_run[n] + 1 : 0;
      if (zero_run[n] >= 3) degenerate[n] = true;
      if (!std::isfinite(cur)) continue;
      if (cur == 0.0) {
        cand[n].push_back({x, x, true});
        continue;
      }
      if (i >= 1) {
        const double prev = h1[n];
        if (std::isfinite(prev) && prev != 0.0 && (prev < 0) != (cur < 0))
          cand[n].push_back({xprev, x, true});
        if (i >= 2) {
          const double pp = h0[n];
          if (std::isfinite(pp) && pp != 0.0 && prev != 0.0 && (pp < 0) == (prev < 0) &&
              (prev < 0) == (cur < 0) && std::abs(prev) <= std::abs(pp) &&
              std::abs(prev) <= std::abs(cur))
            cand[n].push_back({xprev2, x, false});
        }
      }
    }
    std::swap(h0, h1);
    std::swap(h1, h2);
    xprev2 = xprev;
    xprev = x;
  }

  OrbitSearchResult res;
  res.by_period.resize(nm);
  for (std::size_t n = 0; n < nm; ++n) {
    const int period = static_cast<int>(n) + 1;
    if (degenerate[n]) {
      res.degenerate = true;
      res.flags.push_back("g^" + std::to_string(period) + "(x) = x on a sub-interval");
      continue;
    }
    auto& found = res.by_period[n];
    auto known = [&](double x) {
      for (const auto& o : found)
        if (o.contains(x, opt.same_point_tolerance)) return true;
      return false;
    };
    for (const auto& c : cand[n]) {
      double x;
      bool touch = false;
      if (c.bracket) {
        x = c.a == c.b ? c.a : detail::polish_periodic(g, c.a, c.b, period, opt);
      } else {
        auto h = [&](double t) { return detail::raw_iterate(root, t, period) - t; };
        x = detail::minimize_abs(h, c.a, c.b);
        if (!(std::abs(h(x)) <= opt.tangential_residual * (1.0 + std::abs(x)))) continue;
        touch = true;
      }
      if (known(x)) continue;
      auto o = detail::make_orbit(g, x, period, opt);
      if (!o) continue;
      if (touch) {
        o->tangential = true;
        res.flags.push_back("tangential orbit of period " + std::to_string(period));
      }
      found.push_back(std::move(*o));
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.points.front() < b.points.front(); });
  }
  return res;
}

/// Cycles of minimal period exactly n.
inline OrbitSearchResult find_periodic_orbits(const MapModel& g, int n,
                                              const OrientedInterval& region,
                                              const OrbitSearchOptions& opt = {}) {
  OrbitSearchResult all = find_periodic_orbits_upto(g, n, region, opt);
  for (int k = 1; k < n; ++k) all.by_period[k - 1].clear();
  return all;
}

/// Closed I with g^n(I) = I and g^n a bijection of I.
struct PeriodicInterval {
  OrientedInterval I;
  int n = 1;
};

/// A pack of periodic orbits: orbits whose points share a maximal periodic
/// interval. `carrier` is the periodic interval holding the leftmost member
/// point; its images under g cover the other members.
struct PeriodicPack {
  PeriodicInterval carrier;
  std::vector<PeriodicOrbit> members;
  int orientation_preserving_period = 1;
  bool flagged = false;
  std::vector<std::string> flags;

  bool has_attracting(double tol = kNeutralTolerance) const {
    return std::any_of(members.begin(), members.end(), [tol](const auto& o) {
      return classify_orbit(o, 0.0, tol) == OrbitClass::attracting;
    });
  }
  /// Some member is not repelling_expansive at threshold rho.
  bool is_exceptional(double rho, double tol = kNeutralTolerance) const {
    return std::any_of(members.begin(), members.end(), [&](const auto& o) {
      return classify_orbit(o, rho, tol) != OrbitClass::repelling_expansive;
    });
  }
  std::size_t point_count() const {
    std::size_t c = 0;
    for (const auto& o : members) c += o.points.size();
    return c;
  }
};

struct PackOptions {
  double endpoint_tolerance = 1e-9;
  /// Endpoint mismatches between endpoint_tolerance and this are inconclusive.
  double inconclusive_tolerance = 1e-6;
};

enum class PeriodicTest { periodic, not_periodic, inconclusive };

/// Whether [lo, hi] is a periodic interval of period n: g^k monotone (no
/// turning point inside g^k(I)) for k < n and g^n(I) = I.
inline PeriodicTest periodic_interval_test(const MapModel& g, const OrientedInterval& I, int n,
                                           const PackOptions& opt = {}) {
  if (I.is_degenerate()) {
    const double y = detail::raw_iterate(g.root(), I.lo(), n);
    return std::abs(y - I.lo()) <= opt.endpoint_tolerance * (1.0 + std::abs(y))
               ? PeriodicTest::periodic
               : PeriodicTest::not_periodic;
  }
  OrientedInterval cur = I;
  bool near_turning = false;
  for (int k = 0; k < n; ++k) {
    if (!g.domain().contains(cur.lo()) || !g.domain().contains(cur.hi()))
      return PeriodicTest::not_periodic;
    for (const auto& c : critical_points(g, cur)) {
      if (!c.is_turning()) continue;
      const double edge = 1e-9 * (1.0 + cur.length());
      if (c.location > cur.lo() + edge && c.location < cur.hi() - edge) return PeriodicTest::not_periodic;
      near_turning = true;
    }
    cur = OrientedInterval::hull(g.value(cur.lo()), g.value(cur.hi()));
  }
  const double scale = 1.0 + std::abs(I.lo()) + std::abs(I.hi());
  const double err = std::max(std::abs(cur.lo() - I.lo()), std::abs(cur.hi() - I.hi())) / scale;
  if (err <= opt.endpoint_tolerance) return near_turning ? PeriodicTest::inconclusive : PeriodicTest::periodic;
  if (err <= opt.inconclusive_tolerance) return PeriodicTest::inconclusive;
  return PeriodicTest::not_periodic;
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Groups orbits into packs: adjacent periodic points whose span is a
/// periodic interval (for one of the candidate periods n_p, n_q, their lcm,
/// the orientation-preserving periods, or half of an even period) share a
/// pack, transitively.
inline std::vector<PeriodicPack> group_into_packs(const std::vector<PeriodicOrbit>& orbits,
                                                  const MapModel& g, const PackOptions& opt = {}) {
  struct Pt {
    double x;
    int orbit;
  };
  std::vector<Pt> pts;
  for (int i = 0; i < static_cast<int>(orbits.size()); ++i)
    for (double x : orbits[i].points) pts.push_back({x, i});
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });

  const int np = static_cast<int>(pts.size());
  detail::UnionFind points_uf(np), orbits_uf(static_cast<int>(orbits.size()));
  std::vector<int> link_period(static_cast<std::size_t>(std::max(np - 1, 0)), 0);
  std::vector<bool> inconclusive(orbits.size(), false);
  for (int i = 0; i + 1 < np; ++i) {
    const PeriodicOrbit& a = orbits[pts[i].orbit];
    const PeriodicOrbit& b = orbits[pts[i + 1].orbit];
    std::vector<int> cands{a.period,
                           b.period,
                           std::lcm(a.period, b.period),
                           a.orientation_preserving_period(),
                           b.orientation_preserving_period(),
                           std::lcm(a.orientation_preserving_period(), b.orientation_preserving_period())};
    if (a.period % 2 == 0) cands.push_back(a.period / 2);
    if (b.period % 2 == 0) cands.push_back(b.period / 2);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    const OrientedInterval I(pts[i].x, pts[i + 1].x);
    for (int n : cands) {
      const PeriodicTest t = periodic_interval_test(g, I, n, opt);
      if (t == PeriodicTest::not_periodic) continue;
      if (t == PeriodicTest::inconclusive) {
        inconclusive[pts[i].orbit] = inconclusive[pts[i + 1].orbit] = true;
      }
      points_uf.unite(i, i + 1);
      orbits_uf.unite(pts[i].orbit, pts[i + 1].orbit);
      link_period[i] = n;
      break;
    }
  }

  std::vector<PeriodicPack> packs;
  std::vector<int> pack_of_root(orbits.size(), -1);
  for (int i = 0; i < static_cast<int>(orbits.size()); ++i) {
    const int r = orbits_uf.find(i);
    if (pack_of_root[r] < 0) {
      pack_of_root[r] = static_cast<int>(packs.size());
      packs.emplace_back();
    }
    PeriodicPack& pk = packs[pack_of_root[r]];
    pk.members.push_back(orbits[i]);
    if (inconclusive[i]) {
      pk.flagged = true;
      pk.flags.push_back("periodic-interval test inconclusive near a tangency or turning point");
    }
  }
  // Carrier: the point-level group containing the leftmost point of the pack.
  std::vector<bool> carrier_set(packs.size(), false);
  for (int i = 0; i < np; ++i) {
    PeriodicPack& pk = packs[pack_of_root[orbits_uf.find(pts[i].orbit)]];
    const std::size_t idx = static_cast<std::size_t>(&pk - packs.data());
    if (carrier_set[idx]) continue;
    carrier_set[idx] = true;
    const int root = points_uf.find(i);
    int j = i, n = orbits[pts[i].orbit].period;
    while (j + 1 < np && points_uf.find(j + 1) == root) {
      n = std::lcm(n, link_period[j]);
      ++j;
    }
    pk.carrier.I = OrientedInterval(pts[i].x, pts[j].x);
    pk.carrier.n = i == j ? orbits[pts[i].orbit].period : n;
    if (i != j) {
      // Prefer the smallest period that already works for the whole carrier.
      for (int d = 1; d <= pk.carrier.n; ++d) {
        if (pk.carrier.n % d == 0 &&
            periodic_interval_test(g, pk.carrier.I, d, opt) != PeriodicTest::not_periodic) {
          pk.carrier.n = d;
          break;
        }
      }
      if (periodic_interval_test(g, pk.carrier.I, pk.carrier.n, opt) == PeriodicTest::not_periodic) {
        pk.flagged = true;
        pk.flags.push_back("merged carrier failed the periodic-interval test");
      }
    }
  }
  for (auto& pk : packs) {
    pk.orientation_preserving_period = pk.members.front().orientation_preserving_period();
    for (const auto& o : pk.members) {
      if (o.orientation_preserving_period() != pk.orientation_preserving_period) {
        pk.flagged = true;
        pk.flags.push_back("members disagree on the orientation-preserving period");
        break;
      }
    }
    for (const auto& o : pk.members) {
      if (o.tangential) {
        pk.flagged = true;
        pk.flags.push_back("contains a tangential orbit");
        break;
      }
    }
  }
  std::sort(packs.begin(), packs.end(),
            [](const auto& a, const auto& b) { return a.carrier.I.lo() < b.carrier.I.lo(); });
  return packs;
}

struct BasinResult {
  bool member = false;
  bool escaped = false;
  double final_distance = std::numeric_limits<double>::quiet_NaN();
};

struct BasinOptions {
  int max_iters = 10000;
  double tol = 1e-8;
};

/// Forward iteration test: x0 belongs to the basin if its iterates stay
/// within tol of the union of g^k(carrier) over the final 10% of iterations.
inline BasinResult basin_membership(const MapModel& g, double x0, const PeriodicPack& pack,
                                    const BasinOptions& opt = {}) {
  if (!pack.has_attracting()) throw PreconditionError("pack has no attracting member");
  std::vector<OrientedInterval> cover;
  OrientedInterval cur = pack.carrier.I;
  const int n = std::max(pack.carrier.n, 1) * 2;
  for (int k = 0; k < n; ++k) {
    cover.push_back(cur);
    cur = OrientedInterval::hull(g.value(cur.lo()), g.value(cur.hi()));
  }
  for (const auto& o : pack.members)
    for (double p : o.points) cover.push_back(OrientedInterval::point(p));

  BasinResult r;
  double x = x0;
  const int tail_start = opt.max_iters - opt.max_iters / 10;
  bool all_close = true;
  for (int i = 0; i < opt.max_iters; ++i) {
    if (!g.domain().contains(x) || !std::isfinite(x) || std::abs(x) > 1e12) {
      r.escaped = true;
      return r;
    }
    if (i >= tail_start) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& I : cover) d = std::min(d, I.distance(x));
      r.final_distance = d;
      if (d > opt.tol) all_close = false;
    }
    x = detail::node_value(g.root(), x);
  }
  r.member = all_close;
  return r;
}

struct CensusOptions {
  int n_max = 8;
  double rho = 0.05;
  OrbitSearchOptions search;
  BasinOptions basin;
  PackOptions packs;
};

struct CensusRow {
  double parameter = 0.0;
  int orbit_count = 0;
  int pack_count = 0;
  int exceptional_count = 0;
  /// Smallest |multiplier| among orbits outside exceptional packs (inf if none).
  double min_nonexceptional_multiplier = std::numeric_limits<double>::infinity();
  /// For each critical point (and critical-interval endpoint), the index of
  /// the attracting pack whose basin holds it, or -1.
  std::vector<std::pair<double, int>> critical_basins;
  std::vector<std::pair<double, int>> interval_endpoint_basins;
  int d_E = 0;
  bool degenerate = false;
  std::vector<PeriodicPack> packs;
  std::vector<std::string> flags;
  std::string error;
};

/// Orbits up to n_max, packs, exceptional count and critical basin
/// associations for one map.
inline CensusRow census_one(const MapModel& g, const OrientedInterval& region,
                            const CensusOptions& opt) {
  CensusRow row;
  const OrbitSearchResult found = find_periodic_orbits_upto(g, opt.n_max, region, opt.search);
  row.degenerate = found.degenerate;
  row.flags = found.flags;
  const auto orbits = found.all();
  row.orbit_count = static_cast<int>(orbits.size());
  row.packs = group_into_packs(orbits, g, opt.packs);
  row.pack_count = static_cast<int>(row.packs.size());
  for (const auto& pk : row.packs) {
    if (pk.is_exceptional(opt.rho)) {
      ++row.exceptional_count;
    } else {
      for (const auto& o : pk.members)
        row.min_nonexceptional_multiplier =
            std::min(row.min_nonexceptional_multiplier, std::abs(o.multiplier));
    }
    if (pk.flagged)
      for (const auto& f : pk.flags) row.flags.push_back(f);
  }
  auto basin_of = [&](double x) {
    for (int i = 0; i < row.pack_count; ++i) {
      if (!row.packs[i].has_attracting()) continue;
      if (basin_membership(g, x, row.packs[i], opt.basin).member) return i;
    }
    return -1;
  };
  for (const auto& c : critical_points(g, region)) row.critical_basins.emplace_back(c.location, basin_of(c.location));
  const auto poly = g.as_polynomial();
  if (poly && poly->degree() >= 2) {
    const auto S = compute_critical_intervals(g);
    row.d_E = S.d_E();
    for (const auto& ci : S.intervals) {
      for (double e : {ci.E().lo(), ci.E().hi()}) {
        if (!g.domain().contains(e)) continue;
        row.interval_endpoint_basins.emplace_back(e, basin_of(e));
      }
    }
  }
  return row;
}

/// Census across a parameter grid; failures are recorded per row.
template <typename Family>
std::vector<CensusRow> census(const Family& family, const std::vector<double>& params,
                              const OrientedInterval& region, const CensusOptions& opt) {
  std::vector<CensusRow> rows;
  for (double a : params) {
    CensusRow row;
    try {
      row = census_one(family(a), region, opt);
    } catch (const Error& e) {
      row.error = e.what();
    }
    row.parameter = a;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct FirstEntryReport {
  int samples = 0;
  int entered = 0;
  int violations = 0;
  int skipped = 0;
  double max_schwarzian = -std::numeric_limits<double>::infinity();
  /// (x, n, S(g^{n+1})(x)) for every violation.
  std::vector<std::tuple<double, int, double>> violation_points;
};

/// For each sample x, n is the first iterate with g^n(x) in J (n <= n_max);
/// S(g^{n+1})(x) is accumulated by the composition rule
/// sum_k Sg(x_k) (Dg^k(x))^2 and counted as a violation when not negative.
inline FirstEntryReport first_entry_schwarzian_check(const MapModel& g, const OrientedInterval& J,
                                                     const std::vector<double>& samples, int n_max) {
  FirstEntryReport rep;
  for (double x : samples) {
    ++rep.samples;
    double y = x;
    int n = -1;
    for (int k = 0; k <= n_max; ++k) {
      if (J.contains(y)) {
        n = k;
        break;
      }
      if (!g.domain().contains(y)) break;
      y = g.value(y);
      if (!std::isfinite(y)) break;
    }
    if (n < 0) continue;
    ++rep.entered;
    double S = 0.0, D = 1.0;
    y = x;
    bool skip = false;
    for (int k = 0; k <= n; ++k) {
      const Jet j = g.jet(y);
      if (j.d1 == 0.0) {
        skip = true;
        break;
      }
      S += schwarzian_from_jet(j) * D * D;
      D *= j.d1;
      y = j.f;
    }
    if (skip || !std::isfinite(S)) {
      ++rep.skipped;
      continue;
    }
    rep.max_schwarzian = std::max(rep.max_schwarzian, S);
    if (!(S < 0.0)) {
      ++rep.violations;
      rep.violation_points.emplace_back(x, n, S);
    }
  }
  return rep;
}

struct QuadraticBoundReport {
  double A = 0.0;
  double B = 0.0;
  int samples = 0;
  int violations = 0;
  /// max over samples of Sg(x) / (B^2/(A^2 |x-c|^2)); below -1 means the bound holds.
  double worst_ratio = -std::numeric_limits<double>::infinity();
};

/// Sg(x) < -B^2 / (A^2 |x - c|^2) on T minus c, with A = sup_T |D^2 g|
/// (sampled) and B = |D^2 g(c)|, for a quadratic critical point c.
inline QuadraticBoundReport quadratic_schwarzian_bound_check(const MapModel& g,
                                                             const CriticalPoint& c,
                                                             const OrientedInterval& T,
                                                             int samples = 10000) {
  if (c.multiplicity != 1) throw PreconditionError("critical point is not quadratic");
  if (!T.interior_contains(c.location)) throw PreconditionError("T must contain c in its interior");
  const auto cps = critical_points(g, T);
  if (cps.size() != 1 || std::abs(cps.front().location - c.location) > 1e-8 * (1.0 + std::abs(c.location)))
    throw PreconditionError("T must contain exactly the critical point c");
  QuadraticBoundReport rep;
  rep.B = std::abs(g.jet(c.location).d2);
  for (int i = 0; i <= samples; ++i) {
    const double x = T.lo() + T.length() * i / samples;
    rep.A = std::max(rep.A, std::abs(g.jet(x).d2));
  }
  for (int i = 0; i <= samples; ++i) {
    const double x = T.lo() + T.length() * i / samples;
    const double dx = x - c.location;
    if (std::abs(dx) < 1e-9 * T.length()) continue;
    ++rep.samples;
    const double bound = rep.B * rep.B / (rep.A * rep.A * dx * dx);
    const double S = schwarzian_at(g, x);
    rep.worst_ratio = std::max(rep.worst_ratio, S / bound);
    if (!(S < -bound)) ++rep.violations;
  }
  return rep;
}

/// Components of g^-1(I), lap by lap between the critical points of g in the
/// (bounded) region.
inline std::vector<OrientedInterval> preimage_components(const MapModel& g, const OrientedInterval& I,
                                                         const OrientedInterval& region) {
  std::vector<double> cuts{region.lo()};
  for (const auto& c : critical_points(g, region))
    if (region.interior_contains(c.location)) cuts.push_back(c.location);
  cuts.push_back(region.hi());
  std::vector<OrientedInterval> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double fa = g.value(a), fb = g.value(b);
    const OrientedInterval img = OrientedInterval::hull(fa, fb);
    const auto common = img.intersection(I);
    if (!common) continue;
    const bool inc = fb >= fa;
    auto solve = [&](double y) {
      if (y <= img.lo()) return inc ? a : b;
      if (y >= img.hi()) return inc ? b : a;
      return detail::monotone_solve(g, a, b, y, 80);
    };
    pieces.push_back(OrientedInterval::hull(solve(common->lo()), solve(common->hi())));
  }
  std::vector<OrientedInterval> out;
  for (const auto& p : pieces) {
    if (!out.empty() && out.back().hi() >= p.lo()) out.back() = out.back().hull(p);
    else out.push_back(p);
  }
  return out;
}

struct ContractionRow {
  double parameter = 0.0;
  double delta_hat = 0.0;
  /// Largest preimage component seen at the accepted length.
  double max_component = 0.0;
  int intervals_tested = 0;
  bool neutral_flag = false;
};

struct ContractionOptions {
  double epsilon = 0.1;
  int n_max = 8;
  int centers = 32;
  std::vector<double> lengths{0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 5e-4, 2e-4, 1e-4};
  /// Skip J whose centre lies in the basin of a detected attracting orbit.
  bool exclude_basins = true;
  double rho = 0.0;
};

/// Largest tested |J| for which every component of g^-n(J), n <= n_max, is
/// shorter than epsilon.
inline ContractionRow uniform_contraction_scan(const MapModel& g, const OrientedInterval& region,
                                               const ContractionOptions& opt) {
  ContractionRow row;
  CensusOptions copt;
  copt.n_max = std::min(opt.n_max, 6);
  copt.search.resolution = 1.0 / 65536.0;
  const auto orbits = find_periodic_orbits_upto(g, copt.n_max, region, copt.search).all();
  std::vector<PeriodicPack> attracting;
  for (const auto& o : orbits) {
    if (classify_orbit(o, opt.rho) == OrbitClass::neutral_band) row.neutral_flag = true;
    if (classify_orbit(o, opt.rho) == OrbitClass::attracting) {
      PeriodicPack pk;
      pk.members = {o};
      pk.carrier = {OrientedInterval::point(o.points.front()), o.period};
      attracting.push_back(pk);
    }
  }
  BasinOptions bopt;
  bopt.max_iters = 2000;
  bopt.tol = 1e-6;
  auto in_basin = [&](double x) {
    for (const auto& pk : attracting)
      if (basin_membership(g, x, pk, bopt).member) return true;
    return false;
  };
  std::vector<double> sorted = opt.lengths;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (double len : sorted) {
    double worst = 0.0;
    int tested = 0;
    for (int i = 0; i < opt.centers; ++i) {
      const double c = region.lo() + region.length() * (i + 0.5) / opt.centers;
      OrientedInterval J = OrientedInterval::centered(c, len / 2.0);
      const auto clipped = J.intersection(region);
      if (!clipped) continue;
      J = *clipped;
      if (opt.exclude_basins && in_basin(c)) continue;
      ++tested;
      std::vector<OrientedInterval> level{J};
      for (int n = 1; n <= opt.n_max && !level.empty(); ++n) {
        std::vector<OrientedInterval> next;
        for (const auto& I : level) {
          for (const auto& P : preimage_components(g, I, region)) {
            worst = std::max(worst, P.length());
            next.push_back(P);
          }
        }
        level = std::move(next);
        if (worst >= opt.epsilon) break;
      }
      if (worst >= opt.epsilon) break;
    }
    row.intervals_tested += tested;
    if (tested > 0 && worst < opt.epsilon) {
      row.delta_hat = len;
      row.max_component = worst;
      break;
    }
  }
  return row;
}

struct PackGroupingReport {
  OrientedInterval U_minus_n;
  /// Periodic points p' (with op-period <= n) found inside U_{-n}^r.
  std::vector<double> others;
  std::vector<bool> same_pack;
  bool applicable = false;
};

/// When U_0^r ⊂ g^n(U_0^r), pulls U_0^r back n steps diffeomorphically along
/// the orbit of p and checks that every periodic point p' inside with
/// orientation-preserving period at most n shares a pack with p.
inline PackGroupingReport pack_grouping_check(const MapModel& g, const USequence& seq,
                                      const std::vector<PeriodicPack>& packs) {
  PackGroupingReport rep;
  const OrientedInterval U0 = seq.right.intervals.front();
  const double p = seq.base_point_orbit.front();
  if (U0.is_degenerate()) return rep;
  const MapModel gn = MapModel::power(g, seq.n);
  OrientedInterval img;
  try {
    img = image_interval(gn, U0);
  } catch (const Error&) {
    return rep;
  }
  if (!img.contains(U0)) return rep;
  rep.applicable = true;
  PullbackOptions popt;
  popt.diffeomorphic = true;
  popt.anchor_tolerance = 1e-7;
  std::vector<double> anchor = seq.base_point_orbit;
  anchor.back() = std::clamp(anchor.back(), U0.lo(), U0.hi());
  const Chain c = pull_back_chain(g, U0, anchor, popt);
  rep.U_minus_n = c.head();
  auto pack_of = [&](double x) {
    for (std::size_t i = 0; i < packs.size(); ++i)
      for (const auto& o : packs[i].members)
        if (o.contains(x, 1e-8)) return static_cast<int>(i);
    return -1;
  };
  const int home = pack_of(p);
  for (const auto& pk : packs) {
    for (const auto& o : pk.members) {
      if (o.orientation_preserving_period() > seq.n) continue;
      for (double x : o.points) {
        if (!rep.U_minus_n.contains(x) || o.contains(p, 1e-8)) continue;
        rep.others.push_back(x);
        rep.same_pack.push_back(home >= 0 && pack_of(x) == home);
      }
    }
  }
  return rep;
}

}  // namespace unidym

#endif  // UNIDYM_ORBITS_HPP
