#ifndef UNIDYM_CUTTING_HPP
#define UNIDYM_CUTTING_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "unidym/chains.hpp"
#include "unidym/critical_intervals.hpp"
#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/map_analysis.hpp"
#include "unidym/map_model.hpp"

namespace unidym {

/// Maximal interval around p whose two sides each hold at most one other orbit
/// point, clipped to the extended phase space. Orbit points are taken as a set.
inline OrientedInterval t_p_interval(std::vector<double> orbit, double p, const Domain& extended) {
  if (!extended.is_bounded() || extended.is_circle())
    throw PreconditionError("T_p needs a bounded extended interval");
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  auto it = std::min_element(orbit.begin(), orbit.end(), [p](double a, double b) {
    return std::abs(a - p) < std::abs(b - p);
  });
  if (it == orbit.end() || std::abs(*it - p) > 1e-9 * (1.0 + std::abs(p)))
    throw PreconditionError("p is not a point of the orbit");
  const long i = it - orbit.begin();
  const long n = static_cast<long>(orbit.size());
  const OrientedInterval ext = extended.bounds();
  const double lo = i - 2 >= 0 ? orbit[i - 2] : ext.lo();
  const double hi = i + 2 < n ? orbit[i + 2] : ext.hi();
  return {lo, hi};
}

/// The orbit point whose T_p is shortest (first one on ties).
inline double minimal_t_p_point(const std::vector<double>& orbit, const Domain& extended) {
  if (orbit.empty()) throw PreconditionError("empty orbit");
  double best = orbit.front(), len = std::numeric_limits<double>::infinity();
  for (double p : orbit) {
    const double l = t_p_interval(orbit, p, extended).length();
    if (l < len) {
      len = l;
      best = p;
    }
  }
  return best;
}

/// U_n = 3 T_p clipped to the extended interval.
inline OrientedInterval u_n_interval(const std::vector<double>& orbit, double p,
                                     const Domain& extended) {
  const OrientedInterval T = t_p_interval(orbit, p, extended);
  const OrientedInterval big = T.scaled(3.0);
  return *big.intersection(extended.bounds());
}

enum class CuttingKind { none, critical, boundary, internal, domain };

inline const char* to_string(CuttingKind k) {
  switch (k) {
    case CuttingKind::none: return "none";
    case CuttingKind::critical: return "critical";
    case CuttingKind::boundary: return "boundary";
    case CuttingKind::internal: return "internal";
    case CuttingKind::domain: return "domain";
  }
  return "?";
}

struct CuttingTime {
  int k = 0;
  /// Classification after precedence critical > boundary > internal > domain.
  CuttingKind kind = CuttingKind::none;
  /// Every constraint that was binding at this step.
  std::vector<CuttingKind> simultaneous;
};

/// One side (left or right) of the U_k sequence.
struct USide {
  int side = +1;
  /// U_0, ..., U_n
  std::vector<OrientedInterval> intervals;
  /// s_k: +1 if U_k lies to the right of g^k(p), -1 if to the left.
  std::vector<int> directions;
  std::vector<CuttingTime> cutting_times;
  int multiplicity = 0;

  int count(CuttingKind kind) const {
    return static_cast<int>(std::count_if(cutting_times.begin(), cutting_times.end(),
                                          [kind](const auto& c) { return c.kind == kind; }));
  }
  std::optional<CuttingTime> first_cutting_time() const {
    if (cutting_times.empty()) return std::nullopt;
    return *std::min_element(cutting_times.begin(), cutting_times.end(),
                             [](const auto& a, const auto& b) { return a.k < b.k; });
  }
};

struct USequence {
  std::vector<double> base_point_orbit;
  int n = 0;
  double kappa = 0.0;
  OrientedInterval T_p, U_n;
  USide right, left;
  /// Post-construction re-check of the defining conditions.
  std::vector<std::string> invariant_violations;
  /// Steps where an enlargement of U_k still satisfied every condition.
  std::vector<std::string> maximality_failures;

  /// U_0 = U_0^l ∪ U_0^r
  OrientedInterval U_0() const { return left.intervals.front().hull(right.intervals.front()); }
};

struct USequenceOptions {
  /// Extended phase space used for T_p; defaults to 3N of the map's domain.
  std::optional<Domain> extended;
  /// Override for U_n (otherwise 3 T_p clipped to the extended space).
  std::optional<OrientedInterval> U_n;
  double periodicity_tolerance = 1e-8;
  double check_slack = 1e-10;
  bool check_maximality = true;
};

namespace detail {

struct StepLimit {
  double length;
  CuttingKind kind;
};

struct StepResult {
  OrientedInterval U;
  int direction = +1;
  CuttingTime cut;
  bool is_cut = false;
};

inline double image_span(const MapModel& g, double x, int d, double L) {
  return std::abs(g.value(x + d * L) - g.value(x));
}

// Largest admissible extension length from x in direction d, excluding the
// image condition, with the constraint responsible for it.
inline std::vector<StepLimit> step_limits(const MapModel& g, double x, int d, double kappa,
                                          const CriticalIntervalSet& S) {
  std::vector<StepLimit> lims;
  lims.push_back({kappa / 2.0, CuttingKind::internal});
  for (const auto& ci : S.intervals) {
    const OrientedInterval E = ci.E();
    if (ci.doubled().contains(x)) {
      lims.push_back({kappa * ci.length() / 2.0, CuttingKind::internal});
    } else if (d > 0 && E.lo() > x) {
      lims.push_back({E.lo() - x, CuttingKind::boundary});
    } else if (d < 0 && E.hi() < x) {
      lims.push_back({x - E.hi(), CuttingKind::boundary});
    }
  }
  const Domain& dom = g.domain();
  if (dom.is_bounded() && !dom.is_circle()) {
    const OrientedInterval b = dom.bounds();
    lims.push_back({d > 0 ? b.hi() - x : x - b.lo(), CuttingKind::domain});
  }
  // Critical points within reach.
  double reach = kappa / 2.0;
  double lo = x - (d < 0 ? reach : 0.0), hi = x + (d > 0 ? reach : 0.0);
  if (dom.is_bounded() && !dom.is_circle()) {
    lo = std::max(lo, dom.bounds().lo());
    hi = std::min(hi, dom.bounds().hi());
  }
  if (hi > lo) {
    for (const auto& c : critical_points(g, {lo, hi})) {
      const double dist = (c.location - x) * d;
      if (dist > 0.0) lims.push_back({dist, CuttingKind::critical});
    }
  }
  return lims;
}

inline int precedence(CuttingKind k) {
  switch (k) {
    case CuttingKind::critical: return 0;
    case CuttingKind::boundary: return 1;
    case CuttingKind::internal: return 2;
    case CuttingKind::domain: return 3;
    default: return 4;
  }
}

inline StepResult u_step(const MapModel& g, double x, const OrientedInterval& next, int next_dir,
                         double kappa, const CriticalIntervalSet& S) {
  StepResult r;
  const double len_next = next.length();
  // Side of x that g maps towards next_dir.
  const Jet j = g.jet(x);
  int d;
  if (j.d1 != 0.0) {
    d = next_dir * (j.d1 > 0 ? 1 : -1);
  } else {
    const double h = 1e-6 * kappa;
    const auto toward = [&](int side) {
      const double dy = g.value(x + side * h) - g.value(x);
      return dy != 0.0 && (dy > 0 ? 1 : -1) == next_dir;
    };
    if (toward(+1)) d = +1;
    else if (toward(-1)) d = -1;
    else {
      r.U = OrientedInterval::point(x);
      r.direction = next_dir;
      r.is_cut = true;
      r.cut.kind = CuttingKind::critical;
      r.cut.simultaneous = {CuttingKind::critical};
      return r;
    }
  }
  r.direction = d;
  const auto lims = step_limits(g, x, d, kappa, S);
  double Lmax = std::numeric_limits<double>::infinity();
  for (const auto& l : lims) Lmax = std::min(Lmax, l.length);
  Lmax = std::max(Lmax, 0.0);

  double L;
  if (image_span(g, x, d, Lmax) <= len_next) {
    L = Lmax;
    r.is_cut = true;
    const double tie = 1e-12 * (1.0 + Lmax);
    for (const auto& l : lims)
      if (l.length <= Lmax + tie) r.cut.simultaneous.push_back(l.kind);
    std::sort(r.cut.simultaneous.begin(), r.cut.simultaneous.end(),
              [](auto a, auto b) { return precedence(a) < precedence(b); });
    r.cut.simultaneous.erase(std::unique(r.cut.simultaneous.begin(), r.cut.simultaneous.end()),
                             r.cut.simultaneous.end());
    r.cut.kind = r.cut.simultaneous.empty() ? CuttingKind::none : r.cut.simultaneous.front();
  } else {
    double a = 0.0, b = Lmax;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (a + b);
      if (m == a || m == b) break;
      if (image_span(g, x, d, m) <= len_next) a = m;
      else b = m;
    }
    L = a;
  }
  r.U = OrientedInterval::hull(x, x + d * L);
  return r;
}

// Conditions on a candidate U with base point x; empty when all hold.
inline std::vector<std::string> u_conditions(const MapModel& g, const OrientedInterval& U, double x,
                                             const OrientedInterval& next, double kappa,
                                             const CriticalIntervalSet& S, double slack) {
  std::vector<std::string> v;
  if (x != U.lo() && x != U.hi()) v.push_back("base point is not a boundary point");
  const Domain& dom = g.domain();
  if (!dom.contains(U.lo()) || !dom.contains(U.hi())) {
    v.push_back("leaves the domain");
    return v;
  }
  if (!U.is_degenerate()) {
    for (const auto& c : critical_points(g, U))
      if (U.interior_contains(c.location)) v.push_back("critical point in the interior");
  }
  const double s = slack * (1.0 + next.length() + std::abs(next.lo()) + std::abs(next.hi()));
  const double ya = g.value(U.lo()), yb = g.value(U.hi());
  if (std::min(ya, yb) < next.lo() - s || std::max(ya, yb) > next.hi() + s)
    v.push_back("image not inside U_{k+1}");
  if (U.length() > kappa / 2.0 + slack) v.push_back("|U| > kappa/2");
  for (const auto& ci : S.intervals) {
    if (ci.doubled().contains(x)) {
      if (U.length() > kappa * ci.length() / 2.0 + slack) v.push_back("|U| > kappa|E_j|/2");
    } else if (U.overlap(ci.E()) > slack) {
      v.push_back("meets E_j although the base point is outside 2E_j");
    }
  }
  return v;
}

inline USide build_side(const MapModel& g, const std::vector<double>& orbit,
                        const OrientedInterval& Un, int side, double kappa,
                        const CriticalIntervalSet& S) {
  const int n = static_cast<int>(orbit.size()) - 1;
  USide out;
  out.side = side;
  out.intervals.resize(static_cast<std::size_t>(n) + 1);
  out.directions.resize(static_cast<std::size_t>(n) + 1);
  const double xn = orbit.back();
  out.intervals[n] = side > 0 ? OrientedInterval(xn, std::max(xn, Un.hi()))
                              : OrientedInterval(std::min(xn, Un.lo()), xn);
  out.directions[n] = side;
  for (int k = n - 1; k >= 0; --k) {
    StepResult r = u_step(g, orbit[k], out.intervals[k + 1], out.directions[k + 1], kappa, S);
    out.intervals[k] = r.U;
    out.directions[k] = r.direction;
    if (r.is_cut) {
      r.cut.k = k;
      out.cutting_times.push_back(r.cut);
    }
  }
  std::sort(out.cutting_times.begin(), out.cutting_times.end(),
            [](const auto& a, const auto& b) { return a.k < b.k; });
  out.multiplicity = intersection_multiplicity(out.intervals);
  return out;
}

inline void check_side(const MapModel& g, const std::vector<double>& orbit, const USide& side,
                       double kappa, const CriticalIntervalSet& S, const USequenceOptions& opt,
                       USequence& seq) {
  const int n = static_cast<int>(orbit.size()) - 1;
  const char* name = side.side > 0 ? "r" : "l";
  for (int k = 0; k < n; ++k) {
    const OrientedInterval& U = side.intervals[k];
    const OrientedInterval& next = side.intervals[k + 1];
    for (const auto& msg : u_conditions(g, U, orbit[k], next, kappa, S, opt.check_slack))
      seq.invariant_violations.push_back("U_" + std::to_string(k) + "^" + name + ": " + msg);
    if (!opt.check_maximality) continue;
    if (U.is_degenerate() && side.directions[k] == 0) continue;
    const double eps = std::max(1e-9 * U.length(), 1e-13 * (1.0 + std::abs(orbit[k])));
    const int d = side.directions[k];
    const OrientedInterval bigger = d > 0 ? OrientedInterval(U.lo(), U.hi() + eps)
                                          : OrientedInterval(U.lo() - eps, U.hi());
    bool violated = false;
    try {
      violated = !u_conditions(g, bigger, orbit[k], next, kappa, S, 0.0).empty();
    } catch (const Error&) {
      violated = true;
    }
    // A base point at a critical point cannot be enlarged diffeomorphically.
    if (!violated && g.jet(orbit[k]).d1 == 0.0) violated = true;
    if (!violated) seq.maximality_failures.push_back("U_" + std::to_string(k) + "^" + name);
  }
}

}  // namespace detail

/// The U_k^r and U_k^l sequences for a periodic point p of orientation
/// preserving period n, built backward from U_n = 3 T_p. Each U_k is maximal
/// under: g^k(p) a boundary point; g(U_k) ⊆ U_{k+1}; g diffeomorphic on U_k;
/// |U_k| <= kappa/2; |U_k| <= kappa|E_j|/2 when g^k(p) ∈ 2E_j; U_k disjoint
/// from E_j otherwise. The domain of g is an additional hard bound.
inline USequence build_u_sequence(const MapModel& g, double p, int n, double kappa,
                                  const CriticalIntervalSet& S, const USequenceOptions& opt = {}) {
  if (n < 1) throw ParameterError("period must be positive");
  if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
  USequence seq;
  seq.n = n;
  seq.kappa = kappa;
  seq.base_point_orbit = forward_orbit(g, p, n);
  const double back = seq.base_point_orbit.back();
  if (!(std::abs(back - p) <= opt.periodicity_tolerance * (1.0 + std::abs(p))))
    throw PreconditionError("p is not periodic with period n");

  if (opt.U_n) {
    seq.U_n = *opt.U_n;
    seq.T_p = seq.U_n;
  } else {
    const Domain ext = opt.extended ? *opt.extended : g.domain().extended();
    std::vector<double> pts(seq.base_point_orbit.begin(), seq.base_point_orbit.end() - 1);
    seq.T_p = t_p_interval(pts, p, ext);
    seq.U_n = u_n_interval(pts, p, ext);
  }
  seq.right = detail::build_side(g, seq.base_point_orbit, seq.U_n, +1, kappa, S);
  seq.left = detail::build_side(g, seq.base_point_orbit, seq.U_n, -1, kappa, S);
  detail::check_side(g, seq.base_point_orbit, seq.right, kappa, S, opt, seq);
  detail::check_side(g, seq.base_point_orbit, seq.left, kappa, S, opt, seq);
  return seq;
}

struct Multiplicity44Report {
  double p = 0.0;
  int n = 0;
  OrientedInterval T_p, U_n;
  int orbit_points_in_U_n = 0;
  int multiplicity = 0;
  int multiplicity_open = 0;
  bool within_bound = false;
};

/// Pulls U_n = 3 T_p back along the orbit (p chosen with shortest T_p) as a
/// full chain and measures its intersection multiplicity against 44.
inline Multiplicity44Report check_multiplicity_44(const MapModel& g,
                                                  const std::vector<double>& orbit,
                                                  std::optional<Domain> extended = std::nullopt) {
  if (orbit.empty()) throw PreconditionError("empty orbit");
  const Domain ext = extended ? *extended : g.domain().extended();
  Multiplicity44Report rep;
  rep.n = static_cast<int>(orbit.size());
  rep.p = minimal_t_p_point(orbit, ext);
  rep.T_p = t_p_interval(orbit, rep.p, ext);
  rep.U_n = u_n_interval(orbit, rep.p, ext);
  for (double x : orbit)
    if (rep.U_n.interior_contains(x)) ++rep.orbit_points_in_U_n;
  std::vector<double> anchor = forward_orbit(g, rep.p, rep.n);
  anchor.back() = std::clamp(anchor.back(), rep.U_n.lo(), rep.U_n.hi());
  PullbackOptions popt;
  popt.anchor_tolerance = 1e-7;
  const Chain c = pull_back_chain(g, rep.U_n, anchor, popt);
  rep.multiplicity = c.multiplicity;
  rep.multiplicity_open = intersection_multiplicity(c.intervals, false);
  rep.within_bound = rep.multiplicity <= 44;
  return rep;
}

}  // namespace unidym

#endif  // UNIDYM_CUTTING_HPP
