#ifndef UNIDYM_CHAINS_HPP
#define UNIDYM_CHAINS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "unidym/crossratio.hpp"
#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/map_analysis.hpp"
#include "unidym/map_model.hpp"

namespace unidym {

/// Maximum number of intervals sharing a common point. With closed = false
/// only interiors count, so touching endpoints do not overlap and degenerate
/// intervals are ignored.
inline int intersection_multiplicity(const std::vector<OrientedInterval>& intervals,
                                     bool closed = true) {
  std::vector<std::pair<double, int>> events;
  events.reserve(intervals.size() * 2);
  for (const auto& I : intervals) {
    if (!closed && I.is_degenerate()) continue;
    events.emplace_back(I.lo(), +1);
    events.emplace_back(I.hi(), -1);
  }
  // At equal coordinates closed intervals open before they close; open ones
  // close first.
  std::sort(events.begin(), events.end(), [closed](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return closed ? a.second > b.second : a.second < b.second;
  });
  int cur = 0, best = 0;
  for (const auto& e : events) {
    cur += e.second;
    best = std::max(best, cur);
  }
  return best;
}

/// T_0, ..., T_m with T_k a connected component of f^-1(T_{k+1}).
struct Chain {
  std::vector<OrientedInterval> intervals;
  std::vector<double> anchor_orbit;
  int multiplicity = 0;
  /// Number of T_k containing a critical point of f.
  int order = 0;

  int length() const noexcept { return static_cast<int>(intervals.size()) - 1; }
  const OrientedInterval& head() const { return intervals.front(); }
  const OrientedInterval& tail() const { return intervals.back(); }
};

struct PullbackOptions {
  /// Stop each component at the nearest critical points as well, giving the
  /// diffeomorphic pullback instead of the full preimage component.
  bool diffeomorphic = false;
  int bisection_iterations = 80;
  /// Relative tolerance for the anchor consistency f(x_k) = x_{k+1}.
  double anchor_tolerance = 1e-9;
  /// Initial half-width of the search window on unbounded domains.
  double initial_window = 1.0;
  int max_window_doublings = 60;
};

namespace detail {

// Root of f(x) = y on [a, b], f monotone there with f(a), f(b) bracketing y.
inline double monotone_solve(const MapModel& f, double a, double b, double y, int iterations) {
  double fa = f.value(a) - y;
  for (int i = 0; i < iterations; ++i) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = f.value(m) - y;
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct ComponentSide {
  double end;
  bool bounded_by_window;
};

// Walk from x in direction dir (+1/-1) until f leaves `target`, crossing
// monotone laps delimited by critical points of f inside [wlo, whi].
inline ComponentSide walk_component(const MapModel& f, const OrientedInterval& target, double x,
                                    int dir, double wlo, double whi,
                                    const std::vector<CriticalPoint>& crit,
                                    const PullbackOptions& opt) {
  std::vector<double> breaks;
  for (const auto& c : crit) {
    if (dir > 0 ? c.location > x : c.location < x) breaks.push_back(c.location);
  }
  if (dir > 0) std::sort(breaks.begin(), breaks.end());
  else std::sort(breaks.begin(), breaks.end(), std::greater<>());
  breaks.push_back(dir > 0 ? whi : wlo);

  double a = x;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const double b = breaks[i];
    const bool last = i + 1 == breaks.size();
    const double fb = f.value(b);
    if (!target.contains(fb)) {
      const double y = fb > target.hi() ? target.hi() : target.lo();
      const double lo = std::min(a, b), hi = std::max(a, b);
      return {monotone_solve(f, lo, hi, y, opt.bisection_iterations), false};
    }
    if (last) return {b, true};
    if (opt.diffeomorphic) return {b, false};
    a = b;
  }
  return {a, true};
}

}  // namespace detail

/// The connected component of f^-1(target) containing x (restricted to the
/// domain of f). f(x) must lie in target.
inline OrientedInterval preimage_component(const MapModel& f, const OrientedInterval& target,
                                           double x, const PullbackOptions& opt = {}) {
  if (!target.contains(f.value(x)))
    throw PreconditionError("f(x) does not lie in the target interval");
  const Domain& dom = f.domain();
  if (dom.is_bounded() && !dom.is_circle()) {
    const OrientedInterval window = dom.bounds();
    const double lo = window.lo(), hi = window.hi();
    const auto crit = critical_points(f, window);
    const auto left = detail::walk_component(f, target, x, -1, lo, hi, crit, opt);
    const auto right = detail::walk_component(f, target, x, +1, lo, hi, crit, opt);
    return {left.end, right.end};
  }
  double w = opt.initial_window * (1.0 + std::abs(x));
  for (int i = 0; i <= opt.max_window_doublings; ++i, w *= 2.0) {
    const OrientedInterval window(x - w, x + w);
    const auto crit = critical_points(f, window);
    const auto left = detail::walk_component(f, target, x, -1, window.lo(), window.hi(), crit, opt);
    const auto right = detail::walk_component(f, target, x, +1, window.lo(), window.hi(), crit, opt);
    if (!left.bounded_by_window && !right.bounded_by_window) return {left.end, right.end};
  }
  throw NumericError("preimage component boundary not bracketed");
}

inline int chain_order(const MapModel& f, const std::vector<OrientedInterval>& intervals) {
  int order = 0;
  const Domain& dom = f.domain();
  for (OrientedInterval T : intervals) {
    if (dom.is_bounded() && !dom.is_circle()) {
      const auto clipped = T.intersection(dom.bounds());
      if (!clipped) continue;
      T = *clipped;
    }
    if (T.is_degenerate() ? f.jet(T.lo()).d1 == 0.0 : !critical_points(f, T).empty()) ++order;
  }
  return order;
}

/// Pulls T_m back along the anchor orbit x_0, ..., x_m (f(x_k) = x_{k+1},
/// x_m in T_m), giving the unique chain with x_k in T_k.
inline Chain pull_back_chain(const MapModel& f, const OrientedInterval& T_m,
                             const std::vector<double>& anchor, const PullbackOptions& opt = {}) {
  if (anchor.empty()) throw PreconditionError("anchor orbit is empty");
  if (!T_m.contains(anchor.back())) throw PreconditionError("last anchor point is not in T_m");
  for (std::size_t k = 0; k + 1 < anchor.size(); ++k) {
    const double y = f.value(anchor[k]);
    if (!(std::abs(y - anchor[k + 1]) <= opt.anchor_tolerance * (1.0 + std::abs(anchor[k + 1]))))
      throw PreconditionError("anchor is not an orbit: f(x_k) != x_{k+1}");
  }
  const std::size_t m = anchor.size() - 1;
  std::vector<OrientedInterval> Ts(m + 1, T_m);
  for (std::size_t k = m; k-- > 0;) {
    OrientedInterval target = Ts[k + 1];
    // The anchor may miss the target by the consistency tolerance.
    const double y = f.value(anchor[k]);
    if (!target.contains(y)) target = target.hull(OrientedInterval::point(y));
    Ts[k] = preimage_component(f, target, anchor[k], opt);
  }
  Chain c;
  c.intervals = std::move(Ts);
  c.anchor_orbit = anchor;
  c.multiplicity = intersection_multiplicity(c.intervals);
  c.order = chain_order(f, c.intervals);
  return c;
}

/// Forward orbit x, f(x), ..., f^m(x).
inline std::vector<double> forward_orbit(const MapModel& f, double x, int m) {
  std::vector<double> o{x};
  for (int k = 0; k < m; ++k) o.push_back(f.value(o.back()));
  return o;
}

/// One pullback sample: cross-ratio and scaled space at the
/// head and at the tail of a diffeomorphic chain.
struct PullbackReport {
  int m = 0;
  int N = 0;
  double D_head = 0.0, D_tail = 0.0;
  double space_head = 0.0, space_tail = 0.0;
  std::vector<OrientedInterval> J_chain;
  std::vector<double> D_steps;
};

/// Pulls J_m back inside the chain and compares cross-ratios at both ends.
/// f must be a diffeomorphism on every T_k with f(T_k) = T_{k+1}.
inline PullbackReport verify_pullback_cr(const MapModel& g, const Chain& chain,
                                         const OrientedInterval& J_m) {
  const int m = chain.length();
  if (m < 0) throw PreconditionError("empty chain");
  PullbackReport rep;
  rep.m = m;
  rep.N = chain.multiplicity > 0 ? chain.multiplicity : intersection_multiplicity(chain.intervals);
  std::vector<OrientedInterval> Js(static_cast<std::size_t>(m) + 1, J_m);
  for (int k = m - 1; k >= 0; --k) {
    const OrientedInterval& T = chain.intervals[k];
    if (!is_diffeo_on(g, T)) throw NotDiffeoError("chain step is not a diffeomorphism");
    const OrientedInterval& Jn = Js[k + 1];
    const double a = detail::monotone_solve(g, T.lo(), T.hi(), Jn.lo(), 200);
    const double b = detail::monotone_solve(g, T.lo(), T.hi(), Jn.hi(), 200);
    Js[k] = OrientedInterval::hull(a, b);
  }
  for (int k = 0; k <= m; ++k) rep.D_steps.push_back(cross_ratio(chain.intervals[k], Js[k]));
  rep.D_head = rep.D_steps.front();
  rep.D_tail = rep.D_steps.back();
  rep.space_head = scaled_space(chain.head(), Js.front());
  rep.space_tail = scaled_space(chain.tail(), Js.back());
  rep.J_chain = std::move(Js);
  return rep;
}

/// Single polynomial step: T and J are the components of f^-1(T_hat) and
/// f^-1(J_hat) containing x; returns (space of J_hat in T_hat, space of J in T).
inline std::pair<double, double> polynomial_pullback_space(const MapModel& f,
                                                           const OrientedInterval& T_hat,
                                                           const OrientedInterval& J_hat, double x) {
  const OrientedInterval T = preimage_component(f, T_hat, x);
  const OrientedInterval J = preimage_component(f, J_hat, x);
  return {scaled_space(T_hat, J_hat), scaled_space(T, J)};
}

/// One row of an empirical rho envelope.
struct EnvelopePoint {
  double x = 0.0;
  double envelope = 0.0;
  double isotonic = 0.0;
};

struct EnvelopeTable {
  int N = 0;
  std::vector<EnvelopePoint> points;
};

namespace detail {

// Pool-adjacent-violators: least-squares non-decreasing fit.
inline std::vector<double> isotonic_increasing(const std::vector<double>& y) {
  struct Block {
    double sum;
    int count;
  };
  std::vector<Block> blocks;
  for (double v : y) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum / a.count <= b.sum / b.count) break;
      Block merged{a.sum + b.sum, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks)
    for (int i = 0; i < b.count; ++i) out.push_back(b.sum / b.count);
  return out;
}

}  // namespace detail

/// Mergeable collection of pullback samples keyed by multiplicity N.
///
/// distortion samples (D_tail, D_head) give an upper envelope: the largest
/// head cross-ratio seen for any tail cross-ratio up to x. space samples
/// (space_tail, space_head) give a lower envelope: the smallest head space
/// seen for any tail space of at least x. Both envelopes are non-decreasing in
/// x; a PAVA fit on log-log scale is reported alongside.
class RhoAccumulator {
 public:
  void add(const PullbackReport& r) {
    add_distortion(r.N, r.D_tail, r.D_head);
    add_space(r.N, r.space_tail, r.space_head);
  }
  void add_distortion(int N, double tail, double head) { distortion_[N].emplace_back(tail, head); }
  void add_space(int N, double tail, double head) { space_[N].emplace_back(tail, head); }

  RhoAccumulator& merge(const RhoAccumulator& other) {
    for (const auto& [n, v] : other.distortion_)
      distortion_[n].insert(distortion_[n].end(), v.begin(), v.end());
    for (const auto& [n, v] : other.space_) space_[n].insert(space_[n].end(), v.begin(), v.end());
    return *this;
  }

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& [n, v] : distortion_) s += v.size();
    for (const auto& [n, v] : space_) s += v.size();
    return s;
  }

  std::vector<EnvelopeTable> distortion_envelopes() const { return envelopes(distortion_, true); }
  std::vector<EnvelopeTable> space_envelopes() const { return envelopes(space_, false); }

 private:
  using Samples = std::map<int, std::vector<std::pair<double, double>>>;

  static std::vector<EnvelopeTable> envelopes(const Samples& all, bool upper) {
    std::vector<EnvelopeTable> out;
    for (auto [n, v] : all) {
      if (v.empty()) continue;
      std::sort(v.begin(), v.end());
      EnvelopeTable t;
      t.N = n;
      t.points.resize(v.size());
      if (upper) {
        double run = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size(); ++i) {
          run = std::max(run, v[i].second);
          t.points[i] = {v[i].first, run, 0.0};
        }
      } else {
        double run = std::numeric_limits<double>::infinity();
        for (std::size_t i = v.size(); i-- > 0;) {
          run = std::min(run, v[i].second);
          t.points[i] = {v[i].first, run, 0.0};
        }
      }
      std::vector<double> logs;
      bool positive = true;
      for (const auto& [x, y] : v) {
        positive = positive && y > 0.0;
        logs.push_back(y > 0.0 ? std::log(y) : 0.0);
      }
      const auto fit = detail::isotonic_increasing(logs);
      for (std::size_t i = 0; i < v.size(); ++i)
        t.points[i].isotonic = positive ? std::exp(fit[i]) : std::numeric_limits<double>::quiet_NaN();
      out.push_back(std::move(t));
    }
    return out;
  }

  Samples distortion_, space_;
};

}  // namespace unidym

#endif  // UNIDYM_CHAINS_HPP
