#ifndef UNIDYM_SCHWARZIAN_HPP
#define UNIDYM_SCHWARZIAN_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "unidym/crossratio.hpp"
#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/map_analysis.hpp"
#include "unidym/map_model.hpp"

namespace unidym {

/// Absolute slack applied to every mathematically strict inequality.
inline constexpr double kStrictSlack = 1e-9;

/// Sf = D3f/Df - (3/2)(D2f/Df)^2. Throws CriticalPointError where Df = 0.
inline double schwarzian_at(const MapModel& f, double x) { return schwarzian_from_jet(f.jet(x)); }

struct ExtremumOptions {
  int samples = 4096;
  /// Number of leading samples refined by golden-section search.
  int refine_count = 4;
};

namespace detail {

inline double refine_extremum(const std::function<double(double)>& fn, double a, double b,
                              double sign) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = sign * fn(c), fd = sign * fn(d);
  for (int it = 0; it < 100; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = sign * fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = sign * fn(d);
    }
  }
  return std::max(fc, fd) * sign;
}

inline double schwarzian_extremum(const MapModel& f, const OrientedInterval& T, double sign,
                                  const ExtremumOptions& opt) {
  if (!is_diffeo_on(f, T)) throw CriticalPointError("T contains a critical point");
  const int n = T.is_degenerate() ? 0 : std::max(opt.samples, 2);
  std::vector<double> xs(static_cast<std::size_t>(n) + 1), vs(xs.size());
  for (int i = 0; i <= n; ++i) {
    xs[i] = n == 0 ? T.lo() : (i == n ? T.hi() : T.lo() + T.length() * i / n);
    vs[i] = sign * schwarzian_at(f, xs[i]);
  }
  double best = *std::max_element(vs.begin(), vs.end());
  if (n == 0) return sign * best;
  std::vector<int> order(xs.size());
  for (int i = 0; i <= n; ++i) order[i] = i;
  const int k = std::min<int>(opt.refine_count, static_cast<int>(order.size()));
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) { return vs[a] > vs[b]; });
  auto fn = [&](double x) { return schwarzian_at(f, x); };
  for (int r = 0; r < k; ++r) {
    const int i = order[r];
    const double a = xs[std::max(i - 1, 0)], b = xs[std::min(i + 1, n)];
    best = std::max(best, sign * refine_extremum(fn, a, b, sign));
  }
  return sign * best;
}

}  // namespace detail

/// Upper estimate of sup Sf on T: dense sampling plus local refinement. The
/// result is at least every sampled value.
inline double schwarzian_sup(const MapModel& f, const OrientedInterval& T,
                             const ExtremumOptions& opt = {}) {
  return detail::schwarzian_extremum(f, T, 1.0, opt);
}

inline double schwarzian_inf(const MapModel& f, const OrientedInterval& T,
                             const ExtremumOptions& opt = {}) {
  return detail::schwarzian_extremum(f, T, -1.0, opt);
}

/// Outcome of checking one explicit distortion bound against a measured B.
struct SchwarzianBoundReport {
  double bound_value = std::numeric_limits<double>::quiet_NaN();
  double measured_B = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  bool hypothesis_ok = false;
  /// Second, weaker bound where one exists (the sinh bound), else NaN.
  double secondary_bound = std::numeric_limits<double>::quiet_NaN();
  double secondary_margin = std::numeric_limits<double>::quiet_NaN();
  /// Sampled sup (cos bound) or sup (sinh bound) of Sf on T.
  double schwarzian_estimate = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> violations;

  bool holds(double slack = kStrictSlack) const { return margin >= -slack; }
};

/// cos^2(sqrt(C/2)|T|)
inline double cos_bound(double C, double length) {
  const double c = std::cos(std::sqrt(C / 2.0) * length);
  return c * c;
}

/// ((1+2delta)/(sqrt(C/2)|T|)) * sinh(sqrt(C/2)|T|/(1+2delta))
inline double sinh_bound(double C, double length, double delta) {
  const double y = std::sqrt(C / 2.0) * length / (1.0 + 2.0 * delta);
  if (y == 0.0) return 1.0;
  return std::sinh(y) / y;
}

/// 1 + C|T|^2 / (12 (1+2delta)^2)
inline double sinh_secondary_bound(double C, double length, double delta) {
  const double s = 1.0 + 2.0 * delta;
  return 1.0 + C * length * length / (12.0 * s * s);
}

/// Checks B(f,T,J) > cos^2(sqrt(C/2)|T|) for a diffeomorphism with Sf < C on
/// T and C|T|^2 < pi^2/2. Hypothesis failures are reported, not thrown.
inline SchwarzianBoundReport verify_cos_bound(const MapModel& f, const OrientedInterval& T,
                                              const OrientedInterval& J, double C) {
  SchwarzianBoundReport rep;
  rep.bound_value = cos_bound(C, T.length());
  rep.hypothesis_ok = true;
  if (!(C > 0.0)) {
    rep.hypothesis_ok = false;
    rep.violations.push_back("C must be positive");
  }
  const double pi = std::numbers::pi;
  if (!(C * T.length() * T.length() < pi * pi / 2.0)) {
    rep.hypothesis_ok = false;
    rep.violations.push_back("C|T|^2 >= pi^2/2");
  }
  (void)cross_ratio(T, J);
  if (!is_diffeo_on(f, T)) {
    rep.hypothesis_ok = false;
    rep.violations.push_back("f is not a diffeomorphism on T");
    return rep;
  }
  rep.schwarzian_estimate = schwarzian_sup(f, T);
  if (!(rep.schwarzian_estimate < C + kStrictSlack)) {
    rep.hypothesis_ok = false;
    rep.violations.push_back("sup Sf >= C");
  }
  rep.measured_B = distortion(f, T, J);
  rep.margin = rep.measured_B - rep.bound_value;
  return rep;
}

/// Checks the sinh bound (and the weaker polynomial bound) for T = (1+2delta)J
/// and Sf < -C on T. delta must be positive.
inline SchwarzianBoundReport verify_sinh_bound(const MapModel& f, const OrientedInterval& J,
                                               double delta, double C) {
  if (!(delta > 0.0))
    throw PreconditionError("delta must be positive: T = (1+2delta)J must strictly contain J");
  const OrientedInterval T = scaled_neighborhood(J, delta);
  SchwarzianBoundReport rep;
  rep.bound_value = sinh_bound(C, T.length(), delta);
  rep.secondary_bound = sinh_secondary_bound(C, T.length(), delta);
  rep.hypothesis_ok = true;
  if (!(C > 0.0)) {
    rep.hypothesis_ok = false;
    rep.violations.push_back("C must be positive");
  }
  if (!is_diffeo_on(f, T)) {
    rep.hypothesis_ok = false;
    rep.violations.push_back("f is not a diffeomorphism on T");
    return rep;
  }
  rep.schwarzian_estimate = schwarzian_sup(f, T);
  if (!(rep.schwarzian_estimate < -C + kStrictSlack)) {
    rep.hypothesis_ok = false;
    rep.violations.push_back("sup Sf >= -C");
  }
  rep.measured_B = distortion(f, T, J);
  rep.margin = rep.measured_B - rep.bound_value;
  rep.secondary_margin = rep.measured_B - rep.secondary_bound;
  return rep;
}

enum class ComparisonSign {
  /// Sf < C: compare with cos, psi'' = -(C/2) psi.
  positive,
  /// Sf < -C: compare with cosh, psi'' = (C/2) psi.
  negative,
};

struct OdeComparisonReport {
  std::vector<double> xs, phi, psi;
  /// max over samples of phi - psi; the comparison claims this is <= 0.
  double max_excess = -std::numeric_limits<double>::infinity();
  double max_abs_difference = 0.0;
  bool ordering_holds = false;
  /// |phi_ivp(u2) - 1/sqrt|Df(u2)|| / max(1, 1/sqrt|Df(u2)|) when integrating from the exact data of f
  /// at u1; NaN for synthetic Schwarzian input.
  double integration_residual = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct OdeState {
  double y, dy;
};

// One RK4 step of y'' = -(1/2) S(x) y.
inline OdeState rk4_step(const std::function<double(double)>& S, double x, OdeState s, double h) {
  auto acc = [&](double t, double y) { return -0.5 * S(t) * y; };
  const double k1y = s.dy, k1v = acc(x, s.y);
  const double k2y = s.dy + 0.5 * h * k1v, k2v = acc(x + 0.5 * h, s.y + 0.5 * h * k1y);
  const double k3y = s.dy + 0.5 * h * k2v, k3v = acc(x + 0.5 * h, s.y + 0.5 * h * k2y);
  const double k4y = s.dy + h * k3v, k4v = acc(x + h, s.y + h * k3y);
  return {s.y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y),
          s.dy + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)};
}

inline std::vector<OdeState> integrate(const std::function<double(double)>& S, double x0, double h,
                                       int steps, OdeState init) {
  std::vector<OdeState> out{init};
  out.reserve(static_cast<std::size_t>(steps) + 1);
  OdeState s = init;
  for (int i = 0; i < steps; ++i) {
    s = rk4_step(S, x0 + i * h, s, h);
    if (!std::isfinite(s.y) || !std::isfinite(s.dy)) throw NumericError("ODE integration diverged");
    out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// Solves phi'' = -(1/2) S phi with phi(u1) = phi(u2) = 1 by RK4 shooting
/// (step |T|/4096) and compares with the closed-form cos/cosh solution psi of
/// the constant-coefficient equation with the same boundary values, at
/// `sample_count` evenly spaced points of [u1, u2].
inline OdeComparisonReport ode_comparison_oracle(const std::function<double(double)>& S,
                                                 const OrientedInterval& T, double u1, double u2,
                                                 double C, ComparisonSign sign,
                                                 int sample_count = 1024) {
  if (!(u1 < u2) || !T.contains(u1) || !T.contains(u2))
    throw PreconditionError("need u1 < u2 inside T");
  if (!(C > 0.0)) throw ParameterError("C must be positive");
  const int per_sample = std::max(1, static_cast<int>(std::ceil(4096.0 * (u2 - u1) / T.length() /
                                                                sample_count)));
  const int steps = per_sample * sample_count;
  const double h = (u2 - u1) / steps;
  auto a = detail::integrate(S, u1, h, steps, {1.0, 0.0});
  auto b = detail::integrate(S, u1, h, steps, {0.0, 1.0});
  if (std::abs(b.back().y) < 1e-14) throw NumericError("shooting problem is singular");
  const double slope = (1.0 - a.back().y) / b.back().y;

  const double w = std::sqrt(C / 2.0);
  const double mid = 0.5 * (u1 + u2);
  const double half = 0.5 * (u2 - u1);
  const double denom = sign == ComparisonSign::positive ? std::cos(w * half) : std::cosh(w * half);
  if (!(denom > 0.0)) throw HypothesisError("comparison solution changes sign on [u1,u2]");

  OdeComparisonReport rep;
  double scale = 0.0;
  for (int i = 0; i <= sample_count; ++i) {
    const int idx = i * per_sample;
    const double x = u1 + idx * h;
    const double phi = a[idx].y + slope * b[idx].y;
    const double psi = (sign == ComparisonSign::positive ? std::cos(w * (x - mid))
                                                         : std::cosh(w * (x - mid))) /
                       denom;
    rep.xs.push_back(x);
    rep.phi.push_back(phi);
    rep.psi.push_back(psi);
    rep.max_excess = std::max(rep.max_excess, phi - psi);
    rep.max_abs_difference = std::max(rep.max_abs_difference, std::abs(phi - psi));
    scale = std::max({scale, std::abs(phi), std::abs(psi)});
  }
  rep.ordering_holds = rep.max_excess <= 1e-9 * std::max(1.0, scale);
  return rep;
}

/// Map version: S = Sf; additionally integrates the exact phi = 1/sqrt(|Df|)
/// from its data at u1 and reports the mismatch at u2.
inline OdeComparisonReport ode_comparison_oracle(const MapModel& f, const OrientedInterval& T,
                                                 double u1, double u2, double C,
                                                 ComparisonSign sign, int sample_count = 1024) {
  if (!is_diffeo_on(f, T)) throw NotDiffeoError("map is not monotone on T");
  auto S = [&](double x) { return schwarzian_at(f, x); };
  OdeComparisonReport rep = ode_comparison_oracle(S, T, u1, u2, C, sign, sample_count);

  auto phi_exact = [&](double x) { return 1.0 / std::sqrt(std::abs(f.jet(x).d1)); };
  const Jet j = f.jet(u1);
  const double p0 = phi_exact(u1);
  // d/dx |Df|^(-1/2) = -(1/2) |Df|^(-3/2) sign(Df) D2f
  const double dp0 = -0.5 * p0 * j.d2 / j.d1;
  const int steps = static_cast<int>(rep.xs.size() - 1) *
                    std::max(1, static_cast<int>(std::ceil(4096.0 * (u2 - u1) / T.length() /
                                                           sample_count)));
  const double h = (u2 - u1) / steps;
  auto sol = detail::integrate(S, u1, h, steps, {p0, dp0});
  const double target = phi_exact(u2);
  rep.integration_residual = std::abs(sol.back().y - target) / std::max(1.0, std::abs(target));
  return rep;
}

/// Smallest B(f,[0,1],J) found for the constant-Schwarzian family
/// tan(k(x-m))/k, k = sqrt(C/2), over a grid of centres m and intervals J.
struct SharpnessWitness {
  double min_B = std::numeric_limits<double>::infinity();
  double center = 0.0;
  OrientedInterval J{0.25, 0.75};
  double schwarzian = 0.0;
};

inline SharpnessWitness constant_schwarzian_min_distortion(double C, int center_steps = 241,
                                                           int j_steps = 48) {
  const OrientedInterval T(0.0, 1.0);
  const double k = std::sqrt(C / 2.0);
  const double pi = std::numbers::pi;
  SharpnessWitness best;
  best.schwarzian = C;
  for (int ci = 0; ci <= center_steps; ++ci) {
    const double m = -1.0 + 3.0 * ci / center_steps;
    // Diffeomorphic on [0,1] iff no pole: k*|x - m| < pi/2 at both ends.
    if (!(k * std::max(std::abs(m), std::abs(1.0 - m)) < pi / 2 * (1.0 - 1e-9))) continue;
    const MapModel f = MapModel::constant_schwarzian(C, m);
    for (int ai = 0; ai < j_steps; ++ai) {
      const double a = 0.5 * std::pow(1e-4 / 0.5, static_cast<double>(ai) / (j_steps - 1));
      for (int bi = 0; bi < j_steps; ++bi) {
        const double b = 1.0 - 0.5 * std::pow(1e-4 / 0.5, static_cast<double>(bi) / (j_steps - 1));
        if (!(b > a)) continue;
        const OrientedInterval J(a, b);
        const double B = distortion_unchecked(f, T, J);
        if (B < best.min_B) {
          best.min_B = B;
          best.center = m;
          best.J = J;
        }
      }
    }
  }
  return best;
}

}  // namespace unidym

#endif  // UNIDYM_SCHWARZIAN_HPP
