#ifndef UNIDYM_CROSSRATIO_HPP
#define UNIDYM_CROSSRATIO_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/map_analysis.hpp"
#include "unidym/map_model.hpp"

namespace unidym {

/// T with J strictly inside; L and R are the components of T \ J.
struct CrossRatioContext {
  OrientedInterval T, J;

  CrossRatioContext(OrientedInterval t, OrientedInterval j) : T(t), J(j) {
    if (!(J.length() > 0.0) || !T.strictly_contains(J))
      throw DegenerateConfigurationError("J must lie strictly inside T with positive length");
  }
  OrientedInterval left() const { return {T.lo(), J.lo()}; }
  OrientedInterval right() const { return {J.hi(), T.hi()}; }
};

/// D(T,J) = |T||J| / (|L||R|).
inline double cross_ratio(const OrientedInterval& T, const OrientedInterval& J) {
  CrossRatioContext ctx(T, J);
  return T.length() * J.length() / (ctx.left().length() * ctx.right().length());
}

/// Largest eps with (1+2eps)J inside T, i.e. min(|L|,|R|)/|J|.
inline double scaled_space(const OrientedInterval& T, const OrientedInterval& J) {
  CrossRatioContext ctx(T, J);
  return std::min(ctx.left().length(), ctx.right().length()) / J.length();
}

/// The delta-scaled neighbourhood (1+2*delta)J.
inline OrientedInterval scaled_neighborhood(const OrientedInterval& J, double delta) {
  if (!(delta >= 0.0)) throw ParameterError("delta must be non-negative");
  return J.scaled(1.0 + 2.0 * delta);
}

/// Cross-ratio of the images f(T), f(J) of a map monotone on T, computed from
/// the four endpoint images directly so that orientation does not matter.
inline double image_cross_ratio(const MapModel& f, const OrientedInterval& T,
                                 const OrientedInterval& J) {
  CrossRatioContext ctx(T, J);
  const double a = f.value(T.lo()), c = f.value(J.lo()), d = f.value(J.hi()), b = f.value(T.hi());
  const double fT = std::abs(b - a), fJ = std::abs(d - c), fL = std::abs(c - a), fR = std::abs(b - d);
  if (!(fL > 0.0) || !(fR > 0.0) || !(fJ > 0.0))
    throw DegenerateConfigurationError("image configuration collapsed numerically");
  return fT * fJ / (fL * fR);
}

/// B(f,T,J) = D(f(T), f(J)) / D(T, J). Requires f to be a diffeomorphism on T.
inline double distortion(const MapModel& f, const OrientedInterval& T, const OrientedInterval& J) {
  if (!is_diffeo_on(f, T)) throw NotDiffeoError("map is not monotone on T");
  return image_cross_ratio(f, T, J) / cross_ratio(T, J);
}

/// Same as distortion() but skips the diffeomorphism check; for inner loops
/// where monotonicity was established once for the enclosing interval.
inline double distortion_unchecked(const MapModel& f, const OrientedInterval& T,
                                   const OrientedInterval& J) {
  return image_cross_ratio(f, T, J) / cross_ratio(T, J);
}

struct MinimumPrincipleReport {
  enum class Status { verified, counterexample, hypothesis_failed };
  Status status = Status::verified;
  /// Location of the violation (counterexample / hypothesis failure).
  double x = std::numeric_limits<double>::quiet_NaN();
  double derivative = std::numeric_limits<double>::quiet_NaN();
  double min_sampled_derivative = std::numeric_limits<double>::infinity();
  double min_distortion_cubed = std::numeric_limits<double>::infinity();
  double distortion_threshold = 0.0;
  long pairs_checked = 0;
  std::string reason;

  bool verified() const noexcept { return status == Status::verified; }
};

namespace detail {
// Weyl sequence in [0,1); deterministic low-discrepancy sampling.
inline double weyl(long i, double alpha) {
  double v = std::fmod(0.5 + i * alpha, 1.0);
  return v < 0 ? v + 1.0 : v;
}
}  // namespace detail

/// Sampled check of the Minimum Principle pattern for g = f^power on T:
/// if |Dg| >= 1+2*rho at both endpoints and B(g,T*,J*)^3 > (1+rho)/(1+2*rho)
/// for all sampled nested J* ⊂ T* ⊂ T, then Dg > 1+rho throughout T.
inline MinimumPrincipleReport minimum_principle_check(const MapModel& f, int power,
                                                      const OrientedInterval& T, double rho,
                                                      int samples = 256) {
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  if (samples < 2) throw ParameterError("need at least two samples");
  const MapModel g = MapModel::power(f, power);
  if (!is_diffeo_on(g, T)) throw NotDiffeoError("iterate is not monotone on T");

  MinimumPrincipleReport rep;
  rep.distortion_threshold = (1.0 + rho) / (1.0 + 2.0 * rho);
  for (double x : {T.lo(), T.hi()}) {
    const double d = std::abs(g.jet(x).d1);
    if (!(d >= 1.0 + 2.0 * rho)) {
      rep.status = MinimumPrincipleReport::Status::counterexample;
      rep.x = x;
      rep.derivative = d;
      rep.min_sampled_derivative = d;
      rep.reason = "endpoint derivative is below 1+2rho";
      return rep;
    }
  }

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const double silver = std::sqrt(2.0) - 1.0;
  for (int i = 0; i < samples; ++i) {
    // T* = T for i == 0, otherwise a sub-interval with both gaps in [0, 0.45|T|).
    const double ga = i == 0 ? 0.0 : 0.45 * detail::weyl(i, golden);
    const double gb = i == 0 ? 0.0 : 0.45 * detail::weyl(i, silver);
    const OrientedInterval Ts(T.lo() + ga * T.length(), T.hi() - gb * T.length());
    for (int j = 0; j < samples; ++j) {
      const double start = 0.01 + 0.9 * detail::weyl(j, golden);
      const double width = (0.99 - start) * (0.05 + 0.9 * detail::weyl(j, silver));
      const OrientedInterval Js(Ts.lo() + start * Ts.length(),
                                Ts.lo() + (start + width) * Ts.length());
      const double B = distortion_unchecked(g, Ts, Js);
      ++rep.pairs_checked;
      const double b3 = B * B * B;
      rep.min_distortion_cubed = std::min(rep.min_distortion_cubed, b3);
      if (!(b3 > rep.distortion_threshold)) {
        rep.status = MinimumPrincipleReport::Status::hypothesis_failed;
        rep.x = Js.midpoint();
        rep.reason = "sampled cross-ratio distortion below threshold";
        return rep;
      }
    }
  }

  const int n = samples * 16;
  for (int i = 0; i <= n; ++i) {
    const double x = T.lo() + T.length() * i / n;
    const double d = std::abs(g.jet(x).d1);
    if (d < rep.min_sampled_derivative) {
      rep.min_sampled_derivative = d;
      rep.x = x;
      rep.derivative = d;
    }
  }
  if (!(rep.min_sampled_derivative > 1.0 + rho)) {
    rep.status = MinimumPrincipleReport::Status::counterexample;
    rep.reason = "interior derivative does not exceed 1+rho";
  }
  return rep;
}

struct ExpansionReport {
  bool space_ok = false;          // both image components >= beta * |g(T)|
  bool endpoint_expansion = false;  // |g(T)| >= |T|
  bool found_expanding_point = false;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double max_derivative = 0.0;
  double left_fraction = 0.0;
  double right_fraction = 0.0;
};

/// Sampled form of the expansion pattern: g monotone on T, M inside T with
/// both components of g(T) \ g(M) at least beta*|g(T)| and g(T) no shorter
/// than T; looks for theta in M with |Dg(theta)| > 1+2*rho.
inline ExpansionReport expansion_principle_check(const MapModel& g, const OrientedInterval& T,
                                                 const OrientedInterval& M, double beta, double rho,
                                                 int samples = 4096) {
  if (!is_diffeo_on(g, T)) throw NotDiffeoError("map is not monotone on T");
  CrossRatioContext ctx(T, M);
  const double a = g.value(T.lo()), c = g.value(M.lo()), d = g.value(M.hi()), b = g.value(T.hi());
  const double gT = std::abs(b - a);
  ExpansionReport rep;
  rep.left_fraction = std::abs(c - a) / gT;
  rep.right_fraction = std::abs(b - d) / gT;
  rep.space_ok = rep.left_fraction >= beta && rep.right_fraction >= beta;
  rep.endpoint_expansion = gT >= T.length();
  for (int i = 0; i <= samples; ++i) {
    const double x = M.lo() + M.length() * i / samples;
    const double dv = std::abs(g.jet(x).d1);
    if (dv > rep.max_derivative) {
      rep.max_derivative = dv;
      rep.theta = x;
    }
  }
  rep.found_expanding_point = rep.max_derivative > 1.0 + 2.0 * rho;
  return rep;
}

}  // namespace unidym

#endif  // UNIDYM_CROSSRATIO_HPP
