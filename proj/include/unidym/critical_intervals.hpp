#ifndef UNIDYM_CRITICAL_INTERVALS_HPP
#define UNIDYM_CRITICAL_INTERVALS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "unidym/chains.hpp"
#include "unidym/crossratio.hpp"
#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/map_analysis.hpp"
#include "unidym/map_model.hpp"
#include "unidym/polynomial.hpp"
#include "unidym/schwarzian.hpp"

namespace unidym {

/// E = [a - 2b, a + 2b] for a non-real root a + ib (b > 0) of Df.
struct CriticalInterval {
  double a = 0.0;
  double b = 1.0;

  OrientedInterval E() const { return {a - 2.0 * b, a + 2.0 * b}; }
  /// 2E = [a - 4b, a + 4b]
  OrientedInterval doubled() const { return {a - 4.0 * b, a + 4.0 * b}; }
  double length() const noexcept { return 4.0 * b; }
};

struct CriticalIntervalSet {
  /// Sorted by length, ascending.
  std::vector<CriticalInterval> intervals;
  int degree = 0;
  /// Roots with |imag| at most this are treated as real.
  double pairing_threshold = 0.0;
  /// Smallest |imag| among roots classified as non-real (inf if none); shows
  /// how close the split was.
  double min_imaginary_part = std::numeric_limits<double>::infinity();

  int d_E() const noexcept { return static_cast<int>(intervals.size()); }
  bool empty() const noexcept { return intervals.empty(); }
};

struct CriticalIntervalOptions {
  /// Relative pairing threshold: |imag| > pairing * scale(Df) is non-real.
  double pairing = 1e-10;
  int newton_polish_steps = 1;
};

/// One critical interval per conjugate pair of non-real roots of Df.
inline CriticalIntervalSet compute_critical_intervals(const MapModel& f,
                                                      const CriticalIntervalOptions& opt = {}) {
  const auto p = f.as_polynomial();
  if (!p) throw PreconditionError("critical intervals need a polynomial map");
  if (p->degree() < 2) throw PreconditionError("critical intervals need degree >= 2");
  const Polynomial df = p->derivative();
  CriticalIntervalSet set;
  set.degree = p->degree();
  set.pairing_threshold = opt.pairing * df.scale();
  for (const auto& z : complex_roots(df, opt.newton_polish_steps)) {
    if (z.imag() > set.pairing_threshold) {
      set.intervals.push_back({z.real(), z.imag()});
      set.min_imaginary_part = std::min(set.min_imaginary_part, z.imag());
    }
  }
  std::sort(set.intervals.begin(), set.intervals.end(),
            [](const auto& x, const auto& y) { return x.b != y.b ? x.b < y.b : x.a < y.a; });
  return set;
}

/// 2 d_E / b_j^2 for the shortest E_j containing x, or 0 when x lies in no
/// E_j (in which case Sf(x) < 0).
inline double schwarzian_upper_bound(const MapModel&, double x, const CriticalIntervalSet& S) {
  for (const auto& ci : S.intervals)
    if (ci.E().contains(x)) return 2.0 * S.d_E() / (ci.b * ci.b);
  return 0.0;
}

/// Largest overlap ratio |T ∩ E_j| / |E_j| over all critical intervals.
inline double max_overlap_ratio(const OrientedInterval& T, const CriticalIntervalSet& S) {
  double r = 0.0;
  for (const auto& ci : S.intervals) r = std::max(r, T.overlap(ci.E()) / ci.length());
  return r;
}

struct ExcepPart1Report {
  double product_B = 1.0;
  double log_product_B = 0.0;
  double bound = 1.0;
  double margin = 0.0;
  int measured_multiplicity = 0;
  int d_E = 0;
  bool hypotheses_ok = true;
  std::vector<std::string> violations;
};

/// prod B(f, T_i, J_i) > exp(-16 kappa N d_E^2) under kappa < 1/(4 sqrt d_E),
/// f diffeo on each T_i, |T_i ∩ E_j| < kappa |E_j| and intersection
/// multiplicity of {T_i} at most N (measured here).
inline ExcepPart1Report verify_excep_part1(
    const MapModel& f, const std::vector<std::pair<OrientedInterval, OrientedInterval>>& Ts,
    double kappa, int N, const CriticalIntervalSet* precomputed = nullptr) {
  const CriticalIntervalSet S = precomputed ? *precomputed : compute_critical_intervals(f);
  ExcepPart1Report rep;
  rep.d_E = S.d_E();
  const double dE = rep.d_E;
  rep.bound = std::exp(-16.0 * kappa * N * dE * dE);
  if (!(kappa > 0.0) || (dE > 0 && !(kappa < 1.0 / (4.0 * std::sqrt(dE))))) {
    rep.hypotheses_ok = false;
    rep.violations.push_back("kappa outside (0, 1/(4 sqrt d_E))");
  }
  std::vector<OrientedInterval> just_T;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const auto& [T, J] = Ts[i];
    just_T.push_back(T);
    if (!is_diffeo_on(f, T)) {
      rep.hypotheses_ok = false;
      rep.violations.push_back("f not a diffeomorphism on T_" + std::to_string(i));
      continue;
    }
    if (!(max_overlap_ratio(T, S) < kappa)) {
      rep.hypotheses_ok = false;
      rep.violations.push_back("|T_" + std::to_string(i) + " ∩ E_j| >= kappa |E_j|");
    }
    rep.log_product_B += std::log(distortion_unchecked(f, T, J));
  }
  rep.measured_multiplicity = intersection_multiplicity(just_T);
  if (rep.measured_multiplicity > N) {
    rep.hypotheses_ok = false;
    rep.violations.push_back("intersection multiplicity " +
                             std::to_string(rep.measured_multiplicity) + " exceeds N");
  }
  rep.product_B = std::exp(rep.log_product_B);
  rep.margin = rep.product_B - rep.bound;
  return rep;
}

/// 1 + (1/12) (16/(17(1+lambda)^2) - 32 kappa^2 d_E / lambda^2) / (1+2delta)^2
inline double excep_part2_bound(int d_E, double lambda, double kappa, double delta) {
  const double s = 1.0 + 2.0 * delta;
  return 1.0 + (16.0 / (17.0 * (1.0 + lambda) * (1.0 + lambda)) -
                32.0 * kappa * kappa * d_E / (lambda * lambda)) /
                   (12.0 * s * s);
}

struct ExcepPart2Report {
  enum class Case { critical_point, critical_interval, not_applicable };
  Case which = Case::not_applicable;
  double B = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  int d_E = 0;
  bool hypotheses_ok = true;
  std::vector<std::string> violations;
};

inline const char* to_string(ExcepPart2Report::Case c) {
  switch (c) {
    case ExcepPart2Report::Case::critical_point: return "critical_point";
    case ExcepPart2Report::Case::critical_interval: return "critical_interval";
    case ExcepPart2Report::Case::not_applicable: return "not_applicable";
  }
  return "?";
}

/// B(f,T,J) against the explicit lower bound, for T = (1+2delta)J with f a
/// diffeomorphism on T, |T ∩ E_j| < kappa |E_j| / lambda, and either a
/// critical point in lambda*T or some E_j0 with T not inside 2E_j0 and
/// lambda*T meeting E_j0.
inline ExcepPart2Report verify_excep_part2(const MapModel& f, const OrientedInterval& T,
                                           const OrientedInterval& J, double lambda, double kappa,
                                           double delta,
                                           const CriticalIntervalSet* precomputed = nullptr) {
  if (!(lambda > 1.0)) throw ParameterError("lambda must exceed 1");
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  const CriticalIntervalSet S = precomputed ? *precomputed : compute_critical_intervals(f);
  ExcepPart2Report rep;
  rep.d_E = S.d_E();
  if (!(kappa > 0.0) || (rep.d_E > 0 && !(kappa < 1.0 / (13.0 * std::sqrt(rep.d_E)))))
    throw PreconditionError("kappa must lie in (0, 1/(13 sqrt d_E))");
  rep.bound = excep_part2_bound(rep.d_E, lambda, kappa, delta);

  const OrientedInterval expected = scaled_neighborhood(J, delta);
  const double tol = 1e-12 * (1.0 + std::abs(T.lo()) + std::abs(T.hi()));
  if (std::abs(expected.lo() - T.lo()) > tol || std::abs(expected.hi() - T.hi()) > tol) {
    rep.hypotheses_ok = false;
    rep.violations.push_back("T != (1+2delta)J");
  }
  if (!is_diffeo_on(f, T)) {
    rep.hypotheses_ok = false;
    rep.violations.push_back("f not a diffeomorphism on T");
    return rep;
  }
  if (!(max_overlap_ratio(T, S) < kappa / lambda)) {
    rep.hypotheses_ok = false;
    rep.violations.push_back("|T ∩ E_j| >= kappa |E_j| / lambda");
  }
  const OrientedInterval lT = T.scaled(lambda);
  bool crit_case = false;
  try {
    crit_case = !critical_points(f, lT).empty();
  } catch (const DomainError&) {
    crit_case = false;
  }
  if (crit_case) {
    rep.which = ExcepPart2Report::Case::critical_point;
  } else {
    for (const auto& ci : S.intervals) {
      if (!ci.doubled().contains(T) && lT.intersects(ci.E())) {
        rep.which = ExcepPart2Report::Case::critical_interval;
        break;
      }
    }
  }
  if (rep.which == ExcepPart2Report::Case::not_applicable) {
    rep.hypotheses_ok = false;
    rep.violations.push_back("neither a critical point in lambda*T nor a qualifying E_j");
  }
  rep.B = distortion_unchecked(f, T, J);
  rep.margin = rep.B - rep.bound;
  return rep;
}

struct AccountingStep {
  int k = 0;
  OrientedInterval T, J;
  double B = 1.0;
  double log_B = 0.0;
  bool in_W = false;
  /// 1 - C|T_k|^2 for steps outside W, NaN inside.
  double step_bound = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> violations;
};

struct AccountingReport {
  std::vector<AccountingStep> steps;
  double log_B_total = 0.0;
  /// log B(g^m, T_0, J_0) evaluated directly on the iterate.
  double log_B_direct = std::numeric_limits<double>::quiet_NaN();
  /// Upper bound on sup Sf over the steps outside W (at least 0).
  double C = 0.0;
  int N = 0;
  int d = 0;
  double phase_length = 0.0;
  /// -C kappa N |phase| - 16 kappa N d^2
  double negative_contribution_bound = 0.0;
  /// Sum of log B over steps inside W, and its part-1 bound -16 kappa N d^2.
  double log_B_inside_W = 0.0;
  double inside_W_bound = 0.0;
  bool hypotheses_ok = true;
};

struct AccountingOptions {
  /// W is the union of [c - w, c + w] over critical points c and of 2E_j.
  double w = 0.05;
};

/// Per-step distortion ledger for g^m along a diffeomorphic chain headed by
/// T_0 with J inside T_0: log B(g^m) = sum_k log B(g, g^k T, g^k J).
inline AccountingReport composed_distortion_accounting(const MapModel& g, const Chain& chain,
                                                       const OrientedInterval& J, double kappa,
                                                       const AccountingOptions& opt = {}) {
  const int m = chain.length();
  if (m < 1) throw PreconditionError("accounting needs a chain with at least one step");
  AccountingReport rep;
  CriticalIntervalSet S;
  if (g.as_polynomial() && g.as_polynomial()->degree() >= 2) S = compute_critical_intervals(g);
  rep.d = S.d_E();

  std::vector<OrientedInterval> region_W;
  OrientedInterval span = chain.intervals.front();
  for (const auto& T : chain.intervals) span = span.hull(T);
  for (const auto& c : critical_points(g, span))
    region_W.push_back(OrientedInterval::centered(c.location, opt.w));
  for (const auto& ci : S.intervals) region_W.push_back(ci.doubled());

  const Domain& dom = g.domain();
  rep.phase_length = dom.is_bounded() ? dom.bounds().length() : span.length();

  std::vector<OrientedInterval> steps_T(chain.intervals.begin(), chain.intervals.end() - 1);
  rep.N = intersection_multiplicity(steps_T);

  OrientedInterval Jk = J;
  for (int k = 0; k < m; ++k) {
    const OrientedInterval& Tk = chain.intervals[k];
    AccountingStep st;
    st.k = k;
    st.T = Tk;
    st.J = Jk;
    if (!is_diffeo_on(g, Tk)) {
      st.violations.push_back("g not a diffeomorphism on g^k(T)");
      rep.hypotheses_ok = false;
      rep.steps.push_back(st);
      break;
    }
    if (!(Tk.length() < kappa)) st.violations.push_back("|g^k(T)| >= kappa");
    if (!(max_overlap_ratio(Tk, S) < kappa)) st.violations.push_back("|g^k(T) ∩ E_j| >= kappa |E_j|");
    if (!st.violations.empty()) rep.hypotheses_ok = false;
    st.in_W = std::any_of(region_W.begin(), region_W.end(),
                          [&](const auto& W) { return W.intersects(Tk); });
    st.B = distortion_unchecked(g, Tk, Jk);
    st.log_B = std::log(st.B);
    rep.log_B_total += st.log_B;
    if (st.in_W) {
      rep.log_B_inside_W += st.log_B;
    } else {
      rep.C = std::max(rep.C, schwarzian_sup(g, Tk, {256, 2}));
    }
    rep.steps.push_back(st);
    Jk = OrientedInterval::hull(g.value(Jk.lo()), g.value(Jk.hi()));
  }
  for (auto& st : rep.steps)
    if (!st.in_W) st.step_bound = 1.0 - rep.C * st.T.length() * st.T.length();
  rep.inside_W_bound = -16.0 * kappa * rep.N * rep.d * rep.d;
  rep.negative_contribution_bound = -rep.C * kappa * rep.N * rep.phase_length + rep.inside_W_bound;

  const MapModel gm = MapModel::power(g, m);
  if (is_diffeo_on(gm, chain.head())) rep.log_B_direct = std::log(distortion_unchecked(gm, chain.head(), J));
  return rep;
}

}  // namespace unidym

#endif  // UNIDYM_CRITICAL_INTERVALS_HPP
