#ifndef UNIDYM_EXPERIMENTS_HPP
#define UNIDYM_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "unidym/chains.hpp"
#include "unidym/config.hpp"
#include "unidym/critical_intervals.hpp"
#include "unidym/crossratio.hpp"
#include "unidym/cutting.hpp"
#include "unidym/errors.hpp"
#include "unidym/map_analysis.hpp"
#include "unidym/map_model.hpp"
#include "unidym/orbits.hpp"
#include "unidym/records.hpp"
#include "unidym/rng.hpp"
#include "unidym/schwarzian.hpp"

namespace unidym {

using ExperimentFn = std::function<std::vector<ResultRecord>(const Config&, std::uint64_t seed)>;

struct ExperimentInfo {
  std::string id;
  /// Config section read by the experiment.
  std::string module;
  std::string summary;
  ExperimentFn run;
};

namespace experiments {

inline constexpr double kPi = std::numbers::pi;

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline ResultRecord record(const std::string& exp, std::string case_id) {
  ResultRecord r;
  r.experiment = exp;
  r.case_id = std::move(case_id);
  return r;
}

/// Runs body(); a library error other than usage, I/O or invariant becomes a
/// flagged record so the sweep continues.
template <typename F>
void guarded(std::vector<ResultRecord>& out, const std::string& exp, const std::string& case_id, F&& body) {
  try {
    body();
  } catch (const UsageError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const InvariantError&) {
    throw;
  } catch (const Error& e) {
    ResultRecord r = record(exp, case_id);
    r.set("error_kind", to_string(e.kind()));
    r.flag(e.what());
    out.push_back(std::move(r));
  }
}

/// J strictly inside T with both gaps at least min_gap*|T|.
inline OrientedInterval random_inside(CounterRng& rng, const OrientedInterval& T, double min_gap = 0.01) {
  const double u = rng.uniform(min_gap, 1.0 - 3.0 * min_gap);
  const double v = rng.uniform(u + min_gap, 1.0 - min_gap);
  return {T.lo() + u * T.length(), T.lo() + v * T.length()};
}

inline MapModel family_member(const std::string& family, double p) {
  if (family == "logistic") return MapModel::logistic(p);
  if (family == "cubic_perturbation") return MapModel::cubic_perturbation(p);
  if (family == "odd_cubic") return MapModel::odd_cubic(p);
  throw UsageError("unknown map family " + family +
                   " (expected logistic, cubic_perturbation or odd_cubic)");
}

inline OrientedInterval family_region(const Config& cfg, const std::string& ns, const std::string& family) {
  const double lo = cfg.get_double(ns + ".region_lo", family == "logistic" ? 0.0 : -1.5);
  const double hi = cfg.get_double(ns + ".region_hi", family == "logistic" ? 1.0 : 1.5);
  if (!(lo < hi)) throw UsageError(ns + ".region_lo must be below region_hi");
  return {lo, hi};
}

/// Polynomial with derivative scale * prod (x - c_i) and value 0 at 0.
inline Polynomial integrate_roots(const std::vector<double>& roots, double scale) {
  Polynomial d{scale};
  for (double c : roots) d = d * Polynomial{-c, 1.0};
  std::vector<double> coeffs{0.0};
  for (int k = 0; k <= d.degree(); ++k) coeffs.push_back(d.coefficient(k) / (k + 1));
  return Polynomial(coeffs);
}

inline Polynomial random_polynomial(CounterRng& rng, int degree, double leading = 0.0) {
  std::vector<double> c;
  for (int k = 0; k <= degree; ++k) c.push_back(rng.uniform(-1.0, 1.0));
  if (leading != 0.0) c.back() = leading;
  else if (std::abs(c.back()) < 0.1) c.back() = c.back() < 0 ? -0.1 : 0.1;
  return Polynomial(c);
}

// ---------------------------------------------------------------- map_model

inline std::vector<ResultRecord> schwarzian_blowup(const Config& cfg, std::uint64_t) {
  const std::string exp = "schwarzian-blowup";
  const auto lambdas = cfg.get_list("map_model.lambdas", {1.0, 0.1, 0.01, 0.001});
  const int grid = cfg.get_int("map_model.grid_points", 201);
  const double half = cfg.get_double("map_model.grid_half_width", 1.0);
  const double rel_tol = cfg.get_double("map_model.rel_tol", 1e-12);
  const double grid_tol = cfg.get_double("map_model.grid_tol", 1e-10);
  std::vector<ResultRecord> out;
  for (double lam : lambdas) {
    guarded(out, exp, "S0 lambda=" + fmt(lam), [&] {
      const MapModel f = MapModel::cubic_perturbation(lam);
      const double s = schwarzian_at(f, 0.0);
      const double expect = 6.0 / lam;
      const double rel = std::abs(s - expect) / std::abs(expect);
      ResultRecord r = record(exp, "S0 lambda=" + fmt(lam));
      r.set("lambda", lam).set("closed_form", expect).set("relative_error", rel).set("tolerance", rel_tol);
      r.judge(s, expect, rel_tol - rel);
      out.push_back(r);

      double worst = 0.0, worst_x = 0.0;
      for (int i = 0; i < grid; ++i) {
        const double x = grid == 1 ? 0.0 : -half + 2.0 * half * i / (grid - 1);
        const double d = lam + 3.0 * x * x;
        const double closed = 6.0 * (lam - 6.0 * x * x) / (d * d);
        const double err = std::abs(schwarzian_at(f, x) - closed) / std::max(1.0, std::abs(closed));
        if (err > worst) {
          worst = err;
          worst_x = x;
        }
      }
      ResultRecord g = record(exp, "grid lambda=" + fmt(lam));
      g.set("lambda", lam).set("grid_points", grid).set("worst_x", worst_x).set("tolerance", grid_tol);
      g.judge(worst, grid_tol, grid_tol - worst);
      out.push_back(g);
    });
  }
  return out;
}

// ---------------------------------------------------------------- crossratio

inline std::vector<ResultRecord> moebius_neutrality(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "moebius-neutrality";
  const int maps = cfg.get_int("crossratio.maps", 1000);
  const int points = cfg.get_int("crossratio.points", 100);
  const double tol = cfg.get_double("crossratio.tol", 1e-10);
  std::vector<ResultRecord> out;
  const CounterRng root(seed);
  for (int i = 0; i < maps; ++i) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(i));
    const std::string id = "map " + std::to_string(i);
    guarded(out, exp, id, [&] {
      double a, b, c, d;
      do {
        a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2), d = rng.uniform(-2, 2);
      } while (std::abs(a * d - b * c) < 0.1);
      const MapModel f = MapModel::mobius(a, b, c, d);
      // T of length >= 0.1 at distance >= |T|/2 from the pole.
      OrientedInterval T;
      for (;;) {
        const double lo = rng.uniform(-3, 3), len = rng.uniform(0.1, 2.0);
        T = OrientedInterval(lo, lo + len);
        if (c == 0.0 || T.distance(-d / c) >= 0.5 * len) break;
      }
      double err_B = 0.0, err_S = 0.0;
      for (int k = 0; k < 10; ++k) {
        const OrientedInterval J = random_inside(rng, T, 0.05);
        err_B = std::max(err_B, std::abs(distortion(f, T, J) - 1.0));
      }
      for (int k = 0; k < points; ++k) {
        const double x = T.lo() + T.length() * (k + 0.5) / points;
        err_S = std::max(err_S, std::abs(schwarzian_at(f, x)));
      }
      ResultRecord r = record(exp, id);
      r.set("a", a).set("b", b).set("c", c).set("d", d).set("T_lo", T.lo()).set("T_hi", T.hi());
      r.set("B_error", err_B).set("S_max", err_S);
      const double m = std::max(err_B, err_S);
      r.judge(m, tol, tol - m);
      out.push_back(r);
    });
  }
  return out;
}

inline std::vector<ResultRecord> minimum_principle(const Config& cfg, std::uint64_t) {
  const std::string exp = "minimum-principle";
  const double rho = cfg.get_double("crossratio.rho", 0.1);
  const int samples = cfg.get_int("crossratio.samples", 96);
  struct Case {
    std::string id;
    MapModel f;
    int power;
    OrientedInterval T;
    MinimumPrincipleReport::Status expected;
  };
  using S = MinimumPrincipleReport::Status;
  const std::vector<Case> cases{
      {"logistic a=4 on [0.02,0.2]", MapModel::logistic(4.0), 1, {0.02, 0.2}, S::verified},
      {"logistic a=4 squared on [0.02,0.1]", MapModel::logistic(4.0), 2, {0.02, 0.1}, S::verified},
      {"logistic a=3.9 cubed on [0.01,0.03]", MapModel::logistic(3.9), 3, {0.01, 0.03}, S::verified},
      {"x^3+0.1x on [-1,1] (positive Schwarzian)", MapModel::cubic_perturbation(0.1), 1, {-1.0, 1.0},
       S::hypothesis_failed},
      {"x/2 on [0,1] (contracting)", MapModel::affine(0.5, 0.0), 1, {0.0, 1.0}, S::counterexample},
  };
  auto name = [](S s) {
    return s == S::verified ? "verified" : s == S::counterexample ? "counterexample" : "hypothesis_failed";
  };
  std::vector<ResultRecord> out;
  for (const auto& c : cases) {
    guarded(out, exp, c.id, [&] {
      const auto rep = minimum_principle_check(c.f, c.power, c.T, rho, samples);
      ResultRecord r = record(exp, c.id);
      r.set("power", c.power).set("rho", rho).set("outcome", name(rep.status)).set("expected", name(c.expected));
      r.set("min_distortion_cubed", rep.min_distortion_cubed).set("distortion_threshold", rep.distortion_threshold);
      r.set("pairs_checked", static_cast<double>(rep.pairs_checked));
      r.measured = rep.verified() ? rep.min_sampled_derivative : rep.derivative;
      r.bound = 1.0 + rho;
      r.margin = rep.status == c.expected ? 0.0 : -1.0;
      r.status = rep.status == c.expected ? RecordStatus::pass : RecordStatus::fail;
      if (!rep.reason.empty()) r.flags.push_back(rep.reason);
      out.push_back(r);
    });
  }
  return out;
}

// ---------------------------------------------------------------- schwarzian

inline std::vector<ResultRecord> cos_bound_sweep(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "cos-bound-sweep";
  const int cases = cfg.get_int("schwarzian.cases", 500);
  const double slack = cfg.get_double("schwarzian.slack_tol", 1e-9);
  const double half_pi2 = kPi * kPi / 2.0;
  std::vector<ResultRecord> out;
  const CounterRng root(seed);
  for (int i = 0; i < cases; ++i) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(i));
    const std::string id = "case " + std::to_string(i);
    guarded(out, exp, id, [&] {
      for (int attempt = 0; attempt < 200; ++attempt) {
        const long kind = rng.integer(0, 2);
        std::string fam;
        MapModel f;
        OrientedInterval T;
        double C = 0.0;
        if (kind == 0) {
          const double C0 = rng.uniform(0.5, 20.0);
          const double L = rng.uniform(0.2, 1.0) * 0.97 * std::sqrt(half_pi2 / C0);
          const double lo = rng.uniform(-1.0, 1.0);
          T = OrientedInterval(lo, lo + L);
          const double room = kPi / (2.0 * std::sqrt(C0 / 2.0)) - L / 2.0;
          f = MapModel::constant_schwarzian(C0, T.midpoint() + rng.uniform(-0.95, 0.95) * room);
          C = C0 * (1.0 + rng.uniform(0.0, 0.05));
          fam = "constant-schwarzian";
        } else if (kind == 1) {
          f = MapModel::polynomial(random_polynomial(rng, static_cast<int>(rng.integer(3, 5))));
          const double lo = rng.uniform(-1.0, 1.0);
          T = OrientedInterval(lo, lo + rng.uniform(0.05, 1.0));
          if (!is_diffeo_on(f, T)) continue;
          C = std::max(schwarzian_sup(f, T), 0.0) + rng.uniform(0.01, 1.0);
          if (!(C * T.length() * T.length() < 0.99 * half_pi2))
            T = OrientedInterval(T.lo(), T.lo() + std::sqrt(0.9 * half_pi2 / C));
          fam = "polynomial";
        } else {
          f = MapModel::logistic(rng.uniform(1.0, 4.0));
          const bool left = rng.uniform() < 0.5;
          const double lo = rng.uniform(0.0, 0.4), len = rng.uniform(0.01, 0.49 - lo);
          T = left ? OrientedInterval(lo, lo + len) : OrientedInterval(1.0 - lo - len, 1.0 - lo);
          C = rng.uniform(0.01, 5.0);
          fam = "logistic";
        }
        const OrientedInterval J = random_inside(rng, T, 0.001);
        const auto rep = verify_cos_bound(f, T, J, C);
        if (!rep.hypothesis_ok) continue;
        ResultRecord r = record(exp, id);
        r.set("family", fam).set("map", f.describe()).set("C", C).set("T_lo", T.lo()).set("T_hi", T.hi());
        r.set("J_lo", J.lo()).set("J_hi", J.hi()).set("sup_S", rep.schwarzian_estimate);
        r.set("C_T2", C * T.length() * T.length());
        r.judge(rep.measured_B, rep.bound_value, rep.margin, slack);
        out.push_back(r);
        return;
      }
      throw NumericError("no admissible configuration found");
    });
  }
  return out;
}

inline std::vector<ResultRecord> sinh_bound_sweep(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "sinh-bound-sweep";
  const int cases = cfg.get_int("schwarzian.cases", 500);
  const double slack = cfg.get_double("schwarzian.slack_tol", 1e-9);
  std::vector<ResultRecord> out;
  {
    ResultRecord r = record(exp, "arithmetic C=2 |T|=1 delta=0.5");
    const double p = sinh_bound(2.0, 1.0, 0.5), s = sinh_secondary_bound(2.0, 1.0, 0.5);
    r.set("C", 2.0).set("T_length", 1.0).set("delta", 0.5);
    r.judge(p, s, p - s);
    out.push_back(r);
  }
  const CounterRng root(seed);
  for (int i = 0; i < cases; ++i) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(i));
    const std::string id = "case " + std::to_string(i);
    guarded(out, exp, id, [&] {
      for (int attempt = 0; attempt < 200; ++attempt) {
        const long kind = rng.integer(0, 2);
        MapModel f;
        std::vector<double> breaks;
        OrientedInterval window;
        std::string fam;
        if (kind == 0) {
          f = MapModel::logistic(rng.uniform(0.5, 4.0));
          breaks = {0.5};
          window = {0.0, 1.0};
          fam = "logistic";
        } else if (kind == 1) {
          const double mu = rng.uniform(-3.0, -0.1);
          f = MapModel::odd_cubic(mu);
          breaks = {-std::sqrt(-mu / 3.0), std::sqrt(-mu / 3.0)};
          window = {-2.0, 2.0};
          fam = "odd-cubic";
        } else {
          const int k = static_cast<int>(rng.integer(2, 4));
          for (int j = 0; j < k; ++j) breaks.push_back(rng.uniform(-1.0, 1.0));
          std::sort(breaks.begin(), breaks.end());
          f = MapModel::polynomial(integrate_roots(breaks, rng.uniform() < 0.5 ? -1.0 : 1.0));
          window = {-2.0, 2.0};
          fam = "real-critical-polynomial";
        }
        std::vector<double> cuts{window.lo()};
        cuts.insert(cuts.end(), breaks.begin(), breaks.end());
        cuts.push_back(window.hi());
        const std::size_t gap = static_cast<std::size_t>(rng.integer(0, static_cast<long>(cuts.size()) - 2));
        const OrientedInterval R(cuts[gap], cuts[gap + 1]);
        if (R.length() < 0.02) continue;
        const double inset = 0.005 * R.length();
        const double len = rng.uniform(0.01, 0.98) * (R.length() - 2 * inset);
        const double lo = R.lo() + inset + rng.uniform() * (R.length() - 2 * inset - len);
        const double delta = rng.uniform(0.05, 2.0);
        const OrientedInterval J = OrientedInterval::centered(lo + len / 2, len / 2 / (1 + 2 * delta));
        const OrientedInterval T = scaled_neighborhood(J, delta);
        if (!is_diffeo_on(f, T)) continue;
        const double sup = schwarzian_sup(f, T);
        if (!(sup < 0.0)) continue;
        const double C = -sup * (1.0 - 1e-6 - 0.5 * rng.uniform());
        const auto rep = verify_sinh_bound(f, J, delta, C);
        if (!rep.hypothesis_ok) continue;
        ResultRecord r = record(exp, id);
        r.set("family", fam).set("map", f.describe()).set("C", C).set("delta", delta);
        r.set("J_lo", J.lo()).set("J_hi", J.hi()).set("T_length", T.length());
        r.set("secondary_bound", rep.secondary_bound).set("secondary_margin", rep.secondary_margin);
        r.set("primary_minus_secondary", rep.bound_value - rep.secondary_bound);
        const double m = std::min({rep.margin, rep.secondary_margin, rep.bound_value - rep.secondary_bound});
        r.judge(rep.measured_B, rep.bound_value, m, slack);
        out.push_back(r);
        return;
      }
      throw NumericError("no admissible configuration found");
    });
  }
  return out;
}

inline std::vector<ResultRecord> cos_sharpness(const Config& cfg, std::uint64_t) {
  const std::string exp = "cos-sharpness";
  const auto factors = cfg.get_list("schwarzian.sharpness_factors", {0.9, 1.0, 1.2, 1.5, 1.9});
  const double threshold = cfg.get_double("schwarzian.sharpness_threshold", 0.05);
  const int centers = cfg.get_int("schwarzian.sharpness_centers", 241);
  const int j_steps = cfg.get_int("schwarzian.sharpness_j_steps", 48);
  std::vector<ResultRecord> out;
  double best = INFINITY;
  for (double k : factors) {
    const double C = k * kPi * kPi;
    const std::string id = "C=" + fmt(k) + "pi^2";
    guarded(out, exp, id, [&] {
      const auto w = constant_schwarzian_min_distortion(C, centers, j_steps);
      ResultRecord r = record(exp, id);
      r.set("C", C).set("C_over_pi2", k).set("center", w.center).set("J_lo", w.J.lo()).set("J_hi", w.J.hi());
      r.set("cos_bound_applies", C < kPi * kPi / 2.0);
      r.judge(w.min_B, threshold, threshold - w.min_B);
      if (r.status == RecordStatus::fail) {
        r.status = RecordStatus::flag;
        r.flags.push_back(C <= kPi * kPi ? "constant-Schwarzian family cannot reach the threshold for C <= pi^2"
                                         : "threshold not reached at this C");
      }
      if (C > kPi * kPi && C < 2.0 * kPi * kPi) best = std::min(best, w.min_B);
      out.push_back(r);
    });
  }
  if (!factors.empty()) {
    ResultRecord r = record(exp, "witness with pi^2 < C < 2pi^2");
    r.judge(best, threshold, threshold - best);
    out.push_back(r);
  }
  return out;
}

inline std::vector<ResultRecord> ode_comparison(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "ode-comparison";
  const int cases = cfg.get_int("schwarzian.ode_cases", 40);
  const int samples = cfg.get_int("schwarzian.ode_samples", 256);
  const double slack = cfg.get_double("schwarzian.slack_tol", 1e-9);
  struct Case {
    std::string id;
    MapModel f;
    OrientedInterval T;
    ComparisonSign sign;
  };
  std::vector<Case> list{
      {"constant Schwarzian C=4 (equality)", MapModel::constant_schwarzian(4.0, 0.5), {0.0, 1.0},
       ComparisonSign::positive},
      {"x^3+0.5x on [-0.3,0.3]", MapModel::cubic_perturbation(0.5), {-0.3, 0.3}, ComparisonSign::positive},
      {"logistic a=4 on [0.05,0.4]", MapModel::logistic(4.0), {0.05, 0.4}, ComparisonSign::negative},
      {"odd cubic mu=-1 on [0.7,1.5]", MapModel::odd_cubic(-1.0), {0.7, 1.5}, ComparisonSign::negative},
  };
  const CounterRng root(seed);
  for (int i = 0; i < cases; ++i) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(i));
    for (int attempt = 0; attempt < 100; ++attempt) {
      const MapModel f = MapModel::polynomial(random_polynomial(rng, 4));
      const double lo = rng.uniform(-1.0, 1.0);
      const OrientedInterval T(lo, lo + rng.uniform(0.1, 1.0));
      if (!is_diffeo_on(f, T)) continue;
      // Stay away from critical points so 1/sqrt|Df| is well resolved.
      double min_d = INFINITY;
      for (int k = 0; k <= 64; ++k) min_d = std::min(min_d, std::abs(f.jet(T.lo() + T.length() * k / 64).d1));
      if (min_d < 0.1) continue;
      const double C = std::max(schwarzian_sup(f, T), 0.0) + 1e-9;
      if (!(std::sqrt(C / 2.0) * T.length() / 2.0 < kPi / 2.0)) continue;
      list.push_back({"random " + std::to_string(i), f, T, ComparisonSign::positive});
      break;
    }
  }
  std::vector<ResultRecord> out;
  for (const auto& c : list) {
    guarded(out, exp, c.id, [&] {
      double C;
      if (c.sign == ComparisonSign::positive) {
        C = std::max(schwarzian_sup(c.f, c.T), 0.0) + 1e-9;
        // The comparison solution must stay positive on T.
        if (!(std::sqrt(C / 2.0) * c.T.length() / 2.0 < kPi / 2.0))
          throw HypothesisError("C|T|^2 too large for the cos comparison");
      } else {
        C = -schwarzian_sup(c.f, c.T);
        if (!(C > 0.0)) throw HypothesisError("Schwarzian not negative on T");
      }
      const auto rep = ode_comparison_oracle(c.f, c.T, c.T.lo(), c.T.hi(), C, c.sign, samples);
      ResultRecord r = record(exp, c.id);
      r.set("map", c.f.describe()).set("T_lo", c.T.lo()).set("T_hi", c.T.hi()).set("C", C);
      r.set("sign", c.sign == ComparisonSign::positive ? "positive" : "negative");
      r.set("max_abs_difference", rep.max_abs_difference).set("integration_residual", rep.integration_residual);
      r.judge(rep.max_excess, 0.0, -rep.max_excess, slack);
      if (!(rep.integration_residual < 1e-8)) r.flag("integration residual above 1e-8");
      out.push_back(r);
    });
  }
  return out;
}

// -------------------------------------------------------- critical_intervals

inline std::vector<ResultRecord> critical_intervals_exp(const Config& cfg, std::uint64_t) {
  const std::string exp = "critical-intervals";
  const auto lambdas = cfg.get_list("critical_intervals.lambdas", {1.0, 0.5, 0.1, 0.01});
  const double tol = cfg.get_double("critical_intervals.endpoint_tol", 1e-12);
  const double rel_tol = cfg.get_double("critical_intervals.rel_tol", 1e-10);
  std::vector<ResultRecord> out;
  for (double lam : lambdas) {
    const std::string id = "x^3+lambda x lambda=" + fmt(lam);
    guarded(out, exp, id, [&] {
      const MapModel f = MapModel::cubic_perturbation(lam);
      const auto S = compute_critical_intervals(f);
      if (S.intervals.size() != 1) throw InvariantError("expected exactly one critical interval");
      const OrientedInterval E = S.intervals.front().E();
      const double half = 2.0 * std::sqrt(lam / 3.0);
      const double err = std::max(std::abs(E.lo() + half), std::abs(E.hi() - half));
      ResultRecord r = record(exp, id + " E");
      r.set("lambda", lam).set("E_lo", E.lo()).set("E_hi", E.hi()).set("expected_half_width", half);
      r.set("d_E", S.d_E()).set("d_E_limit", 1.0);
      r.judge(err, tol, std::min(tol - err, 1.0 - S.d_E()));
      out.push_back(r);

      const double s0 = schwarzian_at(f, 0.0);
      const double bound = schwarzian_upper_bound(f, 0.0, S);
      const double rel = std::abs(s0 - bound) / std::abs(bound);
      ResultRecord q = record(exp, id + " equality at 0");
      q.set("lambda", lam).set("S0", s0).set("relative_error", rel);
      q.judge(s0, bound, rel_tol - rel);
      out.push_back(q);
    });
  }
  guarded(out, exp, "x^4+x^2", [&] {
    const MapModel f = MapModel::polynomial(Polynomial{0.0, 0.0, 1.0, 0.0, 1.0});
    const auto S = compute_critical_intervals(f);
    const OrientedInterval E = S.intervals.front().E();
    const double err = std::max(std::abs(E.lo() + std::sqrt(2.0)), std::abs(E.hi() - std::sqrt(2.0)));
    ResultRecord r = record(exp, "x^4+x^2 E");
    r.set("E_lo", E.lo()).set("E_hi", E.hi()).set("d_E", S.d_E()).set("d_E_limit", 1.5);
    r.judge(err, tol, std::min(tol - err, 1.5 - S.d_E()));
    out.push_back(r);
    // Sf stays below 2 d_E / b^2 on the critical interval, away from the
    // real critical point at 0.
    double worst = -INFINITY;
    for (int i = 1; i <= 400; ++i) {
      const double x = E.lo() + E.length() * i / 401.0;
      if (std::abs(x) < 1e-3) continue;
      worst = std::max(worst, schwarzian_at(f, x) - schwarzian_upper_bound(f, x, S));
    }
    ResultRecord q = record(exp, "x^4+x^2 bound on E");
    q.judge(worst, 0.0, -worst);
    out.push_back(q);
  });
  return out;
}

struct PolyFamily {
  std::string name;
  std::function<MapModel(CounterRng&)> make;
  OrientedInterval window;
};

inline std::vector<PolyFamily> excep_families() {
  return {
      {"x^3+0.3x", [](CounterRng&) { return MapModel::cubic_perturbation(0.3); }, {-2.0, 2.0}},
      {"x^4+x^2", [](CounterRng&) { return MapModel::polynomial(Polynomial{0.0, 0.0, 1.0, 0.0, 1.0}); },
       {-3.0, 3.0}},
      {"random degree 6",
       [](CounterRng& rng) {
         for (;;) {
           const MapModel f = MapModel::polynomial(random_polynomial(rng, 6, 1.0));
           const auto S = compute_critical_intervals(f);
           int real = 0;
           for (const auto& c : critical_points(f, {-8.0, 8.0})) real += c.multiplicity;
           // d_E verified when real and complex critical points account for all 5 roots of Df.
           if (S.d_E() >= 1 && real + 2 * S.d_E() == 5) return f;
         }
       },
       {-2.0, 2.0}},
  };
}

inline std::vector<ResultRecord> excep_part1(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "excep-part1";
  const int per_family = cfg.get_int("critical_intervals.configs_per_family", 200);
  const int max_pieces = cfg.get_int("critical_intervals.max_pieces", 6);
  std::vector<ResultRecord> out;
  const CounterRng root(seed);
  const auto fams = excep_families();
  for (std::size_t fi = 0; fi < fams.size(); ++fi) {
    const auto& fam = fams[fi];
    for (int i = 0; i < per_family; ++i) {
      CounterRng rng = root.substream(fi * 100000 + static_cast<std::uint64_t>(i));
      const std::string id = fam.name + " " + std::to_string(i);
      guarded(out, exp, id, [&] {
        const MapModel f = fam.make(rng);
        const auto S = compute_critical_intervals(f);
        const int d = S.d_E();
        double minE = INFINITY;
        for (const auto& ci : S.intervals) minE = std::min(minE, ci.length());
        const double kappa = rng.uniform(0.05, 0.95) / (4.0 * std::sqrt(std::max(d, 1)));
        const int pieces = static_cast<int>(rng.integer(1, max_pieces));
        std::vector<std::pair<OrientedInterval, OrientedInterval>> Ts;
        for (int k = 0; k < pieces; ++k) {
          for (int attempt = 0; attempt < 1000; ++attempt) {
            const double len = rng.uniform() < 0.5 ? rng.uniform(0.01, 0.99) * kappa * minE
                                                   : rng.uniform(0.01, 1.0);
            const double c = rng.uniform(fam.window.lo(), fam.window.hi());
            const OrientedInterval T = OrientedInterval::centered(c, len / 2);
            if (!is_diffeo_on(f, T) || !(max_overlap_ratio(T, S) < kappa)) continue;
            Ts.emplace_back(T, random_inside(rng, T, 0.01));
            break;
          }
        }
        if (Ts.empty()) throw NumericError("no admissible pieces found");
        std::vector<OrientedInterval> just;
        for (const auto& [T, J] : Ts) just.push_back(T);
        const int N = intersection_multiplicity(just);
        const auto rep = verify_excep_part1(f, Ts, kappa, N, &S);
        ResultRecord r = record(exp, id);
        r.set("family", fam.name).set("map", f.describe()).set("kappa", kappa).set("N", N);
        r.set("pieces", static_cast<int>(Ts.size())).set("d_E", d).set("log_product_B", rep.log_product_B);
        r.judge(rep.product_B, rep.bound, rep.margin);
        for (const auto& v : rep.violations) r.flag(v);
        out.push_back(r);
      });
    }
  }
  return out;
}

inline std::vector<ResultRecord> excep_part2(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "excep-part2";
  const int per_family = cfg.get_int("critical_intervals.configs_per_family", 200);
  std::vector<ResultRecord> out;
  const CounterRng root(seed);
  const auto fams = excep_families();
  for (std::size_t fi = 0; fi < fams.size(); ++fi) {
    const auto& fam = fams[fi];
    for (int i = 0; i < per_family; ++i) {
      CounterRng rng = root.substream(fi * 100000 + static_cast<std::uint64_t>(i));
      const std::string id = fam.name + " " + std::to_string(i);
      guarded(out, exp, id, [&] {
        const MapModel f = fam.make(rng);
        const auto S = compute_critical_intervals(f);
        const auto cps = critical_points(f, fam.window.scaled(2.0));
        const int d = std::max(S.d_E(), 1);
        for (int attempt = 0; attempt < 2000; ++attempt) {
          const double lambda = rng.uniform(1.1, 4.0);
          const double delta = rng.uniform(0.05, 1.0);
          const double kappa = rng.uniform(0.1, 0.95) / (13.0 * std::sqrt(d));
          const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
          double lo_near, len;
          const long pick = rng.integer(0, static_cast<long>(S.intervals.size() + cps.size()) - 1);
          if (pick < static_cast<long>(S.intervals.size())) {
            const auto& ci = S.intervals[static_cast<std::size_t>(pick)];
            const double e = side > 0 ? ci.E().hi() : ci.E().lo();
            const double o = rng.uniform(0.0, 0.9) * kappa * ci.length() / lambda;
            len = (2.0 * ci.b + o) * rng.uniform(1.05, 3.0);
            lo_near = e - side * o;
          } else {
            const double c = cps[static_cast<std::size_t>(pick) - S.intervals.size()].location;
            len = rng.uniform(0.01, 1.0);
            lo_near = c + side * rng.uniform(0.01, 1.0) * (lambda - 1.0) * len / 2.0;
          }
          const double mid = lo_near + side * len / 2.0;
          const OrientedInterval J = OrientedInterval::centered(mid, len / 2.0 / (1.0 + 2.0 * delta));
          const OrientedInterval T = scaled_neighborhood(J, delta);
          const auto rep = verify_excep_part2(f, T, J, lambda, kappa, delta, &S);
          if (!rep.hypotheses_ok || rep.which == ExcepPart2Report::Case::not_applicable) continue;
          ResultRecord r = record(exp, id);
          r.set("family", fam.name).set("map", f.describe()).set("lambda", lambda).set("kappa", kappa);
          r.set("delta", delta).set("T_lo", T.lo()).set("T_hi", T.hi()).set("case_kind", to_string(rep.which));
          r.set("d_E", rep.d_E);
          r.judge(rep.B, rep.bound, rep.margin);
          out.push_back(r);
          return;
        }
        throw NumericError("no admissible configuration found");
      });
    }
  }
  return out;
}

inline std::vector<ResultRecord> composed_accounting(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "composed-accounting";
  const int cases = cfg.get_int("critical_intervals.accounting_cases", 100);
  const double kappa = cfg.get_double("critical_intervals.accounting_kappa", 0.2);
  const double w = cfg.get_double("critical_intervals.w", 0.05);
  const auto params = cfg.get_list("critical_intervals.accounting_params", {3.7, 3.9, 4.0});
  std::vector<ResultRecord> out;
  if (params.empty()) return out;
  const CounterRng root(seed);
  for (int i = 0; i < cases; ++i) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(i));
    const std::string id = "case " + std::to_string(i);
    guarded(out, exp, id, [&] {
      const double a = params[static_cast<std::size_t>(rng.integer(0, static_cast<long>(params.size()) - 1))];
      const MapModel g = MapModel::logistic(a);
      for (int attempt = 0; attempt < 200; ++attempt) {
        const int m = static_cast<int>(rng.integer(2, 8));
        const double x0 = rng.uniform(0.01, 0.99);
        const auto orbit = forward_orbit(g, x0, m);
        const auto Tm = OrientedInterval::centered(orbit.back(), rng.uniform(0.002, 0.05)).intersection({0.0, 1.0});
        if (!Tm || Tm->is_degenerate()) continue;
        const Chain c = pull_back_chain(g, *Tm, orbit);
        bool diffeo = true;
        for (int k = 0; k < m; ++k) diffeo = diffeo && is_diffeo_on(g, c.intervals[k]);
        if (!diffeo || c.head().is_degenerate()) continue;
        const OrientedInterval J = random_inside(rng, c.head(), 0.01);
        AccountingOptions opt;
        opt.w = w;
        const auto rep = composed_distortion_accounting(g, c, J, kappa, opt);
        if (!rep.hypotheses_ok) continue;
        ResultRecord r = record(exp, id);
        r.set("a", a).set("m", m).set("x0", x0).set("N", rep.N).set("C", rep.C).set("d", rep.d);
        r.set("log_B_direct", rep.log_B_direct).set("log_B_inside_W", rep.log_B_inside_W);
        r.set("inside_W_bound", rep.inside_W_bound);
        r.set("composition_error", std::abs(rep.log_B_direct - rep.log_B_total));
        r.judge(rep.log_B_total, rep.negative_contribution_bound,
                rep.log_B_total - rep.negative_contribution_bound);
        if (!(std::abs(rep.log_B_direct - rep.log_B_total) < 1e-6)) r.flag("step product disagrees with direct distortion");
        out.push_back(r);
        return;
      }
      throw NumericError("no admissible chain found");
    });
  }
  return out;
}

// -------------------------------------------------------------------- chains

inline std::vector<ResultRecord> chain_pullback(const Config& cfg, std::uint64_t) {
  const std::string exp = "chain-pullback";
  const auto params = cfg.get_list("chains.logistic_params", {3.2, 3.5, 3.83, 4.0});
  const int n_max = cfg.get_int("chains.n_max", 8);
  const double tol = cfg.get_double("chains.endpoint_tol", 1e-10);
  std::vector<ResultRecord> out;
  guarded(out, exp, "logistic a=4 pullback of [0,0.5] through 0.1", [&] {
    const MapModel g = MapModel::logistic(4.0);
    const Chain c = pull_back_chain(g, {0.0, 0.5}, forward_orbit(g, 0.1, 1));
    const double expect = (1.0 - std::sqrt(0.5)) / 2.0;
    const double err = std::abs(c.head().hi() - expect);
    ResultRecord r = record(exp, "logistic a=4 pullback of [0,0.5] through 0.1");
    r.set("T0_lo", c.head().lo()).set("T0_hi", c.head().hi()).set("expected_hi", expect);
    r.judge(err, tol, tol - err);
    out.push_back(r);
  });
  for (double a : params) {
    const MapModel g = MapModel::logistic(a);
    OrbitSearchResult found;
    bool ok = false;
    guarded(out, exp, "logistic a=" + fmt(a) + " orbit search", [&] {
      found = find_periodic_orbits_upto(g, n_max, {0.0, 1.0});
      ok = true;
    });
    if (!ok) continue;
    int idx = 0;
    for (const auto& o : found.all()) {
      const std::string id = "logistic a=" + fmt(a) + " period " + std::to_string(o.period) + " #" + std::to_string(idx++);
      guarded(out, exp, id, [&] {
        const auto rep = check_multiplicity_44(g, o.points);
        ResultRecord r = record(exp, id);
        r.set("a", a).set("period", o.period).set("p", rep.p).set("U_n_lo", rep.U_n.lo()).set("U_n_hi", rep.U_n.hi());
        r.set("multiplicity_open", rep.multiplicity_open).set("orbit_points_in_U_n", rep.orbit_points_in_U_n);
        r.judge(rep.multiplicity, 44.0, 44.0 - rep.multiplicity);
        out.push_back(r);
      });
    }
  }
  return out;
}

inline std::vector<ResultRecord> u_sequence(const Config& cfg, std::uint64_t) {
  const std::string exp = "u-sequence";
  const double kappa = cfg.get_double("chains.kappa", 0.1);
  struct Case {
    std::string id;
    MapModel g;
    int period;
    OrientedInterval region;
    bool smallest_point;
    std::optional<Domain> extended;
  };
  const std::vector<Case> cases{
      {"odd cubic mu=-1.2 fixed point 0", MapModel::odd_cubic(-1.2), 1, {-1.5, 1.5}, false,
       Domain::interval(-3.0, 3.0)},
      {"logistic a=3.2 2-cycle", MapModel::logistic(3.2), 2, {0.0, 1.0}, true, std::nullopt},
      {"logistic a=3.83 3-cycle", MapModel::logistic(3.83), 3, {0.0, 1.0}, true, std::nullopt},
      {"logistic a=3.5 4-cycle", MapModel::logistic(3.5), 4, {0.0, 1.0}, true, std::nullopt},
  };
  std::vector<ResultRecord> out;
  for (const auto& c : cases) {
    guarded(out, exp, c.id, [&] {
      const auto found = find_periodic_orbits_upto(c.g, std::max(2 * c.period, 2), c.region);
      const auto orbits = found.all();
      const PeriodicOrbit* orbit = nullptr;
      for (const auto& o : orbits) {
        if (o.period != c.period) continue;
        if (!c.smallest_point && !o.contains(0.0, 1e-9)) continue;
        orbit = &o;
        break;
      }
      if (!orbit) throw NumericError("periodic orbit not found");
      const double p = c.smallest_point ? orbit->points.front() : 0.0;
      const int n = orbit->orientation_preserving_period();
      const auto S = c.g.as_polynomial() && c.g.as_polynomial()->degree() >= 2 ? compute_critical_intervals(c.g)
                                                                              : CriticalIntervalSet{};
      USequenceOptions uopt;
      uopt.extended = c.extended;
      const auto seq = build_u_sequence(c.g, p, n, kappa, S, uopt);
      const auto packs = group_into_packs(orbits, c.g);
      const auto grp = pack_grouping_check(c.g, seq, packs);
      int mismatched = 0;
      for (bool b : grp.same_pack) mismatched += b ? 0 : 1;
      ResultRecord r = record(exp, c.id);
      r.set("p", p).set("n", n).set("kappa", kappa).set("U0_lo", seq.U_0().lo()).set("U0_hi", seq.U_0().hi());
      for (const auto* side : {&seq.right, &seq.left}) {
        const std::string s = side->side > 0 ? "right_" : "left_";
        for (CuttingKind k : {CuttingKind::critical, CuttingKind::boundary, CuttingKind::internal, CuttingKind::domain})
          r.set(s + to_string(k), side->count(k));
        r.set(s + "multiplicity", side->multiplicity);
      }
      r.set("invariant_violations", static_cast<int>(seq.invariant_violations.size()));
      r.set("maximality_failures", static_cast<int>(seq.maximality_failures.size()));
      r.set("grouping_applicable", grp.applicable).set("grouping_points", static_cast<int>(grp.others.size()));
      r.set("grouping_mismatches", mismatched);
      const double bad = static_cast<double>(seq.invariant_violations.size()) + mismatched;
      r.judge(bad, 0.0, -bad);
      for (const auto& v : seq.invariant_violations) r.flags.push_back(v);
      for (const auto& v : seq.maximality_failures) r.flag("not maximal: " + v);
      out.push_back(r);
    });
  }
  return out;
}

inline std::vector<ResultRecord> rho_envelope(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "rho-envelope";
  const int samples = cfg.get_int("chains.rho_samples", 400);
  const auto params = cfg.get_list("chains.rho_params", {3.9, 4.0});
  const int max_m = cfg.get_int("chains.rho_max_steps", 6);
  std::vector<ResultRecord> out;
  if (params.empty() || samples <= 0) return out;
  RhoAccumulator acc;
  const CounterRng root(seed);
  int skipped = 0;
  for (int i = 0; i < samples; ++i) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(i));
    try {
      const double a = params[static_cast<std::size_t>(rng.integer(0, static_cast<long>(params.size()) - 1))];
      const MapModel g = MapModel::logistic(a);
      const int m = static_cast<int>(rng.integer(1, max_m));
      const auto orbit = forward_orbit(g, rng.uniform(0.01, 0.99), m);
      const auto Tm = OrientedInterval::centered(orbit.back(), rng.uniform(0.005, 0.05)).intersection({0.0, 1.0});
      if (!Tm || Tm->is_degenerate()) {
        ++skipped;
        continue;
      }
      const Chain c = pull_back_chain(g, *Tm, orbit);
      bool diffeo = true;
      for (int k = 0; k < m; ++k) diffeo = diffeo && is_diffeo_on(g, c.intervals[k]);
      if (!diffeo) {
        ++skipped;
        continue;
      }
      acc.add(verify_pullback_cr(g, c, random_inside(rng, *Tm, 0.01)));
    } catch (const Error&) {
      ++skipped;
    }
  }
  auto emit_tables = [&](const std::vector<EnvelopeTable>& tables, const std::string& kind) {
    for (const auto& t : tables) {
      double prev = -INFINITY;
      for (std::size_t k = 0; k < t.points.size(); ++k) {
        const auto& p = t.points[k];
        ResultRecord r = record(exp, kind + " N=" + std::to_string(t.N) + " #" + std::to_string(k));
        r.set("envelope_kind", kind).set("N", t.N).set("x", p.x).set("envelope", p.envelope);
        r.set("isotonic", p.isotonic).set("skipped_samples", skipped);
        r.judge(p.envelope, prev, k == 0 ? 0.0 : p.envelope - prev);
        prev = p.envelope;
        out.push_back(r);
      }
    }
  };
  emit_tables(acc.distortion_envelopes(), "distortion");
  emit_tables(acc.space_envelopes(), "space");
  return out;
}

// -------------------------------------------------------------- orbits_packs

inline std::vector<ResultRecord> census_exp(const Config& cfg, std::uint64_t) {
  const std::string exp = "census";
  const std::string family = cfg.get_string("orbits_packs.family", "logistic");
  const auto params = cfg.get_list("orbits_packs.params", Config::parse_list("params", "2.8:3.57:200"));
  const OrientedInterval region = family_region(cfg, "orbits_packs", family);
  CensusOptions opt;
  opt.n_max = cfg.get_int("orbits_packs.n_max", 8);
  opt.rho = cfg.get_double("orbits_packs.rho", 0.05);
  opt.search.resolution = cfg.get_double("orbits_packs.resolution", opt.search.resolution);
  opt.basin.max_iters = cfg.get_int("orbits_packs.basin_iters", opt.basin.max_iters);
  const double max_exceptional = cfg.get_double("orbits_packs.max_exceptional", 2.0);
  std::vector<double> sorted = params;
  std::sort(sorted.begin(), sorted.end());
  const auto rows = census([&](double p) { return family_member(family, p); }, sorted, region, opt);
  std::vector<ResultRecord> out;
  int prev_d = -1;
  for (const auto& row : rows) {
    ResultRecord r = record(exp, family + " " + fmt(row.parameter));
    const bool jump = prev_d >= 0 && row.error.empty() && row.d_E != prev_d;
    const std::string jump_note = "d_E jumps from " + std::to_string(prev_d) + " to " + std::to_string(row.d_E);
    if (row.error.empty()) prev_d = row.d_E;
    r.set("parameter", row.parameter).set("orbit_count", row.orbit_count).set("pack_count", row.pack_count);
    r.set("exceptional_count", row.exceptional_count);
    r.set("min_nonexceptional_multiplier", row.min_nonexceptional_multiplier);
    int captured = 0;
    for (const auto& [x, pk] : row.critical_basins) captured += pk >= 0 ? 1 : 0;
    r.set("critical_points", static_cast<int>(row.critical_basins.size())).set("critical_in_basin", captured);
    r.set("first_critical_basin", row.critical_basins.empty() ? -1 : row.critical_basins.front().second);
    r.set("d_E", row.d_E);
    if (!row.error.empty()) {
      r.flag(row.error);
      out.push_back(r);
      continue;
    }
    const double gap = std::isfinite(row.min_nonexceptional_multiplier)
                           ? row.min_nonexceptional_multiplier - (1.0 + opt.rho)
                           : 1.0;
    r.judge(row.exceptional_count, max_exceptional, std::min(max_exceptional - row.exceptional_count, gap));
    if (row.degenerate) r.flag("degenerate map");
    if (jump) r.flag(jump_note);
    for (const auto& f : row.flags) r.flag(f);
    out.push_back(r);
  }
  return out;
}

inline std::vector<ResultRecord> first_entry(const Config& cfg, std::uint64_t seed) {
  const std::string exp = "first-entry";
  const int samples = cfg.get_int("orbits_packs.first_entry_samples", 1000);
  const int n_max = cfg.get_int("orbits_packs.first_entry_n_max", 40);
  const double half = cfg.get_double("orbits_packs.first_entry_half_width", 0.05);
  const double lam = cfg.get_double("orbits_packs.first_entry_lambda", 0.1);
  std::vector<ResultRecord> out;
  CounterRng rng(seed);
  std::vector<double> xs, ys;
  for (int i = 0; i < samples; ++i) xs.push_back(rng.uniform(0.0, 1.0));
  for (int i = 0; i < samples; ++i) ys.push_back(rng.uniform(-0.3, 0.3));
  guarded(out, exp, "logistic a=4", [&] {
    const auto rep = first_entry_schwarzian_check(MapModel::logistic(4.0), OrientedInterval::centered(0.5, half), xs, n_max);
    ResultRecord r = record(exp, "logistic a=4");
    r.set("samples", rep.samples).set("entered", rep.entered).set("skipped", rep.skipped);
    r.set("max_schwarzian", rep.max_schwarzian);
    r.judge(rep.violations, 0.0, -rep.violations);
    out.push_back(r);
  });
  guarded(out, exp, "x^3+lambda x near 0", [&] {
    const auto rep = first_entry_schwarzian_check(MapModel::cubic_perturbation(lam), OrientedInterval::centered(0.0, half), ys, n_max);
    ResultRecord r = record(exp, "x^3+lambda x near 0");
    r.set("lambda", lam).set("samples", rep.samples).set("entered", rep.entered).set("skipped", rep.skipped);
    r.set("max_schwarzian", rep.max_schwarzian);
    // The verifier must detect the positive Schwarzian region.
    r.judge(rep.violations, 1.0, rep.violations - 1.0);
    out.push_back(r);
  });
  guarded(out, exp, "direct entry reduces to Sg", [&] {
    const MapModel g = MapModel::logistic(4.0);
    const std::vector<double> inside{0.47, 0.49, 0.51, 0.53};
    const auto rep = first_entry_schwarzian_check(g, OrientedInterval::centered(0.5, half), inside, 0);
    double worst = -INFINITY;
    for (double x : inside) worst = std::max(worst, schwarzian_at(g, x));
    ResultRecord r = record(exp, "direct entry reduces to Sg");
    r.set("max_Sg", worst).set("entered", rep.entered);
    r.judge(rep.violations, 0.0, (worst < 0) == (rep.violations == 0) ? 0.0 : -1.0);
    out.push_back(r);
  });
  return out;
}

inline std::vector<ResultRecord> quadratic_bound(const Config& cfg, std::uint64_t) {
  const std::string exp = "quadratic-bound";
  const int samples = cfg.get_int("orbits_packs.quadratic_samples", 10000);
  struct Case {
    std::string id;
    MapModel g;
    double c;
    OrientedInterval T;
  };
  const std::vector<Case> cases{
      {"1-2x^2", MapModel::polynomial(Polynomial{1.0, 0.0, -2.0}), 0.0, {-0.5, 0.5}},
      {"logistic a=4", MapModel::logistic(4.0), 0.5, {0.25, 0.75}},
  };
  std::vector<ResultRecord> out;
  for (const auto& c : cases) {
    guarded(out, exp, c.id, [&] {
      const auto rep = quadratic_schwarzian_bound_check(c.g, {c.c, 1}, c.T, samples);
      ResultRecord r = record(exp, c.id);
      r.set("A", rep.A).set("B", rep.B).set("samples", rep.samples).set("worst_ratio", rep.worst_ratio);
      r.judge(rep.violations, 0.0, -rep.violations);
      out.push_back(r);
    });
  }
  return out;
}

inline std::vector<ResultRecord> uniform_contraction(const Config& cfg, std::uint64_t) {
  const std::string exp = "uniform-contraction";
  const std::string family = cfg.get_string("orbits_packs.contraction_family", "logistic");
  const auto params = cfg.get_list("orbits_packs.contraction_params", {3.7, 3.8, 3.9, 4.0});
  const OrientedInterval region = family_region(cfg, "orbits_packs", family);
  ContractionOptions opt;
  opt.epsilon = cfg.get_double("orbits_packs.epsilon", 0.1);
  opt.n_max = cfg.get_int("orbits_packs.contraction_n_max", 8);
  opt.centers = cfg.get_int("orbits_packs.contraction_centers", 32);
  std::vector<ResultRecord> out;
  std::vector<double> sorted = params;
  std::sort(sorted.begin(), sorted.end());
  for (double p : sorted) {
    const std::string id = family + " " + fmt(p);
    guarded(out, exp, id, [&] {
      const auto row = uniform_contraction_scan(family_member(family, p), region, opt);
      ResultRecord r = record(exp, id);
      r.set("parameter", p).set("epsilon", opt.epsilon).set("max_component", row.max_component);
      r.set("intervals_tested", row.intervals_tested).set("neutral_flag", row.neutral_flag);
      r.judge(row.delta_hat, 0.0, row.delta_hat);
      if (row.delta_hat == 0.0) r.flag("no tested length keeps preimages below epsilon");
      if (row.neutral_flag) r.flag("neutral periodic orbit detected");
      out.push_back(r);
    });
  }
  return out;
}

}  // namespace experiments

/// Every experiment id with the config section it reads.
inline const std::vector<ExperimentInfo>& registry() {
  using namespace experiments;
  static const std::vector<ExperimentInfo> list{
      {"schwarzian-blowup", "map_model", "S(x^3+lambda x)(0) = 6/lambda and the closed form on a grid", schwarzian_blowup},
      {"moebius-neutrality", "crossratio", "Möbius maps preserve cross-ratio and have zero Schwarzian", moebius_neutrality},
      {"minimum-principle", "crossratio", "sampled minimum-principle checks with expected outcomes", minimum_principle},
      {"cos-bound-sweep", "schwarzian", "randomized cos^2 distortion bound cases", cos_bound_sweep},
      {"sinh-bound-sweep", "schwarzian", "randomized sinh and secondary distortion bound cases", sinh_bound_sweep},
      {"cos-sharpness", "schwarzian", "smallest distortion of constant-Schwarzian maps on [0,1]", cos_sharpness},
      {"ode-comparison", "schwarzian", "RK4 solution of phi'' = -(1/2) Sf phi against cos/cosh", ode_comparison},
      {"critical-intervals", "critical_intervals", "closed-form critical intervals and the equality witness", critical_intervals_exp},
      {"excep-part1", "critical_intervals", "product of distortions against exp(-16 kappa N d_E^2)", excep_part1},
      {"excep-part2", "critical_intervals", "distortion expansion near critical points and intervals", excep_part2},
      {"composed-accounting", "critical_intervals", "per-step distortion ledger along chains", composed_accounting},
      {"chain-pullback", "chains", "pullback endpoint and intersection multiplicity <= 44", chain_pullback},
      {"u-sequence", "chains", "U_k construction, cutting times and pack grouping", u_sequence},
      {"rho-envelope", "chains", "empirical pullback distortion and space envelopes", rho_envelope},
      {"census", "orbits_packs", "periodic orbits, packs and exceptional packs over a parameter grid", census_exp},
      {"first-entry", "orbits_packs", "sign of S(g^(n+1)) at first entry", first_entry},
      {"quadratic-bound", "orbits_packs", "Sg < -B^2/(A^2 |x-c|^2) near a quadratic critical point", quadratic_bound},
      {"uniform-contraction", "orbits_packs", "largest |J| whose preimages stay below epsilon", uniform_contraction},
  };
  return list;
}

inline const ExperimentInfo& find_experiment(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  std::string known;
  for (const auto& e : registry()) known += (known.empty() ? "" : ", ") + e.id;
  throw UsageError("unknown experiment id " + id + " (known: " + known + ")");
}

/// Seed precedence: explicit argument, then harness.seed, then 1.
inline std::uint64_t resolve_seed(const Config& cfg, std::optional<std::uint64_t> cli_seed) {
  return cli_seed ? *cli_seed : cfg.get_u64("harness.seed", 1);
}

inline std::vector<ResultRecord> run_experiment(const std::string& id, const Config& cfg, std::uint64_t seed) {
  cfg.validate();
  return find_experiment(id).run(cfg, seed);
}

}  // namespace unidym

#endif  // UNIDYM_EXPERIMENTS_HPP
