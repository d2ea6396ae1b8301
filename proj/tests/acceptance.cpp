// Acceptance checks. One line per criterion; exit status 1 if any is red.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "unidym/unidym.hpp"

using namespace unidym;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Tally {
  int pass = 0, fail = 0, flag = 0;
  std::string first_bad;
};

Tally tally(const std::vector<ResultRecord>& rs) {
  Tally t;
  for (const auto& r : rs) {
    if (r.status == RecordStatus::pass) {
      ++t.pass;
      continue;
    }
    r.status == RecordStatus::fail ? ++t.fail : ++t.flag;
    if (t.first_bad.empty()) {
      t.first_bad = r.case_id + " [" + to_string(r.status) + "]";
      for (const auto& f : r.flags) t.first_bad += " " + f;
    }
  }
  return t;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<ResultRecord> run(const std::string& id, const std::string& ini = "", std::uint64_t seed = 1) {
  return run_experiment(id, Config::from_string(ini), seed);
}

Outcome all_pass(const std::string& id, std::size_t expected_rows, const std::string& ini = "") {
  const auto rs = run(id, ini);
  const Tally t = tally(rs);
  Outcome o;
  o.ok = rs.size() >= expected_rows && t.fail == 0 && t.flag == 0;
  o.detail = fmt("%zu rows, %d pass, %d fail, %d flag", rs.size(), t.pass, t.fail, t.flag);
  if (!t.first_bad.empty()) o.detail += "; first: " + t.first_bad;
  return o;
}

Outcome ac1() {
  double worst0 = 0.0, worst_grid = 0.0;
  for (double lambda : {1.0, 0.1, 0.01, 0.001}) {
    const auto f = MapModel::cubic_perturbation(lambda);
    worst0 = std::max(worst0, std::abs(schwarzian_at(f, 0.0) - 6.0 / lambda) / (6.0 / lambda));
    for (int i = 0; i <= 200; ++i) {
      const double x = -1.0 + i / 100.0;
      const double exact = 6.0 * (lambda - 6 * x * x) / std::pow(lambda + 3 * x * x, 2);
      worst_grid = std::max(worst_grid, std::abs(schwarzian_at(f, x) - exact) / std::max(1.0, std::abs(exact)));
    }
  }
  const Outcome e = all_pass("schwarzian-blowup", 4);
  return {worst0 < 1e-12 && worst_grid < 1e-10 && e.ok,
          fmt("max rel err at 0 %.3g, grid %.3g; ", worst0, worst_grid) + e.detail};
}

Outcome ac2() {
  const auto rs = run("moebius-neutrality");
  double wb = 0.0, ws = 0.0;
  for (const auto& r : rs) {
    wb = std::max(wb, r.number("B_error"));
    ws = std::max(ws, r.number("S_max"));
  }
  const Tally t = tally(rs);
  return {rs.size() == 1000 && t.fail == 0 && t.flag == 0 && wb < 1e-10 && ws < 1e-10,
          fmt("%zu maps, max |B-1| %.3g, max |S| %.3g, %d not passing", rs.size(), wb, ws, t.fail + t.flag)};
}

Outcome ac3() {
  const auto rs = run("cos-bound-sweep");
  double worst = INFINITY;
  for (const auto& r : rs) worst = std::min(worst, r.margin);
  const Tally t = tally(rs);
  return {rs.size() == 500 && t.fail == 0 && t.flag == 0 && worst >= -1e-9,
          fmt("%zu cases, min margin %.3g, %d not passing", rs.size(), worst, t.fail + t.flag)};
}

Outcome ac4() {
  const auto rs = run("sinh-bound-sweep");
  double worst = INFINITY, gap = INFINITY;
  int cases = 0;
  for (const auto& r : rs) {
    if (r.case_id.rfind("case ", 0) != 0) continue;
    ++cases;
    worst = std::min(worst, r.margin);
    gap = std::min(gap, r.number("primary_minus_secondary"));
  }
  const Tally t = tally(rs);
  return {cases == 500 && t.fail == 0 && t.flag == 0 && gap >= 0.0,
          fmt("%d cases, min margin %.3g, min primary-secondary %.3g, %d not passing", cases, worst, gap,
              t.fail + t.flag)};
}

Outcome ac5() {
  double err_E = 0.0, err_S = 0.0;
  bool d_ok = true;
  for (double lambda : {1.0, 0.5, 0.1, 0.01}) {
    const auto f = MapModel::cubic_perturbation(lambda);
    const auto S = compute_critical_intervals(f);
    d_ok = d_ok && S.d_E() == 1;
    if (S.intervals.size() != 1) return {false, fmt("lambda %g gave %zu intervals", lambda, S.intervals.size())};
    const double e = 2.0 * std::sqrt(lambda / 3.0);
    err_E = std::max({err_E, std::abs(S.intervals[0].E().lo() + e), std::abs(S.intervals[0].E().hi() - e)});
    err_S = std::max(err_S, std::abs(schwarzian_at(f, 0.0) - 6.0 / lambda) / (6.0 / lambda));
  }
  const Outcome x = all_pass("critical-intervals", 4);
  return {err_E < 1e-12 && err_S < 1e-10 && d_ok && x.ok,
          fmt("endpoint err %.3g, Sf(0) rel err %.3g, d_E=1 %s; ", err_E, err_S, d_ok ? "yes" : "no") + x.detail};
}

Outcome ac8() {
  const MapModel g = MapModel::logistic(4.0);
  const Chain c = pull_back_chain(g, {0.0, 0.5}, forward_orbit(g, 0.1, 1));
  const double err = std::abs(c.head().hi() - (1.0 - std::sqrt(0.5)) / 2.0);
  const auto rs = run("chain-pullback");
  double worst = 0.0;
  int orbits = 0;
  for (const auto& r : rs)
    if (std::isfinite(r.number("period"))) {
      ++orbits;
      worst = std::max(worst, r.measured);
    }
  const Tally t = tally(rs);
  return {err < 1e-10 && orbits > 0 && worst <= 44 && t.fail == 0 && t.flag == 0,
          fmt("endpoint err %.3g; %d orbits up to period 8, max multiplicity %g, %d not passing", err, orbits,
              worst, t.fail + t.flag)};
}

Outcome ac9() {
  const auto g = MapModel::logistic(3.2);
  const auto res = find_periodic_orbits_upto(g, 2, {0.0, 1.0});
  const auto& fixed = res.period(1);
  bool fixed_ok = fixed.size() == 2;
  if (fixed_ok) {
    std::vector<double> xs{fixed[0].points[0], fixed[1].points[0]};
    std::sort(xs.begin(), xs.end());
    fixed_ok = std::abs(xs[0]) < 1e-12 && std::abs(xs[1] - 0.6875) < 1e-12;
  }
  const auto& two = res.period(2);
  const bool two_ok = two.size() == 1 && std::abs(two[0].multiplier - 0.16) < 1e-8;

  const auto h = MapModel::odd_cubic(-1.2);
  const auto packs = group_into_packs(find_periodic_orbits_upto(h, 2, {-0.6, 0.6}).all(), h);
  bool pack_ok = packs.size() == 1;
  if (pack_ok) {
    const auto& I = packs[0].carrier.I;
    pack_ok = std::abs(I.lo() + std::sqrt(0.2)) < 1e-9 && std::abs(I.hi() - std::sqrt(0.2)) < 1e-9 &&
              packs[0].orientation_preserving_period == 2;
  }
  return {fixed_ok && two_ok && pack_ok,
          fmt("fixed points %s, 2-cycle multiplier %.12g, odd cubic packs %zu%s", fixed_ok ? "ok" : "wrong",
              two.empty() ? NAN : two[0].multiplier, packs.size(),
              pack_ok ? " with carrier [-sqrt(0.2), sqrt(0.2)] and period 2" : " (carrier or period wrong)")};
}

Outcome ac10() {
  const auto rs = run("census", "[orbits_packs]\nparams = 2.8:3.57:200\nrho = 0.05\nn_max = 8\n");
  double max_exc = 0.0, min_mult = INFINITY;
  for (const auto& r : rs) {
    max_exc = std::max(max_exc, r.number("exceptional_count"));
    min_mult = std::min(min_mult, r.number("min_nonexceptional_multiplier"));
  }
  const Tally t = tally(rs);
  Outcome o{rs.size() == 200 && t.fail == 0 && t.flag == 0 && max_exc <= 2 && min_mult > 1.05,
            fmt("%zu parameters, max exceptional packs %g, min nonexceptional |multiplier| %.6g, %d fail, %d flag",
                rs.size(), max_exc, min_mult, t.fail, t.flag)};
  if (!t.first_bad.empty()) o.detail += "; first: " + t.first_bad;
  return o;
}

Outcome ac11() {
  const auto rs = run("first-entry");
  double logistic = NAN, cubic = NAN;
  for (const auto& r : rs) {
    if (r.case_id == "logistic a=4") logistic = r.measured;
    if (r.case_id == "x^3+lambda x near 0") cubic = r.measured;
  }
  return {logistic == 0.0 && cubic > 0.0, fmt("logistic violations %g, cubic violations %g", logistic, cubic)};
}

Outcome ac12() {
  const auto rs = run("quadratic-bound");
  double v = 0.0, samples = INFINITY;
  for (const auto& r : rs) {
    v += r.measured;
    samples = std::min(samples, r.number("samples"));
  }
  const Tally t = tally(rs);
  return {rs.size() == 2 && v == 0.0 && samples >= 1e4 && t.fail == 0 && t.flag == 0,
          fmt("%zu maps, %g violations, %g samples each", rs.size(), v, samples)};
}

Outcome ac13() {
  int same = 0, total = 0;
  std::string bad;
  for (const char* id : {"cos-bound-sweep", "moebius-neutrality", "excep-part1", "rho-envelope"}) {
    const std::string ini = "[crossratio]\nmaps = 100\n[critical_intervals]\nconfigs_per_family = 30\n";
    EmitMeta meta{id, 7, "acceptance", true};
    for (Format f : {Format::csv, Format::jsonl}) {
      const std::string a = render(run(id, ini, 7), f, meta);
      const std::string b = render(run(id, ini, 7), f, meta);
      ++total;
      if (body(a) == body(b) && !body(a).empty())
        ++same;
      else
        bad += std::string(" ") + id;
    }
  }
  return {same == total, fmt("%d of %d reruns byte-identical after the metadata line", same, total) + bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 Schwarzian blow-up of x^3+lambda x", ac1},
      {"AC2 Moebius neutrality", ac2},
      {"AC3 cos^2 distortion bound", ac3},
      {"AC4 sinh distortion bound", ac4},
      {"AC5 critical intervals of x^3+lambda x", ac5},
      {"AC6 product bound over disjoint pieces", [] { return all_pass("excep-part1", 600); }},
      {"AC7 expansion near critical points and intervals", [] { return all_pass("excep-part2", 600); }},
      {"AC8 pullback endpoint and multiplicity <= 44", ac8},
      {"AC9 periodic orbits and packs", ac9},
      {"AC10 census of exceptional packs", ac10},
      {"AC11 first-entry Schwarzian sign", ac11},
      {"AC12 quadratic Schwarzian bound", ac12},
      {"AC13 deterministic output", ac13},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failed;
    std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }

  // Not a criterion: where the cos^2 bound stops preventing collapse.
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const auto below = constant_schwarzian_min_distortion(pi2, 121, 32);
  const auto above = constant_schwarzian_min_distortion(1.5 * pi2, 121, 32);
  std::printf("NOTE sharpness: min B at S = pi^2 is %.4g, at S = 1.5 pi^2 is %.4g\n", below.min_B, above.min_B);

  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
