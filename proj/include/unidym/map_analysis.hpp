#ifndef UNIDYM_MAP_ANALYSIS_HPP
#define UNIDYM_MAP_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/map_model.hpp"
#include "unidym/polynomial.hpp"

namespace unidym {

/// A zero of Df. multiplicity is m-1 where D^m f is the first non-vanishing
/// derivative at the point.
struct CriticalPoint {
  double location = 0.0;
  int multiplicity = 1;

  /// Odd multiplicity means a local extremum (a turning point).
  bool is_turning() const noexcept { return multiplicity % 2 == 1; }
  friend bool operator==(const CriticalPoint&, const CriticalPoint&) = default;
};

struct CriticalPointOptions {
  /// Accept a root of Df when |Df| < root_tolerance * (1 + scale).
  double root_tolerance = 1e-12;
  /// A derivative counts as vanishing below this fraction of the largest
  /// Taylor coefficient at the point.
  double multiplicity_threshold = 1e-9;
  /// Real/complex split for polynomial roots: |imag| <= pairing * scale is real.
  double pairing_tolerance = 1e-10;
  /// Sample count for the generic (non-polynomial) scan.
  int scan_samples = 4096;
  int max_polynomial_degree = 64;
};

namespace detail {

inline int polynomial_multiplicity(const Polynomial& f, double c, double threshold) {
  std::vector<double> taylor;
  Polynomial d = f.derivative();
  double factorial = 1.0;
  for (int k = 1; k <= f.degree(); ++k) {
    factorial *= k;
    if (k >= 2) taylor.push_back(std::abs(d(c)) / factorial);
    d = d.derivative();
  }
  double ref = 0.0;
  for (double t : taylor) ref = std::max(ref, t);
  if (ref == 0.0) throw FlatnessError("all derivatives vanish at a critical point");
  for (std::size_t i = 0; i < taylor.size(); ++i)
    if (taylor[i] >= threshold * ref) return static_cast<int>(i) + 1;
  throw FlatnessError("cannot determine critical point multiplicity");
}

inline std::vector<CriticalPoint> polynomial_critical_points(const Polynomial& f,
                                                             const OrientedInterval& region,
                                                             const CriticalPointOptions& opt) {
  const Polynomial df = f.derivative();
  if (df.is_zero()) throw FlatnessError("Df vanishes identically (constant map)");
  std::vector<CriticalPoint> out;
  if (df.degree() == 0) return out;
  const double scale = df.scale();
  const double tol = opt.root_tolerance * (1.0 + scale);
  const Polynomial d2 = df.derivative();
  for (const RootCluster& rc : root_clusters(df)) {
    if (std::abs(rc.center.imag()) > opt.pairing_tolerance * scale) continue;
    double x = rc.center.real();
    if (rc.count == 1) {
      for (int i = 0; i < 3; ++i) {
        double dd = d2(x);
        if (dd == 0.0) break;
        double next = x - df(x) / dd;
        if (!(std::abs(df(next)) < std::abs(df(x)))) break;
        x = next;
      }
    }
    const double slack = 1e-12 * (1.0 + std::abs(x));
    if (x < region.lo() - slack || x > region.hi() + slack) continue;
    x = std::clamp(x, region.lo(), region.hi());
    if (std::abs(df(x)) >= tol) continue;
    out.push_back({x, polynomial_multiplicity(f, x, opt.multiplicity_threshold)});
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.location < b.location; });
  return out;
}

inline double bisect_sign_change(const auto& fn, double a, double b, int iterations = 200) {
  double fa = fn(a);
  for (int i = 0; i < iterations; ++i) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    double fm = fn(m);
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

inline int generic_multiplicity(const Jet& j, double threshold) {
  const double t2 = std::abs(j.d2) / 2.0, t3 = std::abs(j.d3) / 6.0;
  const double ref = std::max(t2, t3);
  if (ref == 0.0) throw FlatnessError("D2f and D3f vanish at a critical point");
  return t2 >= threshold * ref ? 1 : 2;
}

inline std::vector<CriticalPoint> scanned_critical_points(const MapModel& f,
                                                          const OrientedInterval& region,
                                                          const CriticalPointOptions& opt) {
  const int n = std::max(opt.scan_samples, 16);
  std::vector<double> xs(static_cast<std::size_t>(n) + 1), ds(xs.size());
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    xs[i] = i == n ? region.hi() : region.lo() + region.length() * i / n;
    ds[i] = f.jet(xs[i]).d1;
    scale = std::max(scale, std::abs(ds[i]));
  }
  const double tol = opt.root_tolerance * (1.0 + scale);
  auto d1 = [&](double x) { return f.jet(x).d1; };
  auto d2 = [&](double x) { return f.jet(x).d2; };

  int run = 0;
  for (int i = 0; i <= n; ++i) {
    run = std::abs(ds[i]) <= tol ? run + 1 : 0;
    if (run >= 3) throw FlatnessError("Df vanishes on a whole sub-interval");
  }

  std::vector<double> roots;
  for (int i = 0; i <= n; ++i) {
    if (ds[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i < n && ds[i + 1] != 0.0 && (ds[i] < 0) != (ds[i + 1] < 0)) {
      roots.push_back(bisect_sign_change(d1, xs[i], xs[i + 1]));
      continue;
    }
    // Tangential zero: |Df| has a local minimum at a sample with no sign change.
    if (i > 0 && i < n && std::abs(ds[i]) <= std::abs(ds[i - 1]) &&
        std::abs(ds[i]) <= std::abs(ds[i + 1]) && (ds[i - 1] < 0) == (ds[i] < 0) &&
        (ds[i + 1] < 0) == (ds[i] < 0)) {
      double a = xs[i - 1], b = xs[i + 1];
      double x;
      if ((d2(a) < 0) != (d2(b) < 0)) {
        x = bisect_sign_change(d2, a, b);
      } else {
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 200; ++it) {
          double c = b - phi * (b - a), d = a + phi * (b - a);
          if (std::abs(d1(c)) < std::abs(d1(d))) b = d;
          else a = c;
        }
        x = 0.5 * (a + b);
      }
      if (std::abs(d1(x)) < tol) roots.push_back(x);
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<CriticalPoint> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back().location) < 1e-9 * (1.0 + std::abs(r))) continue;
    out.push_back({r, generic_multiplicity(f.jet(r), opt.multiplicity_threshold)});
  }
  return out;
}

}  // namespace detail

/// All zeros of Df in the region, sorted ascending, with multiplicities.
/// Polynomial-like maps use the companion-matrix roots of Df; other maps use
/// a sign/tangency scan refined by bisection.
inline std::vector<CriticalPoint> critical_points(const MapModel& f, const OrientedInterval& region,
                                                  const CriticalPointOptions& opt = {}) {
  if (!region.is_bounded()) throw ParameterError("critical point search needs a bounded region");
  if (!f.domain().contains(region.lo()) || !f.domain().contains(region.hi()))
    throw DomainError("region lies outside the domain");
  if (auto p = f.as_polynomial(opt.max_polynomial_degree))
    return detail::polynomial_critical_points(*p, region, opt);
  if (region.is_degenerate()) {
    Jet j = f.jet(region.lo());
    if (j.d1 == 0.0) return {{region.lo(), detail::generic_multiplicity(j, opt.multiplicity_threshold)}};
    return {};
  }
  return detail::scanned_critical_points(f, region, opt);
}

namespace detail {

inline bool node_diffeo(const Node& n, const OrientedInterval& T);
inline OrientedInterval node_image(const Node& n, const OrientedInterval& T);

inline bool mobius_pole_in(const node::Mobius& m, const OrientedInterval& T) {
  if (m.c == 0.0) return false;
  return T.contains(-m.d / m.c);
}

inline bool tangent_pole_in(const node::ConstantSchwarzian& t, const OrientedInterval& T) {
  const double k = std::sqrt(t.C / 2.0);
  const double pi = std::numbers::pi;
  // Branch index of u = k(x - center) relative to the poles at pi/2 + j*pi.
  auto branch = [&](double x) { return std::floor((k * (x - t.center) + pi / 2) / pi); };
  auto on_pole = [&](double x) { return std::abs(std::cos(k * (x - t.center))) < 1e-300; };
  return branch(T.lo()) != branch(T.hi()) || on_pole(T.lo()) || on_pole(T.hi());
}

inline bool polynomial_diffeo(const Polynomial& p, const OrientedInterval& T) {
  const Polynomial dp = p.derivative();
  if (dp.is_zero()) return false;
  if (dp(T.lo()) == 0.0 || dp(T.hi()) == 0.0) return false;
  if (T.is_degenerate()) return true;
  return polynomial_critical_points(p, T, {}).empty();
}

struct DiffeoVisitor {
  const OrientedInterval& T;
  bool operator()(const node::Identity&) const { return true; }
  bool operator()(const node::Poly& p) const { return polynomial_diffeo(p.p, T); }
  bool operator()(const node::Affine& a) const { return a.a != 0.0; }
  bool operator()(const node::Mobius& m) const { return !mobius_pole_in(m, T); }
  bool operator()(const node::Logistic& l) const {
    return l.a != 0.0 && !T.contains(0.5);
  }
  bool operator()(const node::CubicPerturbation& c) const {
    return polynomial_diffeo(Polynomial{0.0, c.lambda, 0.0, 1.0}, T);
  }
  bool operator()(const node::OddCubic& c) const {
    return polynomial_diffeo(Polynomial{0.0, c.mu, 0.0, 1.0}, T);
  }
  bool operator()(const node::ConstantSchwarzian& t) const { return !tangent_pole_in(t, T); }
  bool operator()(const node::Compose& c) const {
    if (!node_diffeo(*c.inner, T)) return false;
    return node_diffeo(*c.outer, node_image(*c.inner, T));
  }
  bool operator()(const node::Power& p) const {
    OrientedInterval cur = T;
    for (int i = 0; i < p.n; ++i) {
      if (!node_diffeo(*p.base, cur)) return false;
      cur = node_image(*p.base, cur);
    }
    return true;
  }
};

inline bool node_diffeo(const Node& n, const OrientedInterval& T) {
  return std::visit(DiffeoVisitor{T}, n);
}

inline OrientedInterval polynomial_image(const Polynomial& p, const OrientedInterval& T) {
  double lo = std::min(p(T.lo()), p(T.hi()));
  double hi = std::max(p(T.lo()), p(T.hi()));
  if (!T.is_degenerate() && p.degree() >= 2) {
    for (const CriticalPoint& c : polynomial_critical_points(p, T, {})) {
      double v = p(c.location);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

struct ImageVisitor {
  const OrientedInterval& T;
  OrientedInterval endpoints(const Node& n) const {
    return OrientedInterval::hull(node_value(n, T.lo()), node_value(n, T.hi()));
  }
  OrientedInterval operator()(const node::Identity&) const { return T; }
  OrientedInterval operator()(const node::Poly& p) const { return polynomial_image(p.p, T); }
  OrientedInterval operator()(const node::Affine& a) const {
    return OrientedInterval::hull(a.a * T.lo() + a.b, a.a * T.hi() + a.b);
  }
  OrientedInterval operator()(const node::Mobius& m) const {
    if (mobius_pole_in(m, T)) throw PoleError("interval contains the Möbius pole");
    return endpoints(Node(m));
  }
  OrientedInterval operator()(const node::Logistic& l) const {
    return polynomial_image(Polynomial{0.0, l.a, -l.a}, T);
  }
  OrientedInterval operator()(const node::CubicPerturbation& c) const {
    return polynomial_image(Polynomial{0.0, c.lambda, 0.0, 1.0}, T);
  }
  OrientedInterval operator()(const node::OddCubic& c) const {
    return polynomial_image(Polynomial{0.0, c.mu, 0.0, 1.0}, T);
  }
  OrientedInterval operator()(const node::ConstantSchwarzian& t) const {
    if (tangent_pole_in(t, T)) throw PoleError("interval contains a tangent pole");
    return endpoints(Node(t));
  }
  OrientedInterval operator()(const node::Compose& c) const {
    return node_image(*c.outer, node_image(*c.inner, T));
  }
  OrientedInterval operator()(const node::Power& p) const {
    OrientedInterval cur = T;
    for (int i = 0; i < p.n; ++i) cur = node_image(*p.base, cur);
    return cur;
  }
};

inline OrientedInterval node_image(const Node& n, const OrientedInterval& T) {
  return std::visit(ImageVisitor{T}, n);
}

}  // namespace detail

/// True iff Df has no zero on the closed interval T (and no pole inside).
inline bool is_diffeo_on(const MapModel& f, const OrientedInterval& T) {
  if (!f.domain().contains(T.lo()) || !f.domain().contains(T.hi()))
    throw DomainError("interval lies outside the domain");
  return detail::node_diffeo(f.root(), T);
}

/// Exact image [min f, max f] over T from endpoint and interior critical values.
inline OrientedInterval image_interval(const MapModel& f, const OrientedInterval& T) {
  if (!f.domain().contains(T.lo()) || !f.domain().contains(T.hi()))
    throw DomainError("interval lies outside the domain");
  return detail::node_image(f.root(), T);
}

}  // namespace unidym

#endif  // UNIDYM_MAP_ANALYSIS_HPP
