#ifndef UNIDYM_MAP_MODEL_HPP
#define UNIDYM_MAP_MODEL_HPP

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "unidym/errors.hpp"
#include "unidym/interval.hpp"
#include "unidym/jet.hpp"
#include "unidym/polynomial.hpp"

namespace unidym {

class MapModel;

namespace node {

struct Identity {};
struct Poly {
  Polynomial p;
};
/// x -> a*x + b
struct Affine {
  double a, b;
};
/// x -> (a*x + b) / (c*x + d)
struct Mobius {
  double a, b, c, d;
};
/// x -> a*x*(1-x)
struct Logistic {
  double a;
};
/// x -> x^3 + lambda*x
struct CubicPerturbation {
  double lambda;
};
/// x -> mu*x + x^3
struct OddCubic {
  double mu;
};
/// x -> tan(k*(x - center))/k with k = sqrt(C/2); Schwarzian identically C.
struct ConstantSchwarzian {
  double C, center;
};
struct Compose;
struct Power;

}  // namespace node

using Node = std::variant<node::Identity, node::Poly, node::Affine, node::Mobius, node::Logistic,
                          node::CubicPerturbation, node::OddCubic, node::ConstantSchwarzian,
                          node::Compose, node::Power>;
using NodePtr = std::shared_ptr<const Node>;

namespace node {
/// outer∘inner
struct Compose {
  NodePtr outer, inner;
};
/// base iterated n >= 0 times
struct Power {
  NodePtr base;
  int n;
};
}  // namespace node

namespace detail {

inline Jet node_jet(const Node& n, double x);

inline Jet mobius_jet(const node::Mobius& m, double x) {
  const double den = m.c * x + m.d;
  if (den == 0.0 || !std::isfinite(1.0 / den))
    throw PoleError("Möbius pole hit at x = " + std::to_string(x));
  const double det = m.a * m.d - m.b * m.c;
  const double inv = 1.0 / den;
  return {(m.a * x + m.b) * inv, det * inv * inv, -2.0 * m.c * det * inv * inv * inv,
          6.0 * m.c * m.c * det * inv * inv * inv * inv};
}

inline Jet tangent_jet(const node::ConstantSchwarzian& t, double x) {
  const double k = std::sqrt(t.C / 2.0);
  const double u = k * (x - t.center);
  const double cu = std::cos(u);
  if (std::abs(cu) < 1e-300) throw PoleError("tangent pole hit at x = " + std::to_string(x));
  const double tn = std::tan(u);
  const double s = 1.0 + tn * tn;
  return {tn / k, s, 2.0 * tn * s * k, 2.0 * s * (1.0 + 3.0 * tn * tn) * k * k};
}

struct JetVisitor {
  double x;
  Jet operator()(const node::Identity&) const { return Jet::identity(x); }
  Jet operator()(const node::Poly& p) const { return p.p.jet(x); }
  Jet operator()(const node::Affine& a) const { return {a.a * x + a.b, a.a, 0.0, 0.0}; }
  Jet operator()(const node::Mobius& m) const { return mobius_jet(m, x); }
  Jet operator()(const node::Logistic& l) const {
    return {l.a * x * (1.0 - x), l.a * (1.0 - 2.0 * x), -2.0 * l.a, 0.0};
  }
  Jet operator()(const node::CubicPerturbation& c) const {
    return {x * x * x + c.lambda * x, 3.0 * x * x + c.lambda, 6.0 * x, 6.0};
  }
  Jet operator()(const node::OddCubic& c) const {
    return {c.mu * x + x * x * x, c.mu + 3.0 * x * x, 6.0 * x, 6.0};
  }
  Jet operator()(const node::ConstantSchwarzian& t) const { return tangent_jet(t, x); }
  Jet operator()(const node::Compose& c) const {
    Jet inner = node_jet(*c.inner, x);
    if (!std::isfinite(inner.f)) throw NumericError("non-finite intermediate value");
    return chain(node_jet(*c.outer, inner.f), inner);
  }
  Jet operator()(const node::Power& p) const {
    Jet acc = Jet::identity(x);
    for (int i = 0; i < p.n; ++i) {
      if (!std::isfinite(acc.f)) throw NumericError("non-finite iterate");
      acc = chain(node_jet(*p.base, acc.f), acc);
    }
    return acc;
  }
};

inline Jet node_jet(const Node& n, double x) { return std::visit(JetVisitor{x}, n); }

inline double node_value(const Node& n, double x);

struct ValueVisitor {
  double x;
  double operator()(const node::Identity&) const { return x; }
  double operator()(const node::Poly& p) const { return p.p(x); }
  double operator()(const node::Affine& a) const { return a.a * x + a.b; }
  double operator()(const node::Mobius& m) const {
    const double den = m.c * x + m.d;
    if (den == 0.0) throw PoleError("Möbius pole hit at x = " + std::to_string(x));
    return (m.a * x + m.b) / den;
  }
  double operator()(const node::Logistic& l) const { return l.a * x * (1.0 - x); }
  double operator()(const node::CubicPerturbation& c) const { return x * x * x + c.lambda * x; }
  double operator()(const node::OddCubic& c) const { return c.mu * x + x * x * x; }
  double operator()(const node::ConstantSchwarzian& t) const { return tangent_jet(t, x).f; }
  double operator()(const node::Compose& c) const {
    return node_value(*c.outer, node_value(*c.inner, x));
  }
  double operator()(const node::Power& p) const {
    double y = x;
    for (int i = 0; i < p.n; ++i) y = node_value(*p.base, y);
    return y;
  }
};

inline double node_value(const Node& n, double x) { return std::visit(ValueVisitor{x}, n); }

inline std::optional<Polynomial> node_polynomial(const Node& n, int max_degree);

struct PolyVisitor {
  int max_degree;
  using R = std::optional<Polynomial>;
  R operator()(const node::Identity&) const { return Polynomial{0.0, 1.0}; }
  R operator()(const node::Poly& p) const { return p.p; }
  R operator()(const node::Affine& a) const { return Polynomial{a.b, a.a}; }
  R operator()(const node::Mobius& m) const {
    if (m.c == 0.0) return Polynomial{m.b / m.d, m.a / m.d};
    return std::nullopt;
  }
  R operator()(const node::Logistic& l) const { return Polynomial{0.0, l.a, -l.a}; }
  R operator()(const node::CubicPerturbation& c) const { return Polynomial{0.0, c.lambda, 0.0, 1.0}; }
  R operator()(const node::OddCubic& c) const { return Polynomial{0.0, c.mu, 0.0, 1.0}; }
  R operator()(const node::ConstantSchwarzian&) const { return std::nullopt; }
  R operator()(const node::Compose& c) const {
    R outer = node_polynomial(*c.outer, max_degree);
    R inner = node_polynomial(*c.inner, max_degree);
    if (!outer || !inner) return std::nullopt;
    if (std::max(outer->degree(), 0) * std::max(inner->degree(), 1) > max_degree) return std::nullopt;
    return outer->compose(*inner);
  }
  R operator()(const node::Power& p) const {
    R base = node_polynomial(*p.base, max_degree);
    if (!base) return std::nullopt;
    double deg = std::pow(std::max(base->degree(), 1), p.n);
    if (deg > max_degree) return std::nullopt;
    Polynomial acc{0.0, 1.0};
    for (int i = 0; i < p.n; ++i) acc = base->compose(acc);
    return acc;
  }
};

inline std::optional<Polynomial> node_polynomial(const Node& n, int max_degree) {
  return std::visit(PolyVisitor{max_degree}, n);
}

struct DescribeVisitor {
  std::string operator()(const node::Identity&) const { return "x"; }
  std::string operator()(const node::Poly& p) const { return "(" + p.p.to_string() + ")"; }
  std::string operator()(const node::Affine& a) const {
    std::ostringstream os;
    os.precision(17);
    os << "(" << a.a << "*x + " << a.b << ")";
    return os.str();
  }
  std::string operator()(const node::Mobius& m) const {
    std::ostringstream os;
    os.precision(17);
    os << "((" << m.a << "*x + " << m.b << ")/(" << m.c << "*x + " << m.d << "))";
    return os.str();
  }
  std::string operator()(const node::Logistic& l) const {
    std::ostringstream os;
    os.precision(17);
    os << "logistic(" << l.a << ")";
    return os.str();
  }
  std::string operator()(const node::CubicPerturbation& c) const {
    std::ostringstream os;
    os.precision(17);
    os << "(x^3 + " << c.lambda << "*x)";
    return os.str();
  }
  std::string operator()(const node::OddCubic& c) const {
    std::ostringstream os;
    os.precision(17);
    os << "(" << c.mu << "*x + x^3)";
    return os.str();
  }
  std::string operator()(const node::ConstantSchwarzian& t) const {
    std::ostringstream os;
    os.precision(17);
    os << "tanS(C=" << t.C << ", center=" << t.center << ")";
    return os.str();
  }
  std::string operator()(const node::Compose& c) const {
    return std::visit(*this, *c.outer) + " o " + std::visit(*this, *c.inner);
  }
  std::string operator()(const node::Power& p) const {
    return "[" + std::visit(*this, *p.base) + "]^" + std::to_string(p.n);
  }
};

}  // namespace detail

/// An exactly differentiable one-dimensional map: an immutable expression tree
/// over polynomial, affine, Möbius and named-family nodes, with a phase space.
/// Derivatives up to order three are propagated exactly through the tree.
class MapModel {
 public:
  MapModel() : MapModel(node::Identity{}, Domain::real_line()) {}

  static MapModel identity(Domain d = Domain::real_line()) { return {node::Identity{}, d}; }
  static MapModel polynomial(Polynomial p, Domain d = Domain::real_line()) {
    return {node::Poly{std::move(p)}, d};
  }
  static MapModel affine(double a, double b, Domain d = Domain::real_line()) {
    return {node::Affine{a, b}, d};
  }
  static MapModel mobius(double a, double b, double c, double d,
                         Domain dom = Domain::real_line()) {
    if (a * d - b * c == 0.0) throw ParameterError("Möbius map requires ad - bc != 0");
    return {node::Mobius{a, b, c, d}, dom};
  }
  static MapModel logistic(double a, Domain d = Domain::interval(0.0, 1.0)) {
    return {node::Logistic{a}, d};
  }
  static MapModel cubic_perturbation(double lambda, Domain d = Domain::real_line()) {
    return {node::CubicPerturbation{lambda}, d};
  }
  static MapModel odd_cubic(double mu, Domain d = Domain::real_line()) {
    return {node::OddCubic{mu}, d};
  }
  /// Map with Schwarzian derivative identically C > 0, unit slope at center.
  static MapModel constant_schwarzian(double C, double center, Domain d = Domain::real_line()) {
    if (!(C > 0)) throw ParameterError("constant Schwarzian family requires C > 0");
    return {node::ConstantSchwarzian{C, center}, d};
  }
  /// outer∘inner on the domain of inner.
  static MapModel compose(const MapModel& outer, const MapModel& inner) {
    return {node::Compose{outer.root_, inner.root_}, inner.domain_};
  }
  /// f iterated n times.
  static MapModel power(const MapModel& f, int n) {
    if (n < 0) throw ParameterError("iterate count must be non-negative");
    if (n == 1) return f;
    return {node::Power{f.root_, n}, f.domain_};
  }

  const Domain& domain() const noexcept { return domain_; }
  MapModel with_domain(Domain d) const {
    MapModel m = *this;
    m.domain_ = d;
    return m;
  }
  const Node& root() const noexcept { return *root_; }

  /// Value and derivatives at x. Throws DomainError outside the domain and
  /// PoleError at a Möbius or tangent pole.
  Jet jet(double x) const {
    check_domain(x);
    return detail::node_jet(*root_, x);
  }

  double value(double x) const {
    check_domain(x);
    return detail::node_value(*root_, x);
  }
  double operator()(double x) const { return value(x); }

  /// [f(x), Df(x), ...] up to the requested order (0..3).
  std::vector<double> eval_derivatives(double x, int order) const {
    if (order < 0 || order > 3) throw ParameterError("derivative order must be in 0..3");
    Jet j = jet(x);
    std::vector<double> out;
    for (int k = 0; k <= order; ++k) out.push_back(j[k]);
    return out;
  }

  /// Expanded polynomial form when every node is polynomial and the degree
  /// stays below max_degree.
  std::optional<Polynomial> as_polynomial(int max_degree = 64) const {
    return detail::node_polynomial(*root_, max_degree);
  }

  /// For Power nodes, the base map and iterate count; otherwise (this, 1).
  std::pair<MapModel, int> iterate_structure() const {
    if (const auto* p = std::get_if<node::Power>(root_.get())) return {MapModel(p->base, domain_), p->n};
    return {*this, 1};
  }

  std::string describe() const { return std::visit(detail::DescribeVisitor{}, *root_); }

 private:
  MapModel(Node n, Domain d) : root_(std::make_shared<const Node>(std::move(n))), domain_(d) {}
  MapModel(NodePtr n, Domain d) : root_(std::move(n)), domain_(d) {}

  void check_domain(double x) const {
    if (!domain_.contains(x))
      throw DomainError("x = " + std::to_string(x) + " lies outside the domain");
  }

  NodePtr root_;
  Domain domain_;
};

/// Schwarzian derivative from a jet; requires Df != 0.
inline double schwarzian_from_jet(const Jet& j) {
  if (j.d1 == 0.0) throw CriticalPointError("Schwarzian undefined where Df = 0");
  const double r = j.d2 / j.d1;
  return j.d3 / j.d1 - 1.5 * r * r;
}

}  // namespace unidym

#endif  // UNIDYM_MAP_MODEL_HPP
