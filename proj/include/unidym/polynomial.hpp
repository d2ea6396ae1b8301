#ifndef UNIDYM_POLYNOMIAL_HPP
#define UNIDYM_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "unidym/errors.hpp"
#include "unidym/jet.hpp"

namespace unidym {

/// Dense real polynomial, coefficients in ascending order of degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) { trim(); }
  Polynomial(std::initializer_list<double> coefficients) : c_(coefficients) { trim(); }

  static Polynomial monomial(int degree, double coefficient = 1.0) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    c.back() = coefficient;
    return Polynomial(std::move(c));
  }

  /// Degree, with -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<double>& coefficients() const noexcept { return c_; }
  double coefficient(int k) const noexcept {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0;
  }

  /// Largest absolute coefficient.
  double scale() const noexcept {
    double s = 0.0;
    for (double v : c_) s = std::max(s, std::abs(v));
    return s;
  }

  template <typename T>
  T operator()(const T& x) const {
    T acc = T(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }

  /// Value and first three derivatives by Horner's scheme.
  Jet jet(double x) const {
    double p = 0, d1 = 0, d2 = 0, d3 = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      d3 = d3 * x + 3.0 * d2;
      d2 = d2 * x + 2.0 * d1;
      d1 = d1 * x + p;
      p = p * x + *it;
    }
    return {p, d1, d2, d3};
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  Polynomial derivative(int order) const {
    Polynomial p = *this;
    for (int i = 0; i < order; ++i) p = p.derivative();
    return p;
  }

  /// k-th derivative at x, any k >= 0.
  double derivative_at(double x, int k) const { return derivative(k)(x); }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(double s, const Polynomial& a) {
    std::vector<double> c = a.c_;
    for (double& v : c) v *= s;
    return Polynomial(std::move(c));
  }

  /// this∘inner, expanded.
  Polynomial compose(const Polynomial& inner) const {
    Polynomial acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Polynomial{*it};
    return acc;
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      double v = c_[static_cast<std::size_t>(k)];
      if (v == 0.0) continue;
      if (!first) os << (v < 0 ? " - " : " + ");
      else if (v < 0) os << '-';
      os << std::abs(v);
      if (k >= 1) os << "*x";
      if (k >= 2) os << '^' << k;
      first = false;
    }
    if (first) os << '0';
    return os.str();
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

/// A root (or a cluster of numerically coincident roots) of a polynomial.
struct RootCluster {
  std::complex<double> center;
  int count = 1;
};

struct RootOptions {
  /// Roots closer than this (relative to 1+|z|) are candidates for merging
  /// into one multiple root.
  double cluster_tolerance = 1e-4;
  /// A merged cluster is accepted only if the polynomial's residual at the
  /// centroid is below residual_tolerance * (1 + scale).
  double residual_tolerance = 1e-12;
  int newton_polish_steps = 1;
};

namespace detail {

inline std::complex<double> polish_root(const Polynomial& p, const Polynomial& dp,
                                        std::complex<double> z, int steps) {
  for (int i = 0; i < steps; ++i) {
    std::complex<double> v = p(z);
    std::complex<double> d = dp(z);
    if (d == std::complex<double>(0.0)) break;
    std::complex<double> next = z - v / d;
    if (!(std::abs(p(next)) <= std::abs(v)) || !std::isfinite(next.real()) ||
        !std::isfinite(next.imag()))
      break;
    z = next;
  }
  return z;
}

}  // namespace detail

/// All complex roots via eigenvalues of the balanced companion matrix, each
/// polished by Newton's method.
inline std::vector<std::complex<double>> complex_roots(const Polynomial& p, int polish_steps = 1) {
  if (p.is_zero()) throw NumericError("roots of the zero polynomial are not isolated");
  const int d = p.degree();
  std::vector<std::complex<double>> out;
  if (d == 0) return out;
  if (d == 1) {
    out.emplace_back(-p.coefficient(0) / p.coefficient(1), 0.0);
    return out;
  }
  Eigen::VectorXd coeffs(d + 1);
  for (int k = 0; k <= d; ++k) coeffs[k] = p.coefficient(k);
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
  const Polynomial dp = p.derivative();
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
    std::complex<double> z = solver.roots()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericError("companion eigenvalue solver did not converge");
    out.push_back(detail::polish_root(p, dp, z, polish_steps));
  }
  return out;
}

/// Roots grouped into clusters. Numerically split multiple roots are merged
/// when the residual at their centroid vanishes to tolerance; otherwise they
/// stay separate.
inline std::vector<RootCluster> root_clusters(const Polynomial& p, const RootOptions& opt = {}) {
  std::vector<std::complex<double>> roots = complex_roots(p, opt.newton_polish_steps);
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const double residual_tol = opt.residual_tolerance * (1.0 + p.scale());
  std::vector<bool> used(roots.size(), false);
  std::vector<RootCluster> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members{i};
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(roots[j] - roots[i]) < opt.cluster_tolerance * (1.0 + std::abs(roots[i])))
        members.push_back(j);
    }
    if (members.size() > 1) {
      std::complex<double> c = 0.0;
      for (std::size_t m : members) c += roots[m];
      c /= static_cast<double>(members.size());
      // A real multiple root has a real centroid; snap it before testing.
      std::complex<double> cr = c;
      if (std::abs(c.imag()) < opt.cluster_tolerance * (1.0 + std::abs(c))) cr = {c.real(), 0.0};
      if (std::abs(p(cr)) <= residual_tol) {
        for (std::size_t m : members) used[m] = true;
        out.push_back({cr, static_cast<int>(members.size())});
        continue;
      }
    }
    used[i] = true;
    out.push_back({roots[i], 1});
  }
  return out;
}

}  // namespace unidym

#endif  // UNIDYM_POLYNOMIAL_HPP
