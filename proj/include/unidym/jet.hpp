#ifndef UNIDYM_JET_HPP
#define UNIDYM_JET_HPP

#include <array>

namespace unidym {

/// Value and first three derivatives of a function at a point.
struct Jet {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  static Jet identity(double x) { return {x, 1.0, 0.0, 0.0}; }
  static Jet constant(double c) { return {c, 0.0, 0.0, 0.0}; }

  double operator[](int k) const {
    switch (k) {
      case 0: return f;
      case 1: return d1;
      case 2: return d2;
      default: return d3;
    }
  }

  std::array<double, 4> as_array() const { return {f, d1, d2, d3}; }
};

/// Jet of outer∘inner, given the jet of inner at x and the jet of outer at
/// inner(x) (third-order Faà di Bruno).
inline Jet chain(const Jet& outer, const Jet& inner) {
  const double g1 = inner.d1, g2 = inner.d2, g3 = inner.d3;
  return {
      outer.f,
      outer.d1 * g1,
      outer.d2 * g1 * g1 + outer.d1 * g2,
      outer.d3 * g1 * g1 * g1 + 3.0 * outer.d2 * g1 * g2 + outer.d1 * g3,
  };
}

}  // namespace unidym

#endif  // UNIDYM_JET_HPP
