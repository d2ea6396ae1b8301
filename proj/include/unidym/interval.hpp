#ifndef UNIDYM_INTERVAL_HPP
#define UNIDYM_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "unidym/errors.hpp"

namespace unidym {

/// Closed real interval [lo, hi]. A zero-length interval is degenerate.
class OrientedInterval {
 public:
  OrientedInterval() = default;
  OrientedInterval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw ParameterError("interval requires lo <= hi");
  }

  /// Interval spanned by two points in either order.
  static OrientedInterval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }
  static OrientedInterval point(double x) { return {x, x}; }
  /// The interval (center - half, center + half).
  static OrientedInterval centered(double center, double half) {
    return {center - half, center + half};
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  double midpoint() const noexcept { return 0.5 * (lo_ + hi_); }
  double half_length() const noexcept { return 0.5 * (hi_ - lo_); }
  bool is_degenerate() const noexcept { return hi_ == lo_; }
  bool is_bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains(const OrientedInterval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool interior_contains(double x) const noexcept { return lo_ < x && x < hi_; }
  /// J strictly inside: both complementary components have positive length.
  bool strictly_contains(const OrientedInterval& other) const noexcept {
    return lo_ < other.lo_ && other.hi_ < hi_;
  }
  bool intersects(const OrientedInterval& other) const noexcept {
    return lo_ <= other.hi_ && other.lo_ <= hi_;
  }
  bool interiors_intersect(const OrientedInterval& other) const noexcept {
    return lo_ < other.hi_ && other.lo_ < hi_;
  }

  std::optional<OrientedInterval> intersection(const OrientedInterval& other) const {
    double a = std::max(lo_, other.lo_);
    double b = std::min(hi_, other.hi_);
    if (a > b) return std::nullopt;
    return OrientedInterval(a, b);
  }
  /// Length of the intersection, zero when disjoint.
  double overlap(const OrientedInterval& other) const noexcept {
    return std::max(0.0, std::min(hi_, other.hi_) - std::max(lo_, other.lo_));
  }
  OrientedInterval hull(const OrientedInterval& other) const {
    return {std::min(lo_, other.lo_), std::max(hi_, other.hi_)};
  }

  /// lambda*I: same midpoint, half-length multiplied by lambda.
  OrientedInterval scaled(double lambda) const {
    if (!(lambda >= 0)) throw ParameterError("scale factor must be non-negative");
    return centered(midpoint(), lambda * half_length());
  }

  /// Distance from x to the interval (zero inside).
  double distance(double x) const noexcept {
    if (x < lo_) return lo_ - x;
    if (x > hi_) return x - hi_;
    return 0.0;
  }

  friend bool operator==(const OrientedInterval&, const OrientedInterval&) = default;
  friend std::ostream& operator<<(std::ostream& os, const OrientedInterval& I) {
    return os << '[' << I.lo_ << ", " << I.hi_ << ']';
  }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Phase space of a map: an interval (possibly the whole line) or a circle R/period.
class Domain {
 public:
  enum class Kind { interval, circle };

  static Domain real_line() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return Domain(Kind::interval, -inf, inf, 1.0);
  }
  static Domain interval(double lo, double hi) {
    if (!(lo < hi)) throw ParameterError("domain bounds must be strictly ordered");
    return Domain(Kind::interval, lo, hi, 1.0);
  }
  static Domain circle(double period = 1.0) {
    if (!(period > 0)) throw ParameterError("circle period must be positive");
    return Domain(Kind::circle, 0.0, period, period);
  }

  Kind kind() const noexcept { return kind_; }
  bool is_circle() const noexcept { return kind_ == Kind::circle; }
  double period() const noexcept { return period_; }
  OrientedInterval bounds() const { return {lo_, hi_}; }
  bool is_bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

  /// Circle points are represented by their lift, so every real is admissible.
  bool contains(double x) const noexcept {
    if (std::isnan(x)) return false;
    return is_circle() || (lo_ <= x && x <= hi_);
  }

  /// Reduce a lifted coordinate into [0, period); identity on intervals.
  double reduce(double x) const noexcept {
    if (!is_circle()) return x;
    double r = std::fmod(x, period_);
    return r < 0 ? r + period_ : r;
  }

  /// The extended interval 3N used when orbit neighbourhoods reach past the
  /// boundary; a circle is its own extension.
  Domain extended() const {
    if (is_circle() || !is_bounded()) return *this;
    OrientedInterval big = bounds().scaled(3.0);
    return interval(big.lo(), big.hi());
  }

  /// The arc between two circle points that is shorter than half the period,
  /// as an interval of lifted coordinates starting at the reduced a.
  OrientedInterval shorter_arc(double a, double b) const {
    if (!is_circle()) return OrientedInterval::hull(a, b);
    double ra = reduce(a);
    double d = reduce(b - a);
    if (d > 0.5 * period_) return {ra - (period_ - d), ra};
    return {ra, ra + d};
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(Kind kind, double lo, double hi, double period)
      : kind_(kind), lo_(lo), hi_(hi), period_(period) {}

  Kind kind_;
  double lo_;
  double hi_;
  double period_;
};

}  // namespace unidym

#endif  // UNIDYM_INTERVAL_HPP
