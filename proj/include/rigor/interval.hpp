// interval.hpp - directed-rounding interval arithmetic over binary64.
//
// Every operation returns an interval that contains the exact real image of
// its interval arguments.  Outward rounding is emulated without touching the
// FPU rounding mode: results are computed round-to-nearest and nudged one ULP
// outward whenever an exact error term (two-sum / fma residual) shows the
// rounding was inexact on the wrong side.  Exact operations stay exact, so
// small-integer arithmetic does not widen.

#ifndef RIGOR_INTERVAL_HPP
#define RIGOR_INTERVAL_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rigor {

class IntervalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NonOrderedBounds : public IntervalError {
public:
  using IntervalError::IntervalError;
};

class DivisionByZeroInterval : public IntervalError {
public:
  using IntervalError::IntervalError;
};

class DomainViolation : public IntervalError {
public:
  using IntervalError::IntervalError;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kMaxD = std::numeric_limits<double>::max();

// Below this magnitude the fma residual may itself round (subnormal range),
// so exactness detection is skipped and we nudge unconditionally.
inline constexpr double kTinyGuard = 1e-280;

inline double next_up(double x) noexcept { return std::nextafter(x, kInf); }
inline double next_down(double x) noexcept { return std::nextafter(x, -kInf); }

// Exact rounding error of s = fl(a+b) (Knuth two-sum); requires s finite.
inline double sum_err(double a, double b, double s) noexcept {
  double bv = s - a;
  return (a - (s - bv)) + (b - bv);
}

inline double add_down(double a, double b) noexcept {
  double s = a + b;
  if (!std::isfinite(s)) return s == kInf ? kMaxD : s;
  double e = sum_err(a, b, s);
  return e < 0 ? next_down(s) : s;
}

inline double add_up(double a, double b) noexcept {
  double s = a + b;
  if (!std::isfinite(s)) return s == -kInf ? -kMaxD : s;
  double e = sum_err(a, b, s);
  return e > 0 ? next_up(s) : s;
}

inline double sub_down(double a, double b) noexcept { return add_down(a, -b); }
inline double sub_up(double a, double b) noexcept { return add_up(a, -b); }

// Directed product of endpoints; 0 * inf counts as 0 (the set image says so:
// one factor is identically zero).
inline double mul_down(double a, double b) noexcept {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (!std::isfinite(p)) return p == kInf ? kMaxD : p;
  if (std::fabs(p) < kTinyGuard) return next_down(p);
  double e = std::fma(a, b, -p); // exact: a*b - p
  return e < 0 ? next_down(p) : p;
}

inline double mul_up(double a, double b) noexcept {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (!std::isfinite(p)) return p == -kInf ? -kMaxD : p;
  if (std::fabs(p) < kTinyGuard) return next_up(p);
  double e = std::fma(a, b, -p);
  return e > 0 ? next_up(p) : p;
}

// Directed quotient; b != 0 and b finite is the caller's business
// (interval division rejects 0-containing divisors before coming here).
inline double div_down(double a, double b) noexcept {
  if (a == 0.0) return 0.0;
  double q = a / b;
  if (!std::isfinite(q)) return q == kInf ? kMaxD : q;
  if (std::fabs(q) < kTinyGuard || std::fabs(a) < kTinyGuard) return next_down(q);
  double e = std::fma(q, b, -a); // exact: q*b - a; true quotient = q - e/b
  if (e == 0) return q;
  return ((e > 0) == (b > 0)) ? next_down(q) : q;
}

inline double div_up(double a, double b) noexcept {
  if (a == 0.0) return 0.0;
  double q = a / b;
  if (!std::isfinite(q)) return q == -kInf ? -kMaxD : q;
  if (std::fabs(q) < kTinyGuard || std::fabs(a) < kTinyGuard) return next_up(q);
  double e = std::fma(q, b, -a);
  if (e == 0) return q;
  return ((e > 0) == (b > 0)) ? q : next_up(q);
}

// IEEE sqrt is correctly rounded; the fma residual tells us the side.
inline double sqrt_down(double x) noexcept {
  double s = std::sqrt(x);
  if (s == 0.0 || !std::isfinite(s)) return s;
  if (x < kTinyGuard) return next_down(s);
  double e = std::fma(s, s, -x);
  return e > 0 ? next_down(s) : s;
}

inline double sqrt_up(double x) noexcept {
  double s = std::sqrt(x);
  if (!std::isfinite(s)) return s;
  if (x < kTinyGuard) return next_up(s);
  double e = std::fma(s, s, -x);
  return e < 0 ? next_up(s) : s;
}

} // namespace detail

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;

  Interval(double v) : lo(v), hi(v) { // NOLINT: implicit by design
    if (std::isnan(v)) throw NonOrderedBounds("interval endpoint is NaN");
  }

  Interval(double l, double h) : lo(l), hi(h) {
    if (std::isnan(l) || std::isnan(h))
      throw NonOrderedBounds("interval endpoint is NaN");
    if (l > h) throw NonOrderedBounds("interval lower bound above upper");
  }

  // No validation; for internal use where the invariant is already known.
  static Interval unchecked(double l, double h) noexcept {
    Interval r;
    r.lo = l;
    r.hi = h;
    return r;
  }

  static Interval entire() noexcept {
    return unchecked(-detail::kInf, detail::kInf);
  }

  // Outward-rounded diameter.
  double width() const noexcept { return detail::sub_up(hi, lo); }

  // Some point inside the interval (not the exact real midpoint).
  double mid() const noexcept {
    if (lo == -detail::kInf && hi == detail::kInf) return 0.0;
    if (lo == -detail::kInf) return -detail::kMaxD;
    if (hi == detail::kInf) return detail::kMaxD;
    double m = 0.5 * (lo + hi);
    if (!std::isfinite(m)) m = 0.5 * lo + 0.5 * hi;
    return std::fmin(hi, std::fmax(lo, m));
  }

  Interval midpoint() const noexcept { return unchecked(mid(), mid()); }

  double mag() const noexcept { return std::fmax(std::fabs(lo), std::fabs(hi)); }

  double mig() const noexcept {
    if (lo <= 0.0 && 0.0 <= hi) return 0.0;
    return std::fmin(std::fabs(lo), std::fabs(hi));
  }

  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool contains(const Interval& y) const noexcept {
    return lo <= y.lo && y.hi <= hi;
  }
  bool is_thin() const noexcept { return lo == hi; }
  bool strictly_positive() const noexcept { return lo > 0.0; }
  bool strictly_negative() const noexcept { return hi < 0.0; }
  bool excludes_zero() const noexcept { return lo > 0.0 || hi < 0.0; }

  bool operator==(const Interval& y) const noexcept = default;
};

inline Interval operator+(const Interval& x, const Interval& y) noexcept {
  return Interval::unchecked(detail::add_down(x.lo, y.lo),
                             detail::add_up(x.hi, y.hi));
}

inline Interval operator-(const Interval& x, const Interval& y) noexcept {
  return Interval::unchecked(detail::sub_down(x.lo, y.hi),
                             detail::sub_up(x.hi, y.lo));
}

inline Interval operator-(const Interval& x) noexcept {
  return Interval::unchecked(-x.hi, -x.lo);
}

inline Interval operator*(const Interval& x, const Interval& y) noexcept {
  using namespace detail;
  double lo = std::fmin(std::fmin(mul_down(x.lo, y.lo), mul_down(x.lo, y.hi)),
                        std::fmin(mul_down(x.hi, y.lo), mul_down(x.hi, y.hi)));
  double hi = std::fmax(std::fmax(mul_up(x.lo, y.lo), mul_up(x.lo, y.hi)),
                        std::fmax(mul_up(x.hi, y.lo), mul_up(x.hi, y.hi)));
  return Interval::unchecked(lo, hi);
}

inline Interval operator/(const Interval& x, const Interval& y) {
  using namespace detail;
  if (y.lo <= 0.0 && 0.0 <= y.hi)
    throw DivisionByZeroInterval("interval divisor contains zero");
  double lo = std::fmin(std::fmin(div_down(x.lo, y.lo), div_down(x.lo, y.hi)),
                        std::fmin(div_down(x.hi, y.lo), div_down(x.hi, y.hi)));
  double hi = std::fmax(std::fmax(div_up(x.lo, y.lo), div_up(x.lo, y.hi)),
                        std::fmax(div_up(x.hi, y.lo), div_up(x.hi, y.hi)));
  return Interval::unchecked(lo, hi);
}

inline Interval& operator+=(Interval& x, const Interval& y) noexcept { return x = x + y; }
inline Interval& operator-=(Interval& x, const Interval& y) noexcept { return x = x - y; }
inline Interval& operator*=(Interval& x, const Interval& y) noexcept { return x = x * y; }
inline Interval& operator/=(Interval& x, const Interval& y) { return x = x / y; }

// Tight image of x^2 (not x*x: the dependency-free square).
inline Interval sqr(const Interval& x) noexcept {
  double m = x.mig(), M = x.mag();
  return Interval::unchecked(detail::mul_down(m, m), detail::mul_up(M, M));
}

inline Interval sqrt(const Interval& x) {
  if (x.lo < 0.0)
    throw DomainViolation("sqrt of an interval reaching below zero");
  return Interval::unchecked(detail::sqrt_down(x.lo), detail::sqrt_up(x.hi));
}

inline Interval hull(const Interval& x, const Interval& y) noexcept {
  return Interval::unchecked(std::fmin(x.lo, y.lo), std::fmax(x.hi, y.hi));
}

inline std::optional<Interval> intersect(const Interval& x, const Interval& y) noexcept {
  double lo = std::fmax(x.lo, y.lo), hi = std::fmin(x.hi, y.hi);
  if (lo > hi) return std::nullopt;
  return Interval::unchecked(lo, hi);
}

std::vector<Interval> subdivide(const Interval& x, int n);

// Verified enclosures of the constants (the endpoints straddle the real value).
inline Interval pi_iv() noexcept {
  return Interval::unchecked(0x1.921fb54442d18p+1, 0x1.921fb54442d19p+1);
}
inline Interval two_pi_iv() noexcept {
  Interval p = pi_iv();
  return Interval::unchecked(2.0 * p.lo, 2.0 * p.hi); // doubling is exact
}
inline Interval half_pi_iv() noexcept {
  Interval p = pi_iv();
  return Interval::unchecked(0.5 * p.lo, 0.5 * p.hi); // halving is exact
}
inline Interval ln2_iv() noexcept {
  return Interval::unchecked(0x1.62e42fefa39efp-1, 0x1.62e42fefa39f0p-1);
}
inline Interval e_iv() noexcept {
  return Interval::unchecked(0x1.5bf0a8b145769p+1, 0x1.5bf0a8b14576ap+1);
}

// Elementary enclosures.  Each is built from argument reduction plus a Taylor
// core with an explicit Lagrange remainder evaluated in interval arithmetic,
// so containment does not rest on libm accuracy.
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval tan(const Interval& x);
Interval cot(const Interval& x);
Interval sinh(const Interval& x);
Interval cosh(const Interval& x);
Interval atan(const Interval& x);
Interval pow_int(const Interval& x, int k);

// Ordered vector of intervals; carrier for curve points and matrix rows.
struct IntervalVec {
  std::vector<Interval> comps;

  IntervalVec() = default;
  explicit IntervalVec(std::size_t n) : comps(n) {}

  std::size_t size() const noexcept { return comps.size(); }
  Interval& operator[](std::size_t i) noexcept { return comps[i]; }
  const Interval& operator[](std::size_t i) const noexcept { return comps[i]; }
};

IntervalVec operator+(const IntervalVec& a, const IntervalVec& b);
IntervalVec operator-(const IntervalVec& a, const IntervalVec& b);
IntervalVec operator*(const Interval& s, const IntervalVec& a);
Interval dot(const IntervalVec& a, const IntervalVec& b);

// Textual forms.  to_string round-trips binary64 endpoints exactly
// (17 significant digits); parse applies no widening for that reason.
// parse_interval_outward nudges endpoints outward for literals of unknown
// provenance.  format_compressed implements the shared-prefix display
// `prefix^lo-tail_hi-tail`; parse_compressed always returns a superset.
std::string to_string(const Interval& x);
Interval parse_interval(const std::string& s);
Interval parse_interval_outward(const std::string& s);
std::string format_compressed(const Interval& x, int digits);
Interval parse_compressed(const std::string& s);

} // namespace rigor

#endif // RIGOR_INTERVAL_HPP
