// Elementary enclosures, subdivision and textual formats for Interval.
//
// Point kernels follow one pattern: reduce the argument with interval
// constants, run a short Taylor polynomial in interval Horner form, and add
// the Lagrange remainder as an interval term.  Nothing here trusts libm
// beyond IEEE-exact +,-,*,/ ,sqrt and fma.

#include "rigor/interval.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace rigor {

using detail::kInf;
using detail::kMaxD;
using detail::next_down;
using detail::next_up;

namespace {

// 1/k! as intervals, built by interval division so no representability
// assumptions enter.
const Interval& inv_fact(int k) {
  static const std::array<Interval, 26> table = [] {
    std::array<Interval, 26> t;
    t[0] = Interval(1.0);
    for (int j = 1; j < 26; ++j) t[j] = t[j - 1] / Interval(double(j));
    return t;
  }();
  return table.at(static_cast<std::size_t>(k));
}

Interval sym(double m) { return Interval::unchecked(-m, m); }

// ldexp with outward safety at the subnormal/overflow edges.
Interval scale2(const Interval& v, int k) {
  double lo = std::ldexp(v.lo, k);
  double hi = std::ldexp(v.hi, k);
  if (std::fabs(lo) < 0x1p-1021 && lo != 0.0) lo = next_down(lo);
  if (std::fabs(hi) < 0x1p-1021 && hi != 0.0) hi = next_up(hi);
  if (lo == kInf) lo = kMaxD;
  if (hi == -kInf) hi = -kMaxD;
  return Interval::unchecked(lo, hi);
}

constexpr double kInvLn2 = 0x1.71547652b82fep+0;
constexpr double kTwoOverPi = 0x1.45f306dc9c883p-1;

// e^x for a double x, |result| as a tight enclosure.
Interval exp_point(double x) {
  if (x == 0.0) return Interval(1.0);
  if (x >= 709.8) return Interval::unchecked(kMaxD, kInf);
  if (x <= -745.2) return Interval::unchecked(0.0, 0x1p-1074);
  double k = std::nearbyint(x * kInvLn2);
  Interval r = Interval(x) - Interval(k) * ln2_iv(); // |r| <= 0.347
  Interval p = inv_fact(13);
  for (int j = 12; j >= 0; --j) p = p * r + inv_fact(j);
  // e^r = P13(r) + r^14/14! * e^theta, theta between 0 and r
  Interval rem = pow_int(r, 14) * inv_fact(14) * Interval(0.70, 1.42);
  return scale2(p + rem, static_cast<int>(k));
}

Interval log_point(double x) {
  int k = 0;
  double m = std::frexp(x, &k); // m in [0.5,1)
  if (m < 0.70710678118654752) {
    m *= 2.0;
    --k;
  }
  Interval t = (Interval(m) - Interval(1.0)) / (Interval(m) + Interval(1.0));
  Interval z = sqr(t); // |t| <= 0.1716
  Interval s = Interval(1.0) / Interval(21.0);
  for (int j = 9; j >= 0; --j) s = s * z + Interval(1.0) / Interval(2.0 * j + 1.0);
  Interval tail =
      pow_int(sym(t.mag()), 23) / (Interval(23.0) * (Interval(1.0) - z));
  Interval lnm = Interval(2.0) * t * s + tail;
  return Interval(double(k)) * ln2_iv() + lnm;
}

Interval clamp_unit(const Interval& v) {
  return Interval::unchecked(std::fmax(v.lo, -1.0), std::fmin(v.hi, 1.0));
}

Interval sin_kernel(const Interval& r) { // |r| <= 1
  Interval u = sqr(r);
  Interval s(0.0);
  for (int j = 9; j >= 0; --j) {
    Interval c = inv_fact(2 * j + 1);
    if (j % 2 == 1) c = -c;
    s = s * u + c;
  }
  Interval rem = sym(pow_int(sym(r.mag()), 21).hi) * inv_fact(21);
  return clamp_unit(r * s + rem);
}

Interval cos_kernel(const Interval& r) { // |r| <= 1
  Interval u = sqr(r);
  Interval s(0.0);
  for (int j = 10; j >= 0; --j) {
    Interval c = inv_fact(2 * j);
    if (j % 2 == 1) c = -c;
    s = s * u + c;
  }
  Interval rem = sym(pow_int(sym(r.mag()), 22).hi) * inv_fact(22);
  return clamp_unit(s + rem);
}

struct SinCos {
  Interval s, c;
};

SinCos sin_cos_point(double x) {
  if (std::fabs(x) > 1e15) return {sym(1.0), sym(1.0)}; // reduction hopeless
  double k = std::nearbyint(x * kTwoOverPi);
  Interval r = Interval(x) - Interval(k) * half_pi_iv();
  long long kk = static_cast<long long>(k);
  int q = static_cast<int>(((kk % 4) + 4) % 4);
  Interval s = sin_kernel(r), c = cos_kernel(r);
  switch (q) {
    case 0: return {s, c};
    case 1: return {c, -s};
    case 2: return {-s, -c};
    default: return {-c, s};
  }
}

// Does any point pi*(offset/2) + 2*pi*k, k integer, possibly lie in [x]?
// Errs on the side of "yes", which only widens the trig range to +-1.
bool hits_critical(const Interval& x, int half_pi_multiples) {
  Interval base = half_pi_iv() * Interval(double(half_pi_multiples));
  double tp = two_pi_iv().lo;
  double k0 = std::floor((x.lo - base.hi) / tp) - 1.0;
  double k1 = std::ceil((x.hi - base.lo) / tp) + 1.0;
  for (double k = k0; k <= k1; k += 1.0) {
    Interval crit = base + Interval(k) * two_pi_iv();
    if (crit.lo <= x.hi && crit.hi >= x.lo) return true;
  }
  return false;
}

Interval trig_range(const Interval& x, bool is_sin) {
  if (x.width() >= two_pi_iv().hi) return sym(1.0);
  Interval a = is_sin ? sin_cos_point(x.lo).s : sin_cos_point(x.lo).c;
  Interval b = is_sin ? sin_cos_point(x.hi).s : sin_cos_point(x.hi).c;
  Interval r = hull(a, b);
  int max_off = is_sin ? 1 : 0;  // sin peaks at pi/2, cos at 0 (mod 2pi)
  int min_off = is_sin ? -1 : 2; // sin bottoms at -pi/2, cos at pi
  if (hits_critical(x, max_off)) r = Interval::unchecked(r.lo, 1.0);
  if (hits_critical(x, min_off)) r = Interval::unchecked(-1.0, r.hi);
  return clamp_unit(r);
}

Interval sinh_point(double x) {
  if (std::fabs(x) <= 1.0) {
    Interval r(x);
    Interval u = sqr(r);
    Interval s(0.0);
    for (int j = 7; j >= 0; --j) s = s * u + inv_fact(2 * j + 1);
    Interval rem = pow_int(r, 17) * inv_fact(17) * Interval(1.0, 1.5431);
    return r * s + rem;
  }
  Interval d = exp_point(x) - exp_point(-x);
  return Interval::unchecked(0.5 * d.lo, 0.5 * d.hi);
}

Interval cosh_point(double x) {
  Interval s = exp_point(x) + exp_point(-x);
  Interval r = Interval::unchecked(0.5 * s.lo, 0.5 * s.hi);
  return Interval::unchecked(std::fmax(r.lo, 1.0), std::fmax(r.hi, 1.0));
}

// atan core for t within [0, 1 + eps]: two half-angle steps then the
// alternating series at |t| <= 0.2.
Interval atan_small(const Interval& t) {
  Interval one(1.0);
  Interval t1 = t / (one + sqrt(one + sqr(t)));
  Interval t2 = t1 / (one + sqrt(one + sqr(t1)));
  Interval u = sqr(t2);
  Interval s(0.0);
  for (int j = 12; j >= 0; --j) {
    Interval c = Interval(1.0) / Interval(2.0 * j + 1.0);
    if (j % 2 == 1) c = -c;
    s = s * u + c;
  }
  Interval rem = sym(pow_int(sym(t2.mag()), 27).hi / 27.0 * (1.0 + 1e-12));
  return Interval(4.0) * (t2 * s + rem);
}

Interval atan_point(double x) {
  double a = std::fabs(x);
  Interval r;
  if (a <= 1.0) {
    r = atan_small(Interval(a));
  } else {
    Interval inv = Interval(1.0) / Interval(a);
    r = half_pi_iv() - atan_small(inv);
  }
  return x < 0 ? -r : r;
}

Interval thin_pow(double v, int k) { // binary powering of a thin base
  Interval acc(1.0);
  Interval base(v);
  int e = k;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = sqr(base);
  }
  return acc;
}

} // namespace

Interval exp(const Interval& x) {
  return Interval::unchecked(exp_point(x.lo).lo, exp_point(x.hi).hi);
}

Interval log(const Interval& x) {
  if (x.lo <= 0.0) throw DomainViolation("log of an interval reaching <= 0");
  return Interval::unchecked(log_point(x.lo).lo, log_point(x.hi).hi);
}

Interval sin(const Interval& x) { return trig_range(x, true); }
Interval cos(const Interval& x) { return trig_range(x, false); }

Interval tan(const Interval& x) {
  Interval c = cos(x);
  if (c.lo <= 0.0 && 0.0 <= c.hi)
    throw DomainViolation("tan over an interval containing a pole");
  SinCos a = sin_cos_point(x.lo), b = sin_cos_point(x.hi);
  return Interval::unchecked((a.s / a.c).lo, (b.s / b.c).hi);
}

Interval cot(const Interval& x) {
  Interval s = sin(x);
  if (s.lo <= 0.0 && 0.0 <= s.hi)
    throw DomainViolation("cot over an interval containing a pole");
  SinCos a = sin_cos_point(x.lo), b = sin_cos_point(x.hi);
  return Interval::unchecked((b.c / b.s).lo, (a.c / a.s).hi); // decreasing
}

Interval sinh(const Interval& x) {
  return Interval::unchecked(sinh_point(x.lo).lo, sinh_point(x.hi).hi);
}

Interval cosh(const Interval& x) {
  return Interval::unchecked(cosh_point(x.mig()).lo, cosh_point(x.mag()).hi);
}

Interval atan(const Interval& x) {
  return Interval::unchecked(atan_point(x.lo).lo, atan_point(x.hi).hi);
}

Interval pow_int(const Interval& x, int k) {
  if (k == 0) return Interval(1.0);
  if (k < 0) return Interval(1.0) / pow_int(x, -k);
  if (k % 2 == 0)
    return Interval::unchecked(thin_pow(x.mig(), k).lo, thin_pow(x.mag(), k).hi);
  return Interval::unchecked(thin_pow(x.lo, k).lo, thin_pow(x.hi, k).hi);
}

std::vector<Interval> subdivide(const Interval& x, int n) {
  if (n < 1) throw IntervalError("subdivide needs n >= 1");
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(n));
  double prev = x.lo;
  for (int i = 1; i <= n; ++i) {
    double c = (i == n) ? x.hi
                        : x.lo + (x.hi - x.lo) * (double(i) / double(n));
    c = std::fmin(x.hi, std::fmax(prev, c));
    out.push_back(Interval::unchecked(prev, c));
    prev = c;
  }
  return out;
}

IntervalVec operator+(const IntervalVec& a, const IntervalVec& b) {
  IntervalVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntervalVec operator-(const IntervalVec& a, const IntervalVec& b) {
  IntervalVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

IntervalVec operator*(const Interval& s, const IntervalVec& a) {
  IntervalVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Interval dot(const IntervalVec& a, const IntervalVec& b) {
  Interval acc(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

std::string to_string(const Interval& x) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "[%.17g,%.17g]", x.lo, x.hi);
  return buf;
}

Interval parse_interval(const std::string& s) {
  const char* p = s.c_str();
  while (*p == ' ') ++p;
  if (*p != '[') {
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p) throw IntervalError("cannot parse interval literal: " + s);
    return Interval(v);
  }
  ++p;
  char* end = nullptr;
  double lo = std::strtod(p, &end);
  if (end == p) throw IntervalError("cannot parse interval literal: " + s);
  p = end;
  while (*p == ' ' || *p == ',') ++p;
  double hi = std::strtod(p, &end);
  if (end == p) throw IntervalError("cannot parse interval literal: " + s);
  return Interval(lo, hi);
}

Interval parse_interval_outward(const std::string& s) {
  Interval v = parse_interval(s);
  return Interval::unchecked(next_down(v.lo), next_up(v.hi));
}

namespace {

struct Decimal {
  bool neg = false;
  int exp = 0;            // value = d[0].d[1..] * 10^exp
  std::string digits;     // 20 significant digits
};

bool decompose(double v, Decimal& d) {
  if (v == 0.0 || !std::isfinite(v)) return false;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.19e", std::fabs(v));
  d.neg = v < 0;
  const char* e = std::strchr(buf, 'e');
  if (!e) return false;
  d.exp = std::atoi(e + 1);
  d.digits.clear();
  for (const char* p = buf; p != e; ++p)
    if (*p >= '0' && *p <= '9') d.digits.push_back(*p);
  return d.digits.size() == 20;
}

// Round the digit string at `keep` digits: dir = +1 away from zero,
// -1 toward zero, 0 to nearest.  Returns false if a carry would change
// the exponent.
bool round_digits(std::string& ds, int keep, int dir) {
  bool tail_nonzero = false;
  for (std::size_t i = static_cast<std::size_t>(keep); i < ds.size(); ++i)
    if (ds[i] != '0') tail_nonzero = true;
  bool up = (dir > 0 && tail_nonzero) ||
            (dir == 0 && keep < int(ds.size()) &&
             ds[static_cast<std::size_t>(keep)] >= '5');
  ds.resize(static_cast<std::size_t>(keep));
  if (up) {
    int i = keep - 1;
    while (i >= 0) {
      if (ds[static_cast<std::size_t>(i)] != '9') {
        ++ds[static_cast<std::size_t>(i)];
        return true;
      }
      ds[static_cast<std::size_t>(i)] = '0';
      --i;
    }
    return false; // carried past the leading digit
  }
  return true;
}

std::string positional(const Decimal& d) {
  std::string s = d.neg ? "-" : "";
  int e = d.exp;
  if (e >= 0) {
    for (int i = 0; i <= e; ++i)
      s.push_back(i < int(d.digits.size()) ? d.digits[std::size_t(i)] : '0');
    if (e + 1 < int(d.digits.size())) {
      s.push_back('.');
      s.append(d.digits.begin() + e + 1, d.digits.end());
    }
  } else {
    s += "0.";
    for (int i = 1; i < -e; ++i) s.push_back('0');
    s.append(d.digits);
  }
  return s;
}

} // namespace

std::string format_compressed(const Interval& x, int digits) {
  if (digits < 1) digits = 1;
  if (!std::isfinite(x.lo) || !std::isfinite(x.hi)) return to_string(x);
  if (x.lo == x.hi) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x.lo);
    return buf;
  }
  if (x.lo <= 0.0 && 0.0 <= x.hi) return to_string(x);
  Decimal a, b;
  if (!decompose(x.lo, a) || !decompose(x.hi, b)) return to_string(x);
  if (a.exp != b.exp || a.exp < -4 || a.exp > 15) return to_string(x);
  int shared = 0;
  while (shared < 20 && a.digits[std::size_t(shared)] == b.digits[std::size_t(shared)])
    ++shared;
  int keep = std::min(20, shared + digits);
  bool neg = a.neg;
  // Prefer nearest rounding when the parser's one-ULP outward nudge still
  // recovers a superset; otherwise round the digit string outward itself.
  auto render = [&](const Decimal& d, bool is_lo) -> std::optional<std::string> {
    Decimal near = d, out = d;
    bool lo_side = is_lo != neg; // toward -inf means magnitude down iff positive
    if (round_digits(near.digits, keep, 0)) {
      std::string s = positional(near);
      double back = std::strtod(s.c_str(), nullptr);
      if (is_lo ? next_down(back) <= x.lo : next_up(back) >= x.hi) return s;
    }
    if (!round_digits(out.digits, keep, lo_side ? -1 : +1)) return std::nullopt;
    return positional(out);
  };
  auto la = render(a, true), lb = render(b, false);
  if (!la || !lb) return to_string(x);
  std::string sa = *la, sb = *lb;
  std::size_t pfx = 0;
  while (pfx < sa.size() && pfx < sb.size() && sa[pfx] == sb[pfx]) ++pfx;
  if (sa == sb) return sa;
  if (pfx == 0) return to_string(x);
  return sa.substr(0, pfx) + "^" + sa.substr(pfx) + "_" + sb.substr(pfx);
}

Interval parse_compressed(const std::string& s) {
  if (s.find('[') != std::string::npos) return parse_interval_outward(s);
  std::size_t caret = s.find('^');
  if (caret == std::string::npos) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw IntervalError("cannot parse: " + s);
    return Interval::unchecked(next_down(v), next_up(v));
  }
  std::size_t under = s.find('_', caret);
  if (under == std::string::npos) throw IntervalError("cannot parse: " + s);
  std::string prefix = s.substr(0, caret);
  std::string lo_s = prefix + s.substr(caret + 1, under - caret - 1);
  std::string hi_s = prefix + s.substr(under + 1);
  double lo = std::strtod(lo_s.c_str(), nullptr);
  double hi = std::strtod(hi_s.c_str(), nullptr);
  if (lo > hi) std::swap(lo, hi);
  return Interval::unchecked(next_down(lo), next_up(hi));
}

} // namespace rigor
