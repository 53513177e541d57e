#include "rigor/jet.hpp"

namespace rigor {

namespace {

thread_local long long g_mul_count = 0;

Interval imul(const Interval& a, const Interval& b) {
  ++g_mul_count;
  return a * b;
}

void check_compatible(const TaylorJet& u, const TaylorJet& v) {
  if (u.order() != v.order())
    throw BaseMismatch("jet orders differ");
  if (!(u.base() == v.base()))
    throw BaseMismatch("jets expanded at different bases");
}

} // namespace

namespace jet_stats {
long long mul_count() noexcept { return g_mul_count; }
void reset_mul_count() noexcept { g_mul_count = 0; }
} // namespace jet_stats

TaylorJet TaylorJet::constant(const Interval& value, const Interval& base,
                              int order) {
  std::vector<Interval> c(std::size_t(order) + 1, Interval(0.0));
  c[0] = value;
  return TaylorJet(base, std::move(c));
}

TaylorJet TaylorJet::variable(const Interval& base, int order) {
  std::vector<Interval> c(std::size_t(order) + 1, Interval(0.0));
  c[0] = base;
  if (order >= 1) c[1] = Interval(1.0);
  return TaylorJet(base, std::move(c));
}

Interval TaylorJet::derivative(int k) const {
  Interval f(1.0);
  for (int j = 2; j <= k; ++j) f = f * Interval(double(j));
  return f * coeffs_.at(std::size_t(k));
}

TaylorJet operator+(const TaylorJet& u, const TaylorJet& v) {
  check_compatible(u, v);
  std::vector<Interval> c(u.coeffs());
  for (int k = 0; k <= u.order(); ++k) c[std::size_t(k)] += v[k];
  return TaylorJet(u.base(), std::move(c));
}

TaylorJet operator-(const TaylorJet& u, const TaylorJet& v) {
  check_compatible(u, v);
  std::vector<Interval> c(u.coeffs());
  for (int k = 0; k <= u.order(); ++k) c[std::size_t(k)] -= v[k];
  return TaylorJet(u.base(), std::move(c));
}

TaylorJet operator-(const TaylorJet& u) {
  std::vector<Interval> c(u.coeffs());
  for (auto& x : c) x = -x;
  return TaylorJet(u.base(), std::move(c));
}

TaylorJet operator*(const TaylorJet& u, const TaylorJet& v) {
  check_compatible(u, v);
  int n = u.order();
  std::vector<Interval> c(std::size_t(n) + 1, Interval(0.0));
  for (int k = 0; k <= n; ++k) {
    Interval s(0.0);
    for (int j = 0; j <= k; ++j) s += imul(u[j], v[k - j]);
    c[std::size_t(k)] = s;
  }
  return TaylorJet(u.base(), std::move(c));
}

TaylorJet operator/(const TaylorJet& u, const TaylorJet& v) {
  check_compatible(u, v);
  if (v[0].lo <= 0.0 && 0.0 <= v[0].hi)
    throw DivisionByZeroInterval("jet division: leading divisor coefficient contains zero");
  int n = u.order();
  std::vector<Interval> w(std::size_t(n) + 1);
  for (int k = 0; k <= n; ++k) {
    Interval s = u[k];
    for (int j = 1; j <= k; ++j) s -= imul(v[j], w[std::size_t(k - j)]);
    w[std::size_t(k)] = s / v[0];
  }
  return TaylorJet(u.base(), std::move(w));
}

TaylorJet operator+(const TaylorJet& u, const Interval& c) {
  std::vector<Interval> w(u.coeffs());
  w[0] += c;
  return TaylorJet(u.base(), std::move(w));
}
TaylorJet operator+(const Interval& c, const TaylorJet& u) { return u + c; }
TaylorJet operator-(const TaylorJet& u, const Interval& c) {
  std::vector<Interval> w(u.coeffs());
  w[0] -= c;
  return TaylorJet(u.base(), std::move(w));
}
TaylorJet operator-(const Interval& c, const TaylorJet& u) { return -(u - c); }
TaylorJet operator*(const TaylorJet& u, const Interval& c) {
  std::vector<Interval> w(u.coeffs());
  for (auto& x : w) x = imul(x, c);
  return TaylorJet(u.base(), std::move(w));
}
TaylorJet operator*(const Interval& c, const TaylorJet& u) { return u * c; }
TaylorJet operator/(const TaylorJet& u, const Interval& c) {
  if (c.lo <= 0.0 && 0.0 <= c.hi)
    throw DivisionByZeroInterval("jet / interval containing zero");
  std::vector<Interval> w(u.coeffs());
  for (auto& x : w) x = x / c;
  return TaylorJet(u.base(), std::move(w));
}
TaylorJet operator/(const Interval& c, const TaylorJet& u) {
  return TaylorJet::constant(c, u.base(), u.order()) / u;
}

TaylorJet exp(const TaylorJet& u) {
  int n = u.order();
  std::vector<Interval> e(std::size_t(n) + 1);
  e[0] = exp(u[0]);
  for (int k = 1; k <= n; ++k) {
    Interval s(0.0);
    for (int j = 1; j <= k; ++j)
      s += Interval(double(j)) * imul(u[j], e[std::size_t(k - j)]);
    e[std::size_t(k)] = s / Interval(double(k));
  }
  return TaylorJet(u.base(), std::move(e));
}

SinCosJets sin_cos(const TaylorJet& u) {
  int n = u.order();
  std::vector<Interval> s(std::size_t(n) + 1), c(std::size_t(n) + 1);
  s[0] = sin(u[0]);
  c[0] = cos(u[0]);
  for (int k = 1; k <= n; ++k) {
    Interval as(0.0), ac(0.0);
    for (int j = 0; j <= k - 1; ++j) {
      Interval w = Interval(double(j + 1)) * u[j + 1];
      as += imul(c[std::size_t(k - 1 - j)], w);
      ac += imul(s[std::size_t(k - 1 - j)], w);
    }
    s[std::size_t(k)] = as / Interval(double(k));
    c[std::size_t(k)] = -(ac / Interval(double(k)));
  }
  return {TaylorJet(u.base(), std::move(s)), TaylorJet(u.base(), std::move(c))};
}

SinhCoshJets sinh_cosh(const TaylorJet& u) {
  int n = u.order();
  std::vector<Interval> s(std::size_t(n) + 1), c(std::size_t(n) + 1);
  s[0] = sinh(u[0]);
  c[0] = cosh(u[0]);
  for (int k = 1; k <= n; ++k) {
    Interval as(0.0), ac(0.0);
    for (int j = 0; j <= k - 1; ++j) {
      Interval w = Interval(double(j + 1)) * u[j + 1];
      as += imul(c[std::size_t(k - 1 - j)], w);
      ac += imul(s[std::size_t(k - 1 - j)], w);
    }
    s[std::size_t(k)] = as / Interval(double(k));
    c[std::size_t(k)] = ac / Interval(double(k)); // hyperbolic: plus sign
  }
  return {TaylorJet(u.base(), std::move(s)), TaylorJet(u.base(), std::move(c))};
}

TaylorJet sqrt(const TaylorJet& u) {
  if (u[0].lo <= 0.0)
    throw DomainViolation("jet sqrt: leading coefficient reaches <= 0");
  int n = u.order();
  std::vector<Interval> s(std::size_t(n) + 1);
  s[0] = sqrt(u[0]);
  Interval twos0 = Interval(2.0) * s[0];
  for (int k = 1; k <= n; ++k) {
    Interval acc = u[k];
    for (int j = 1; j <= k - 1; ++j)
      acc -= imul(s[std::size_t(j)], s[std::size_t(k - j)]);
    s[std::size_t(k)] = acc / twos0;
  }
  return TaylorJet(u.base(), std::move(s));
}

TaylorJet sqr(const TaylorJet& u) {
  int n = u.order();
  std::vector<Interval> c(std::size_t(n) + 1, Interval(0.0));
  for (int k = 0; k <= n; ++k) {
    Interval s(0.0);
    for (int j = 0; 2 * j < k; ++j) s += imul(u[j], u[k - j]);
    s = Interval(2.0) * s;
    if (k % 2 == 0) s += sqr(u[k / 2]);
    c[std::size_t(k)] = s;
  }
  return TaylorJet(u.base(), std::move(c));
}

TaylorJet pow_int(const TaylorJet& u, int k) {
  if (k < 0)
    return Interval(1.0) / pow_int(u, -k);
  TaylorJet acc = TaylorJet::constant(Interval(1.0), u.base(), u.order());
  TaylorJet base = u;
  int e = k;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = sqr(base);
  }
  return acc;
}

Interval eval_range(const JetFn& f, const Interval& x) {
  return f(TaylorJet::variable(x, 0))[0];
}

TaylorRemainder jet_eval_remainder(const JetFn& f, const Interval& domain,
                                   int order, Centering centering) {
  Interval c = centering == Centering::left ? Interval(domain.lo)
                                            : domain.midpoint();
  TaylorJet at_center = f(TaylorJet::variable(c, order));
  TaylorJet over_domain = f(TaylorJet::variable(domain, order + 1));
  TaylorRemainder r;
  r.center = c;
  r.poly = at_center.coeffs();
  r.remainder = over_domain[order + 1];
  return r;
}

} // namespace rigor
