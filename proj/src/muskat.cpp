#include "rigor/muskat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace rigor::muskat {

namespace {

Interval outward(double v) {
  return Interval(rigor::detail::next_down(v), rigor::detail::next_up(v));
}

TaylorJet cjet(const Interval& v, const TaylorJet& like) {
  return TaylorJet::constant(v, like.base(), like.order());
}

// run f over [0,n) on the available cores; results must be written to
// index-addressed slots by the caller, which keeps everything deterministic
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  unsigned hw = std::thread::hardware_concurrency();
  if (n <= 1 || hw <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      f(i);
    }
  };
  unsigned k = std::min<unsigned>(hw, unsigned(n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

} // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Turn: return "Turn";
    case Verdict::NoTurn: return "NoTurn";
    default: return "Unknown";
  }
}

// ---------------------------------------------------------------- curves

CurveFamily curve_theorem1() {
  CurveFamily c;
  c.B = outward(1e-4);
  Interval B = c.B;
  c.z1 = [B](const TaylorJet& a) { return a - sin(a) * exp(-(B * sqr(a))); };
  c.dz1 = [B](const TaylorJet& a) {
    TaylorJet g = exp(-(B * sqr(a)));
    return Interval(1.0) - cos(a) * g + Interval(2.0) * B * (a * sin(a) * g);
  };
  Interval b1 = pi_iv() / Interval(3.0);
  Interval b2 = half_pi_iv();
  Interval b3 = Interval(2.0) * pi_iv() / Interval(3.0);
  c.breakpoints = {b1, b2, b3};
  c.pieces.push_back(
      {Interval(0.0, b1.hi),
       [](const TaylorJet& a) { return sin(a * Interval(3.0)) / Interval(3.0); },
       [](const TaylorJet& a) { return cos(a * Interval(3.0)); }});
  c.pieces.push_back(
      {Interval(b1.lo, b2.hi),
       [b1](const TaylorJet& a) { return cjet(b1, a) - a; },
       [](const TaylorJet& a) { return cjet(Interval(-1.0), a); }});
  c.pieces.push_back(
      {Interval(b2.lo, b3.hi),
       [b3](const TaylorJet& a) { return a - cjet(b3, a); },
       [](const TaylorJet& a) { return cjet(Interval(1.0), a); }});
  c.support_radius = b3;
  return c;
}

CurveFamily curve_bifurcation(const Interval& h2) {
  CurveFamily c;
  c.B = outward(1e-4);
  c.h2 = h2;
  Interval B = c.B;
  c.z1 = [B](const TaylorJet& a) { return a - sin(a) * exp(-(B * sqr(a))); };
  c.dz1 = [B](const TaylorJet& a) {
    TaylorJet g = exp(-(B * sqr(a)));
    return Interval(1.0) - cos(a) * g + Interval(2.0) * B * (a * sin(a) * g);
  };
  Interval amp = h2 * Interval(3.0) / pi_iv();
  Interval inv25 = Interval(1.0) / Interval(2.5);
  auto gauss = [](const TaylorJet& a) {
    return exp(-sqr(a + Interval(2.0))) + exp(-sqr(a - Interval(2.0)));
  };
  auto dgauss = [](const TaylorJet& a) {
    return Interval(-2.0) * ((a + Interval(2.0)) * exp(-sqr(a + Interval(2.0))) +
                             (a - Interval(2.0)) * exp(-sqr(a - Interval(2.0))));
  };
  c.pieces.push_back(
      {Interval(0.0, pi_iv().hi),
       [amp, inv25, gauss](const TaylorJet& a) {
         return amp * (sin(a * Interval(3.0)) / Interval(3.0) -
                       inv25 * (sin(a) * gauss(a)));
       },
       [amp, inv25, gauss, dgauss](const TaylorJet& a) {
         return amp * (cos(a * Interval(3.0)) -
                       inv25 * (cos(a) * gauss(a) + sin(a) * dgauss(a)));
       }});
  c.breakpoints = {pi_iv()};
  c.support_radius = pi_iv();
  return c;
}

namespace {

// Which piece fully owns a base interval; nullptr with zero=true when the
// base lies beyond the support.
struct PieceRef {
  const CurvePiece* piece = nullptr;
  bool zero = false;
};

PieceRef owner(const CurveFamily& c, const Interval& base) {
  int hits = 0;
  const CurvePiece* hit = nullptr;
  for (const auto& p : c.pieces)
    if (p.domain.contains(base)) {
      ++hits;
      hit = &p;
    }
  if (hits == 1) return {hit, false};
  if (base.lo >= c.support_radius.lo && hits == 0) return {nullptr, true};
  return {nullptr, false}; // straddles a breakpoint sliver
}

} // namespace

TaylorJet CurveFamily::z2_jet(const TaylorJet& a) const {
  PieceRef r = owner(*this, a.base());
  if (r.piece) return r.piece->z2(a);
  if (r.zero) return cjet(Interval(0.0), a);
  if (a.order() == 0) return cjet(z2_range(a.base()), a);
  throw DomainViolation("z2 jet across a breakpoint sliver");
}

TaylorJet CurveFamily::dz2_jet(const TaylorJet& a) const {
  PieceRef r = owner(*this, a.base());
  if (r.piece) return r.piece->dz2(a);
  if (r.zero) return cjet(Interval(0.0), a);
  if (a.order() == 0) return cjet(dz2_range(a.base()), a);
  throw DomainViolation("dz2 jet across a breakpoint sliver");
}

Interval CurveFamily::z2_range(const Interval& a) const {
  bool any = false;
  Interval acc(0.0);
  for (const auto& p : pieces) {
    auto olap = intersect(p.domain, a);
    if (!olap) continue;
    Interval r = eval_range(p.z2, *olap);
    acc = any ? hull(acc, r) : r;
    any = true;
  }
  if (a.hi > support_radius.lo) {
    Interval z(0.0);
    acc = any ? hull(acc, z) : z;
    any = true;
  }
  if (!any) throw DomainViolation("z2 range outside the curve domain");
  return acc;
}

Interval CurveFamily::dz2_range(const Interval& a) const {
  bool any = false;
  Interval acc(0.0);
  for (const auto& p : pieces) {
    auto olap = intersect(p.domain, a);
    if (!olap) continue;
    Interval r = eval_range(p.dz2, *olap);
    acc = any ? hull(acc, r) : r;
    any = true;
  }
  if (a.hi > support_radius.lo) {
    Interval z(0.0);
    acc = any ? hull(acc, z) : z;
    any = true;
  }
  if (!any) throw DomainViolation("dz2 range outside the curve domain");
  return acc;
}

Interval CurveFamily::dz2_at0() const { return eval_range(pieces.front().dz2, Interval(0.0)); }

Interval CurveFamily::z2_sup() const {
  double m = 0;
  for (const Interval& s : subdivide(Interval(0.0, support_radius.hi), 64))
    m = std::fmax(m, z2_range(s).mag());
  return Interval(0.0, m);
}

Interval CurveFamily::dz2_sup() const {
  double m = 0;
  for (const Interval& s : subdivide(Interval(0.0, support_radius.hi), 64))
    m = std::fmax(m, dz2_range(s).mag());
  return Interval(0.0, m);
}

// ------------------------------------------------- A / I1 type integrals

namespace {

// integrand factory given per-piece z2/dz2 jets
using AFactory = std::function<JetFn(const JetFn& z2, const JetFn& dz2)>;

// confined kernel: dz1 sinh(z1) sin(z2) [ (cosh z1 - cos z2)^-2 +
//                                         (cosh z1 + cos z2)^-2 ]
AFactory confined_factory(const CurveFamily& c, bool both_terms) {
  JetFn z1 = c.z1, dz1 = c.dz1;
  return [z1, dz1, both_terms](const JetFn& z2, const JetFn& dz2) -> JetFn {
    (void)dz2;
    return [z1, dz1, z2, both_terms](const TaylorJet& a) {
      TaylorJet w1 = z1(a), w2 = z2(a);
      TaylorJet num = dz1(a) * sinh(w1) * sin(w2);
      TaylorJet ch = cosh(w1), cs = cos(w2);
      TaylorJet t = num / sqr(ch - cs);
      if (both_terms) t = t + num / sqr(ch + cs);
      return t;
    };
  };
}

AFactory flat_factory(const CurveFamily& c) {
  JetFn z1 = c.z1, dz1 = c.dz1;
  return [z1, dz1](const JetFn& z2, const JetFn& dz2) -> JetFn {
    (void)dz2;
    return [z1, dz1, z2](const TaylorJet& a) {
      TaylorJet w1 = z1(a), w2 = z2(a);
      return dz1(a) * w1 * w2 / sqr(sqr(w1) + sqr(w2));
    };
  };
}

// near-origin window: numerator and denominator both vanish (order 6 vs 4);
// integrate the cancelled ratio by a range sweep
Enclosure cancel_window_confined(const CurveFamily& c, bool both_terms,
                                 const MuskatOptions& o) {
  Interval base(0.0, o.cancel_window);
  TaylorJet a = TaylorJet::variable(base, o.cancel_order);
  const CurvePiece& p0 = c.pieces.front();
  TaylorJet w1 = c.z1(a), w2 = p0.z2(a);
  TaylorJet num = c.dz1(a) * sinh(w1) * sin(w2);
  TaylorJet den = sqr(cosh(w1) - cos(w2));
  auto ratio = cancel_expand(num, den, 4);
  Enclosure e = integrate_range(
      [&](const Interval& t) { return ratio.range(t); }, 0.0, o.cancel_window, 64);
  if (both_terms) {
    JetFn plain = [&](const TaylorJet& t) {
      TaylorJet v1 = c.z1(t), v2 = p0.z2(t);
      return c.dz1(t) * sinh(v1) * sin(v2) / sqr(cosh(v1) + cos(v2));
    };
    Enclosure e2 = integrate_range(
        [&](const Interval& t) { return eval_range(plain, t); }, 0.0,
        o.cancel_window, 8);
    e.main += e2.main;
    e.value += e2.value;
  }
  e.scheme = "cancelled-window";
  return e;
}

Enclosure cancel_window_flat(const CurveFamily& c, const MuskatOptions& o) {
  Interval base(0.0, o.cancel_window);
  TaylorJet a = TaylorJet::variable(base, o.cancel_order);
  const CurvePiece& p0 = c.pieces.front();
  TaylorJet w1 = c.z1(a), w2 = p0.z2(a);
  TaylorJet num = c.dz1(a) * w1 * w2;
  TaylorJet den = sqr(sqr(w1) + sqr(w2));
  auto ratio = cancel_expand(num, den, 4);
  Enclosure e = integrate_range(
      [&](const Interval& t) { return ratio.range(t); }, 0.0, o.cancel_window, 64);
  e.scheme = "cancelled-window";
  return e;
}

// piecewise integral of the factory integrand over [from, support]
Enclosure integrate_pieces(const CurveFamily& c, const AFactory& make,
                           double from, const MuskatOptions& o) {
  Enclosure total;
  total.main = Interval(0.0);
  total.error_term = Interval(0.0);
  total.cells = 0;
  AdaptiveOptions ao;
  ao.budget = o.budget;
  ao.taylor_order = o.taylor_order;
  ao.tol = o.tol / double(c.pieces.size() + 1);
  double cursor = from;
  for (std::size_t i = 0; i < c.pieces.size(); ++i) {
    const CurvePiece& p = c.pieces[i];
    double seg_hi = (i < c.breakpoints.size()) ? c.breakpoints[i].lo : p.domain.hi;
    if (seg_hi > cursor) {
      JetFn f = make(p.z2, p.dz2);
      Enclosure e = integrate_adaptive(f, Interval(cursor), Interval(seg_hi), ao);
      total.main += e.main;
      total.error_term += e.error_term;
      total.cells += e.cells;
      total.converged = total.converged && e.converged;
    }
    if (i < c.breakpoints.size()) {
      // one-ULP sliver across the true breakpoint: range sweep via the hull
      const Interval bp = c.breakpoints[i];
      if (bp.hi > bp.lo) {
        Interval sl(bp.lo, bp.hi);
        JetFn range_f = make(
            [&c](const TaylorJet& t) { return cjet(c.z2_range(t.base()), t); },
            [&c](const TaylorJet& t) { return cjet(c.dz2_range(t.base()), t); });
        Interval r = eval_range(range_f, sl);
        Interval contrib = (Interval(bp.hi) - Interval(bp.lo)) * r;
        total.main += contrib;
        total.cells += 1;
      }
      cursor = bp.hi;
    }
  }
  total.value = total.main + total.error_term;
  total.scheme = "piecewise-adaptive";
  return total;
}

} // namespace

Enclosure a_confined(const CurveFamily& curve, const MuskatOptions& opts) {
  Enclosure win = cancel_window_confined(curve, true, opts);
  Enclosure rest =
      integrate_pieces(curve, confined_factory(curve, true), opts.cancel_window, opts);
  Enclosure e;
  Interval lead = Interval(2.0) * curve.dz2_at0();
  e.main = lead * (win.main + rest.main);
  e.error_term = lead * (win.error_term + rest.error_term);
  e.value = lead * (win.value + rest.value);
  e.cells = win.cells + rest.cells;
  e.converged = win.converged && rest.converged;
  e.scheme = "a-confined";
  return e;
}

Enclosure a_flat(const CurveFamily& curve, const MuskatOptions& opts) {
  Enclosure win = cancel_window_flat(curve, opts);
  Enclosure rest =
      integrate_pieces(curve, flat_factory(curve), opts.cancel_window, opts);
  Enclosure e;
  Interval lead = Interval(8.0) * curve.dz2_at0();
  e.main = lead * (win.main + rest.main);
  e.error_term = lead * (win.error_term + rest.error_term);
  e.value = lead * (win.value + rest.value);
  e.cells = win.cells + rest.cells;
  e.converged = win.converged && rest.converged;
  e.scheme = "a-flat";
  return e;
}

Interval support_tail_residual(const CurveFamily& curve) {
  Interval beyond(curve.support_radius.hi, curve.support_radius.hi + 1.0);
  JetFn f = confined_factory(curve, true)(
      [](const TaylorJet& t) { return cjet(Interval(0.0), t); },
      [](const TaylorJet& t) { return cjet(Interval(0.0), t); });
  return eval_range(f, beyond);
}

Enclosure i1(const Interval& h2, const MuskatOptions& opts) {
  CurveFamily curve = curve_bifurcation(h2);
  Enclosure win = cancel_window_confined(curve, true, opts);
  Enclosure rest =
      integrate_pieces(curve, confined_factory(curve, true), opts.cancel_window, opts);
  Enclosure e;
  Interval lead = Interval(2.0) * curve.dz2_at0();
  e.main = lead * (win.main + rest.main);
  e.error_term = lead * (win.error_term + rest.error_term);
  e.value = lead * (win.value + rest.value);
  e.cells = win.cells + rest.cells;
  e.converged = win.converged && rest.converged;
  e.scheme = "i1";
  return e;
}

// --------------------------------------------------------- I2 / DI2

namespace {

struct BifCtx {
  CurveFamily curve;
  Interval h2, K;
  Interval dz20, z2sup, dz2sup, tan_h2;
};

BifCtx make_ctx(const ParamCell& cell) {
  if (cell.K.mag() >= 1.0)
    throw PositivityCertificateFailed("need |K| < 1");
  if (2.0 * cell.h2.hi >= pi_iv().lo)
    throw PositivityCertificateFailed("need 2 h2 < pi");
  if (cell.h2.lo <= 0.0 || cell.h2.hi >= half_pi_iv().lo)
    throw PositivityCertificateFailed("need 0 < h2 < pi/2 for tan(h2)");
  BifCtx c{curve_bifurcation(cell.h2), cell.h2, cell.K, Interval(0.0),
           Interval(0.0), Interval(0.0), Interval(0.0)};
  c.dz20 = c.curve.dz2_at0();
  c.z2sup = c.curve.z2_sup();
  c.dz2sup = c.curve.dz2_sup();
  c.tan_h2 = tan(cell.h2);
  return c;
}

// y-parts of the integrand, jets in y with gamma-dependent interval constants
struct GammaSlice {
  Interval z1r, z2r, dz2r;
};

TaylorJet bif_numerator(const BifCtx& c, const GammaSlice& g, const TaylorJet& y,
                        bool di2) {
  Interval hp = half_pi_iv();
  TaylorJet bracket = Interval(2.0) * y * cosh(y * (hp - c.h2)) * cosh(y * hp) -
                      Interval(2.0) * sinh(y * c.h2) / c.tan_h2;
  TaylorJet num = cjet(g.dz2r, y) * cos(y * g.z1r) * bracket *
                  cosh(y * g.z2r) * cosh(y * (hp - c.h2));
  if (di2) num = num * sinh(y * pi_iv());
  return num;
}

TaylorJet bif_denominator(const BifCtx& c, const TaylorJet& y, bool di2) {
  TaylorJet g = sinh(y * pi_iv()) + c.K * sinh(y * (Interval(2.0) * c.h2));
  if (di2) g = sqr(g);
  return g * cosh(y * half_pi_iv());
}

// strip 0 <= y <= sy: cancel the matched zero at y = 0 per gamma panel
Interval strip_part(const BifCtx& c, bool di2, const MuskatOptions& o) {
  const double sy = o.strip_y;
  const int order = 6;
  std::vector<Interval> panels =
      subdivide(Interval(0.0, pi_iv().lo), o.strip_gamma_panels);
  panels.push_back(Interval(pi_iv().lo, pi_iv().hi)); // gamma sliver
  Interval total(0.0);
  for (const Interval& gp : panels) {
    GammaSlice s{eval_range(c.curve.z1, gp), c.curve.z2_range(gp),
                 c.curve.dz2_range(gp)};
    TaylorJet y = TaylorJet::variable(Interval(0.0, sy), order);
    TaylorJet num = bif_numerator(c, s, y, di2);
    TaylorJet den = bif_denominator(c, y, di2);
    auto ratio = cancel_expand(num, den, di2 ? 2 : 1);
    Enclosure yint = integrate_range(
        [&](const Interval& t) { return ratio.range(t); }, 0.0, sy, 6);
    total += (Interval(gp.hi) - Interval(gp.lo)) * yint.value;
  }
  return total;
}

// certified bound on the integral over gamma in [0,pi], y >= Y
struct TailBound {
  double Y = 0;
  Interval tail;
  bool ok = false;
};

TailBound y_tail(const BifCtx& c, bool di2, double tol_tail) {
  Interval kappa1 = Interval(2.0) * c.h2 - c.z2sup;
  Interval kappa2 = pi_iv() - c.z2sup;
  if (kappa1.lo <= 0.0)
    throw PositivityCertificateFailed("no exponential decay: 2 h2 <= sup|z2|");
  TailBound best;
  for (double Y : {4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0}) {
    Interval Yi(Y);
    // sinh(2 h2 y)/sinh(pi y) <= e^((2h2-pi)Y) / (1-e^(-2 pi Y)) for y >= Y
    Interval damp = Interval(1.0) - exp(-(Interval(2.0) * pi_iv() * Yi));
    Interval r0 = exp((Interval(2.0) * c.h2 - pi_iv()) * Yi) / damp;
    Interval c0 = Interval(1.0) - Interval(c.K.mag()) * r0;
    if (c0.lo <= 0.0) continue;
    Interval pref = Interval(4.0) * c.dz2sup / (c0 * damp);
    if (di2) pref = pref / (c0 * damp);
    // int_Y^inf 2 y e^(-k1 y) dy and (1/tan h2) int_Y^inf e^(-k2 y) dy
    Interval ia = Interval(2.0) * exp(-(kappa1 * Yi)) *
                  (Yi / kappa1 + Interval(1.0) / sqr(kappa1));
    Interval ib = exp(-(kappa2 * Yi)) / (kappa2 * c.tan_h2);
    Interval bound = pi_iv() * pref * (ia + ib);
    best.Y = Y;
    best.tail = Interval::unchecked(-bound.hi, bound.hi);
    best.ok = bound.hi <= tol_tail;
    if (best.ok) break;
  }
  if (best.Y == 0) throw PositivityCertificateFailed("tail bound unavailable");
  return best;
}

Enclosure bif_double_integral(const ParamCell& cell, bool di2,
                              const MuskatOptions& o) {
  BifCtx c = make_ctx(cell);
  TailBound tb = y_tail(c, di2, o.tail_tol_frac * o.tol_2d);
  Interval strip = strip_part(c, di2, o);

  Jet2Fn F = [&c, di2](const TaylorJet& g, const TaylorJet& y) {
    TaylorJet w1 = c.curve.z1(g);
    TaylorJet w2 = c.curve.pieces.front().z2(g);
    TaylorJet dw2 = c.curve.pieces.front().dz2(g);
    Interval hp = half_pi_iv();
    TaylorJet bracket = Interval(2.0) * y * cosh(y * (hp - c.h2)) * cosh(y * hp) -
                        Interval(2.0) * sinh(y * c.h2) / c.tan_h2;
    TaylorJet num = dw2 * cos(w1 * y) * bracket * cosh(y * w2) *
                    cosh(y * (hp - c.h2));
    TaylorJet den = sinh(y * pi_iv()) + c.K * sinh(y * (Interval(2.0) * c.h2));
    if (di2) {
      num = num * sinh(y * pi_iv());
      den = sqr(den);
    }
    return num / (den * cosh(y * hp));
  };
  Adaptive2DOptions a2;
  a2.tol = o.tol_2d;
  a2.budget = o.budget_2d;
  a2.breakpoints_x = {0.5, 1.0, 1.5, 2.0, 2.5};
  for (double v : {3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
    if (v > o.strip_y && v < tb.Y) a2.breakpoints_y.push_back(v);
  Enclosure e =
      integrate_2d(F, Interval(0.0, pi_iv().lo), Interval(o.strip_y, tb.Y), a2);

  // gamma sliver at pi over the full y range: a few log-spaced range boxes
  Interval sliver(pi_iv().lo, pi_iv().hi);
  GammaSlice s{eval_range(c.curve.z1, sliver), c.curve.z2_range(sliver),
               c.curve.dz2_range(sliver)};
  Interval sliver_sum(0.0);
  double ylo = o.strip_y;
  for (double yhi : {1e-3, 1e-2, 0.1, 1.0, 4.0, 16.0, 64.0}) {
    if (yhi <= ylo) continue;
    double top = std::fmin(yhi, tb.Y);
    if (top <= ylo) break;
    TaylorJet y = TaylorJet::variable(Interval(ylo, top), 0);
    Interval num = bif_numerator(c, s, y, di2)[0];
    Interval den = bif_denominator(c, y, di2)[0];
    Interval r = num / den;
    sliver_sum += (Interval(top) - Interval(ylo)) * r;
    ylo = top;
    if (ylo >= tb.Y) break;
  }
  Interval sliver_contrib = (Interval(sliver.hi) - Interval(sliver.lo)) * sliver_sum;

  Enclosure out;
  out.main = e.main + strip + sliver_contrib;
  out.error_term = tb.tail;
  out.value = out.main + out.error_term;
  out.cells = e.cells + 1;
  out.converged = e.converged;
  out.scheme = di2 ? "di2" : "i2";
  Interval lead = Interval(4.0) * c.dz20;
  if (!di2) lead = lead * c.K;
  out.main = lead * out.main;
  out.error_term = lead * out.error_term;
  out.value = lead * out.value;
  return out;
}

} // namespace

Enclosure i2(const ParamCell& cell, const MuskatOptions& opts) {
  if (cell.K.lo == 0.0 && cell.K.hi == 0.0) {
    Enclosure e;
    e.main = Interval(0.0);
    e.error_term = Interval(0.0);
    e.value = Interval(0.0);
    e.scheme = "i2";
    return e; // the K prefactor kills everything
  }
  return bif_double_integral(cell, false, opts);
}

Enclosure di2(const ParamCell& cell, const MuskatOptions& opts) {
  return bif_double_integral(cell, true, opts);
}

CellVerdict dt_rt_sign(const ParamCell& cell, const MuskatOptions& opts) {
  Enclosure e1 = i1(cell.h2, opts);
  Enclosure e2 = i2(cell, opts);
  CellVerdict v;
  v.cell = cell;
  v.enclosure = e1.value + e2.value;
  if (v.enclosure.strictly_positive())
    v.verdict = Verdict::NoTurn;
  else if (v.enclosure.strictly_negative())
    v.verdict = Verdict::Turn;
  else
    v.verdict = Verdict::Unknown;
  return v;
}

Di2Result di2_nonzero(const ParamCell& cell, const MuskatOptions& opts) {
  Di2Result r;
  r.enclosure = di2(cell, opts);
  r.sign_definite = r.enclosure.value.excludes_zero();
  return r;
}

// ------------------------------------------------------------- the scan

namespace {

MuskatOptions scan_cell_options(const MuskatOptions& base, const ParamCell& c) {
  MuskatOptions o = base;
  double scale = 1.2 * c.h2.width() + 0.25 * c.K.width();
  o.tol = std::fmax(base.tol, 0.25 * scale);
  o.tol_2d = std::fmax(base.tol_2d, 0.5 * scale);
  return o;
}

} // namespace

ScanResult bifurcation_scan(const ParamCell& box, int max_depth,
                            const MuskatOptions& opts) {
  ScanResult out;
  std::vector<ParamCell> level{box};
  std::map<std::pair<double, double>, Interval> i1_cache;
  long evaluated = 0;

  while (!level.empty()) {
    // distinct h2 strips of this level first (shared by K-siblings)
    std::vector<std::pair<double, double>> hs;
    for (const auto& c : level) hs.emplace_back(c.h2.lo, c.h2.hi);
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    std::vector<std::pair<double, double>> missing;
    for (auto& h : hs)
      if (!i1_cache.count(h)) missing.push_back(h);
    std::vector<Interval> i1_vals(missing.size());
    {
      // tolerance keyed to the finest cell of the level
      MuskatOptions o = opts;
      double wmin = level.front().h2.width();
      for (const auto& c : level) wmin = std::fmin(wmin, c.h2.width());
      o.tol = std::fmax(opts.tol, 0.3 * wmin);
      parallel_for(missing.size(), [&](std::size_t i) {
        i1_vals[i] =
            i1(Interval(missing[i].first, missing[i].second), o).value;
      });
    }
    for (std::size_t i = 0; i < missing.size(); ++i)
      i1_cache.emplace(missing[i], i1_vals[i]);

    std::vector<CellVerdict> verdicts(level.size());
    parallel_for(level.size(), [&](std::size_t i) {
      const ParamCell& cell = level[i];
      MuskatOptions o = scan_cell_options(opts, cell);
      Interval v1 = i1_cache.at({cell.h2.lo, cell.h2.hi});
      Interval v2 = i2(cell, o).value;
      CellVerdict v;
      v.cell = cell;
      v.enclosure = v1 + v2;
      v.verdict = v.enclosure.strictly_positive()   ? Verdict::NoTurn
                  : v.enclosure.strictly_negative() ? Verdict::Turn
                                                    : Verdict::Unknown;
      verdicts[i] = v;
    });
    evaluated += long(level.size());

    std::vector<ParamCell> next;
    for (const CellVerdict& v : verdicts) {
      if (v.verdict != Verdict::Unknown || v.cell.depth >= max_depth) {
        out.leaves.push_back(v);
        continue;
      }
      double hm = v.cell.h2.mid(), km = v.cell.K.mid();
      for (int q = 0; q < 4; ++q) {
        ParamCell child;
        child.h2 = (q & 1) ? Interval(hm, v.cell.h2.hi) : Interval(v.cell.h2.lo, hm);
        child.K = (q & 2) ? Interval(km, v.cell.K.hi) : Interval(v.cell.K.lo, km);
        child.depth = v.cell.depth + 1;
        next.push_back(child);
      }
    }
    level = std::move(next);
  }

  std::sort(out.leaves.begin(), out.leaves.end(),
            [](const CellVerdict& a, const CellVerdict& b) {
              if (a.cell.h2.lo != b.cell.h2.lo) return a.cell.h2.lo < b.cell.h2.lo;
              return a.cell.K.lo < b.cell.K.lo;
            });
  double box_area = box.h2.width() * box.K.width();
  for (const CellVerdict& v : out.leaves) {
    double area = v.cell.h2.width() * v.cell.K.width();
    switch (v.verdict) {
      case Verdict::Turn: out.area_turn += area; break;
      case Verdict::NoTurn: out.area_noturn += area; break;
      default: out.area_unknown += area; break;
    }
  }
  out.decided_fraction = (out.area_turn + out.area_noturn) / box_area;
  out.area_turn /= box_area;
  out.area_noturn /= box_area;
  out.area_unknown /= box_area;
  out.cells_evaluated = evaluated;
  return out;
}

std::string scan_to_csv(const ScanResult& scan) {
  std::ostringstream os;
  os << "h2_lo,h2_hi,K_lo,K_hi,verdict,encl_lo,encl_hi,depth\n";
  char buf[256];
  for (const CellVerdict& v : scan.leaves) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%d\n", v.cell.h2.lo,
                  v.cell.h2.hi, v.cell.K.lo, v.cell.K.hi, to_string(v.verdict),
                  v.enclosure.lo, v.enclosure.hi, v.cell.depth);
    os << buf;
  }
  return os.str();
}

void scan_to_ppm(const ScanResult& scan, const ParamCell& box, int width,
                 int height, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  f << "P6\n" << width << " " << height << "\n255\n";
  for (int j = 0; j < height; ++j) {
    double K = box.K.hi - (j + 0.5) / height * box.K.width();
    for (int i = 0; i < width; ++i) {
      double h2 = box.h2.lo + (i + 0.5) / width * box.h2.width();
      unsigned char rgb[3] = {255, 255, 255};
      for (const CellVerdict& v : scan.leaves) {
        if (h2 < v.cell.h2.lo || h2 > v.cell.h2.hi || K < v.cell.K.lo ||
            K > v.cell.K.hi)
          continue;
        if (v.verdict == Verdict::Turn) {
          rgb[0] = 220; rgb[1] = 30; rgb[2] = 30;
        } else if (v.verdict == Verdict::NoTurn) {
          rgb[0] = 250; rgb[1] = 220; rgb[2] = 40;
        }
        break;
      }
      f.write(reinterpret_cast<const char*>(rgb), 3);
    }
  }
}

} // namespace rigor::muskat
