#include "rigor/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace rigor {

namespace {

// signed power interval helper for moments: (x)^(k+1)/(k+1)
Interval moment(const Interval& x, int k) {
  return pow_int(x, k + 1) / Interval(double(k + 1));
}

// integral of R * (x-c)^n over [lo,hi] split by sign of the weight
Interval remainder_moment(const Interval& R, const Interval& A,
                          const Interval& B, int n) {
  if (n % 2 == 0) {
    Interval ipos = moment(B, n) - moment(A, n); // weight >= 0 throughout
    return R * ipos;
  }
  Interval ipos = moment(B, n);  // over [c,hi]
  Interval ineg = -moment(A, n); // over [lo,c], negative
  return R * ipos + R * ineg;
}

Enclosure taylor_core(const JetFn& f, double lo, double hi, int order,
                      Centering centering) {
  Interval dom(lo, hi);
  TaylorRemainder tr = jet_eval_remainder(f, dom, order - 1, centering);
  Interval A = Interval(lo) - tr.center;
  Interval B = Interval(hi) - tr.center;
  Interval main(0.0);
  for (std::size_t k = 0; k < tr.poly.size(); ++k)
    main += tr.poly[k] * (moment(B, int(k)) - moment(A, int(k)));
  Interval err = remainder_moment(tr.remainder, A, B, order);
  Enclosure e;
  e.main = main;
  e.error_term = err;
  e.value = main + err;
  e.cells = 1;
  e.scheme = "taylor";
  return e;
}

struct SchemeCtx {
  const JetFn& f;
  DerivScope scope;
  Interval global_d2;   // f'' over [a,b] (midpoint/trapezoid)
  Interval global_d4n;  // (f)_4 over [a,b] (simpson)
};

Interval point_value(const JetFn& f, double x) {
  return f(TaylorJet::variable(Interval(x), 0))[0];
}

Enclosure midpoint_panel(SchemeCtx& ctx, double lo, double hi) {
  Interval panel(lo, hi);
  double m = panel.mid();
  TaylorJet at_m = ctx.f(TaylorJet::variable(Interval(m), 1));
  Interval d2 = ctx.scope == DerivScope::global
                    ? ctx.global_d2
                    : ctx.f(TaylorJet::variable(panel, 2)).derivative(2);
  Interval A = Interval(lo) - Interval(m), B = Interval(hi) - Interval(m);
  Interval w = Interval(hi) - Interval(lo);
  Enclosure e;
  e.main = w * at_m[0];
  // f = f(m) + (x-m) f'(m) + (x-m)^2 f''(xi)/2; the first moment is ~0 but
  // m is a rounded midpoint, so keep it
  Interval m1 = moment(B, 1) - moment(A, 1);
  e.error_term = at_m[1] * m1 + remainder_moment(d2 / Interval(2.0), A, B, 2);
  e.value = e.main + e.error_term;
  e.scheme = "midpoint";
  return e;
}

Enclosure trapezoid_panel(SchemeCtx& ctx, double lo, double hi,
                          const Interval& flo, const Interval& fhi) {
  Interval panel(lo, hi);
  Interval d2 = ctx.scope == DerivScope::global
                    ? ctx.global_d2
                    : ctx.f(TaylorJet::variable(panel, 2)).derivative(2);
  Interval w = Interval(hi) - Interval(lo);
  Enclosure e;
  e.main = w * (flo + fhi) / Interval(2.0);
  // f - p = f''(xi)/2 (x-lo)(x-hi); the weight is single-signed with
  // integral -h^3/6
  e.error_term = (d2 / Interval(2.0)) * (-pow_int(w, 3) / Interval(6.0));
  e.value = e.main + e.error_term;
  e.scheme = "trapezoid";
  return e;
}

Enclosure simpson_panel(SchemeCtx& ctx, double lo, double hi,
                        const Interval& flo, const Interval& fhi) {
  Interval panel(lo, hi);
  double m = panel.mid();
  TaylorJet at_m = ctx.f(TaylorJet::variable(Interval(m), 3));
  Interval d4n = ctx.scope == DerivScope::global
                     ? ctx.global_d4n
                     : ctx.f(TaylorJet::variable(panel, 4))[4]; // (f)_4
  Interval x0(lo), x1(m), x2(hi);
  // integral over the panel of the Lagrange basis polynomial at node xi
  auto lag = [&](const Interval& xi, const Interval& xj, const Interval& xk) {
    Interval s = xj + xk, p = xj * xk;
    Interval t2 = (pow_int(x2, 3) - pow_int(x0, 3)) / Interval(3.0);
    Interval t1 = (sqr(x2) - sqr(x0)) / Interval(2.0);
    Interval t0 = x2 - x0;
    return (t2 - s * t1 + p * t0) / ((xi - xj) * (xi - xk));
  };
  Interval lag0 = lag(x0, x1, x2), lag1 = lag(x1, x0, x2), lag2 = lag(x2, x0, x1);
  Enclosure e;
  e.main = flo * lag0 + at_m[0] * lag1 + fhi * lag2;
  // Split f = T3 + R around the middle node: T3 is the cubic Taylor part,
  // R(x) is enclosed by (f)_4(panel) (x-x1)^4.  The quadratic interpolant
  // misses T3 by exactly (f)_3(x1) (x-x0)(x-x1)(x-x2) (tiny: x1 is nearly
  // central), and misses R by R itself minus its interpolated node values.
  Interval s1 = x0 + x1 + x2;
  Interval s2 = x0 * x1 + x0 * x2 + x1 * x2;
  Interval s3 = x0 * x1 * x2;
  auto w3prim = [&](const Interval& x) {
    return pow_int(x, 4) / Interval(4.0) - s1 * pow_int(x, 3) / Interval(3.0) +
           s2 * sqr(x) / Interval(2.0) - s3 * x;
  };
  Interval w3 = w3prim(x2) - w3prim(x0);
  Interval A = x0 - x1, B = x2 - x1;
  Interval m4 = (pow_int(B, 5) - pow_int(A, 5)) / Interval(5.0); // int (x-x1)^4
  Interval r0 = d4n * pow_int(A, 4), r2 = d4n * pow_int(B, 4);
  e.error_term = at_m[3] * w3 + d4n * m4 - (r0 * lag0 + r2 * lag2);
  e.value = e.main + e.error_term;
  e.scheme = "simpson";
  return e;
}

Enclosure scheme_core(const JetFn& f, double lo, double hi, Scheme scheme,
                      int panels, DerivScope scope) {
  SchemeCtx ctx{f, scope, Interval(0.0), Interval(0.0)};
  if (scope == DerivScope::global) {
    Interval dom(lo, hi);
    if (scheme == Scheme::simpson)
      ctx.global_d4n = f(TaylorJet::variable(dom, 4))[4];
    else
      ctx.global_d2 = f(TaylorJet::variable(dom, 2)).derivative(2);
  }
  std::vector<double> xs(std::size_t(panels) + 1);
  for (int i = 0; i <= panels; ++i) {
    double c = (i == 0) ? lo
               : (i == panels)
                   ? hi
                   : lo + (hi - lo) * (double(i) / double(panels));
    xs[std::size_t(i)] = std::fmin(hi, std::fmax(i ? xs[std::size_t(i - 1)] : lo, c));
  }
  std::vector<Interval> fx;
  if (scheme != Scheme::midpoint) {
    fx.reserve(xs.size());
    for (double x : xs) fx.push_back(point_value(f, x));
  }
  Enclosure total;
  total.main = Interval(0.0);
  total.error_term = Interval(0.0);
  for (int i = 0; i < panels; ++i) {
    auto a = std::size_t(i);
    Enclosure p;
    switch (scheme) {
      case Scheme::midpoint: p = midpoint_panel(ctx, xs[a], xs[a + 1]); break;
      case Scheme::trapezoid:
        p = trapezoid_panel(ctx, xs[a], xs[a + 1], fx[a], fx[a + 1]);
        break;
      case Scheme::simpson:
        p = simpson_panel(ctx, xs[a], xs[a + 1], fx[a], fx[a + 1]);
        break;
    }
    total.main += p.main;
    total.error_term += p.error_term;
    total.scheme = p.scheme;
  }
  total.value = total.main + total.error_term;
  total.cells = panels;
  return total;
}

// Wraps a core integrator over [a.hi, b.lo] with mean-value strips for the
// uncertain endpoints: integral over [a, a.hi] lies in (a.hi - a) * range(f).
template <typename Core>
Enclosure with_endpoint_strips(const JetFn& f, const Interval& a,
                               const Interval& b, Core core) {
  if (a.lo > b.hi) throw NonOrderedBounds("integration bounds out of order");
  if (a.hi > b.lo) {
    Interval r = eval_range(f, Interval(a.lo, b.hi));
    Enclosure e;
    e.main = Interval(0.0);
    e.error_term = (b - a) * r;
    e.value = e.error_term;
    e.scheme = "strip";
    return e;
  }
  Enclosure e = core(a.hi, b.lo);
  if (!a.is_thin()) {
    Interval r = eval_range(f, Interval(a.lo, a.hi));
    Interval strip = (Interval(a.hi) - a) * r;
    e.error_term += strip;
    e.value += strip;
  }
  if (!b.is_thin()) {
    Interval r = eval_range(f, Interval(b.lo, b.hi));
    Interval strip = (b - Interval(b.lo)) * r;
    e.error_term += strip;
    e.value += strip;
  }
  return e;
}

} // namespace

Enclosure integrate_scheme(const JetFn& f, const Interval& a, const Interval& b,
                           Scheme scheme, int panels, DerivScope scope) {
  if (panels < 1) throw IntervalError("integrate_scheme needs panels >= 1");
  return with_endpoint_strips(f, a, b, [&](double lo, double hi) {
    return scheme_core(f, lo, hi, scheme, panels, scope);
  });
}

Enclosure integrate_taylor(const JetFn& f, const Interval& a, const Interval& b,
                           int order, Centering centering) {
  if (order < 1) throw IntervalError("integrate_taylor needs order >= 1");
  return with_endpoint_strips(f, a, b, [&](double lo, double hi) {
    return taylor_core(f, lo, hi, order, centering);
  });
}

namespace {

struct Panel {
  double lo, hi;
  Enclosure enc;
};

Enclosure assemble(std::vector<Panel>& panels, bool converged,
                   const char* scheme) {
  std::sort(panels.begin(), panels.end(),
            [](const Panel& p, const Panel& q) { return p.lo < q.lo; });
  Enclosure total;
  total.main = Interval(0.0);
  total.error_term = Interval(0.0);
  for (const Panel& p : panels) {
    total.main += p.enc.main;
    total.error_term += p.enc.error_term;
  }
  total.value = total.main + total.error_term;
  total.cells = long(panels.size());
  total.converged = converged;
  total.scheme = scheme;
  return total;
}

} // namespace

Enclosure integrate_adaptive(const JetFn& f, const Interval& a, const Interval& b,
                             const AdaptiveOptions& opts) {
  return with_endpoint_strips(f, a, b, [&](double lo, double hi) {
    std::vector<double> cuts{lo};
    std::vector<double> bps = opts.breakpoints;
    std::sort(bps.begin(), bps.end());
    for (double bp : bps)
      if (bp > lo && bp < hi && bp > cuts.back()) cuts.push_back(bp);
    cuts.push_back(hi);

    // a panel that cannot be evaluated (divisor straddling zero on a wide
    // range, domain errors) asks to be split by reporting infinite width
    auto eval = [&](double l, double h) {
      try {
        return Panel{l, h, taylor_core(f, l, h, opts.taylor_order, opts.centering)};
      } catch (const IntervalError&) {
        Enclosure bad;
        bad.main = Interval(0.0);
        bad.error_term = Interval::entire();
        bad.value = Interval::entire();
        bad.scheme = "failed";
        return Panel{l, h, bad};
      }
    };
    std::vector<Panel> panels;
    long evals = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      panels.push_back(eval(cuts[i], cuts[i + 1]));
      ++evals;
    }
    bool converged = true;
    for (;;) {
      double total = 0;
      std::size_t worst = 0;
      double worst_w = -1;
      for (std::size_t i = 0; i < panels.size(); ++i) {
        double w = panels[i].enc.value.width();
        total += w;
        // deterministic: strictly wider wins; ties keep the leftmost
        if (w > worst_w || (w == worst_w && panels[i].lo < panels[worst].lo)) {
          worst_w = w;
          worst = i;
        }
      }
      if (total <= opts.tol) break;
      if (evals + 2 > opts.budget) {
        converged = false;
        break;
      }
      Panel old = panels[worst];
      double mid = Interval(old.lo, old.hi).mid();
      if (mid <= old.lo || mid >= old.hi) { // cannot split further
        converged = false;
        break;
      }
      panels[worst] = eval(old.lo, mid);
      panels.push_back(eval(mid, old.hi));
      evals += 2;
    }
    return assemble(panels, converged, "adaptive-taylor");
  });
}

Enclosure integrate_halfline(const JetFn& f, const Interval& a,
                             const DecayBound& decay,
                             const AdaptiveOptions& opts) {
  if (decay.k < 2) throw IntervalError("halfline decay needs k >= 2");
  double M = std::fmax(decay.M, a.hi);
  auto tail_at = [&](double m) {
    return decay.C / Interval(double(decay.k - 1)) / pow_int(Interval(m), decay.k - 1);
  };
  Interval tail = tail_at(M);
  bool tail_ok = true;
  if (decay.C.mag() > 0.0) {
    int tries = 0;
    while (tail.mag() > opts.tol / 2 && tries < 60) {
      M *= 2;
      tail = tail_at(M);
      ++tries;
    }
    tail_ok = tail.mag() <= opts.tol / 2;
  }
  AdaptiveOptions inner = opts;
  inner.tol = opts.tol / 2;
  Enclosure e = integrate_adaptive(f, a, Interval(M), inner);
  Interval tail_iv = Interval::unchecked(-tail.mag(), tail.mag());
  e.error_term += tail_iv;
  e.value += tail_iv;
  e.converged = e.converged && tail_ok;
  e.scheme = "halfline";
  return e;
}

namespace {

struct Box {
  Interval X, Y;
  Interval value;
  double err_x = 0, err_y = 0; // per-axis remainder magnitudes, for the split
};

Box eval_box_inner(const Jet2Fn& f, const Interval& X, const Interval& Y) {
  Interval cx = X.midpoint(), cy = Y.midpoint();
  Interval f00 = f(TaylorJet::variable(cx, 0), TaylorJet::constant(cy, cx, 0))[0];
  TaylorJet jx = f(TaylorJet::variable(X, 2), TaylorJet::constant(Y, X, 2));
  TaylorJet jy = f(TaylorJet::constant(cx, Y, 2), TaylorJet::variable(Y, 2));
  Interval dxx = jx.derivative(2);
  Interval dyy = jy.derivative(2);
  Interval wx = Interval(X.hi) - Interval(X.lo);
  Interval wy = Interval(Y.hi) - Interval(Y.lo);
  // midpoint rule with the first moments kept (midpoints are rounded)
  Interval ax = Interval(X.lo) - cx, bx = Interval(X.hi) - cx;
  Interval ay = Interval(Y.lo) - cy, by = Interval(Y.hi) - cy;
  Interval m1x = (sqr(bx) - sqr(ax)) / Interval(2.0);
  Interval m1y = (sqr(by) - sqr(ay)) / Interval(2.0);
  Interval rx = remainder_moment(dxx / Interval(2.0), ax, bx, 2) * wy +
                jx[1] * m1x * wy;
  Interval ry = remainder_moment(dyy / Interval(2.0), ay, by, 2) * wx +
                jy[1] * m1y * wx;
  Box b;
  b.X = X;
  b.Y = Y;
  b.value = wx * wy * f00 + rx + ry;
  b.err_x = rx.width();
  b.err_y = ry.width();
  return b;
}

Box eval_box(const Jet2Fn& f, const Interval& X, const Interval& Y) {
  try {
    return eval_box_inner(f, X, Y);
  } catch (const IntervalError&) {
    Box b;
    b.X = X;
    b.Y = Y;
    b.value = Interval::entire();
    b.err_x = X.width();
    b.err_y = Y.width();
    return b;
  }
}

} // namespace

Enclosure integrate_2d(const Jet2Fn& f, const Interval& box_x,
                       const Interval& box_y, const Adaptive2DOptions& opts) {
  auto cuts = [](const Interval& dom, const std::vector<double>& bps) {
    std::vector<double> c{dom.lo};
    std::vector<double> s = bps;
    std::sort(s.begin(), s.end());
    for (double v : s)
      if (v > dom.lo && v < dom.hi && v > c.back()) c.push_back(v);
    c.push_back(dom.hi);
    return c;
  };
  std::vector<double> cx = cuts(box_x, opts.breakpoints_x);
  std::vector<double> cy = cuts(box_y, opts.breakpoints_y);
  std::vector<Box> boxes;
  long evals = 0;
  for (std::size_t i = 0; i + 1 < cx.size(); ++i)
    for (std::size_t j = 0; j + 1 < cy.size(); ++j) {
      boxes.push_back(eval_box(f, Interval(cx[i], cx[i + 1]),
                               Interval(cy[j], cy[j + 1])));
      ++evals;
    }
  bool converged = true;
  for (;;) {
    double total = 0;
    std::size_t worst = 0;
    double worst_w = -1;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      double w = boxes[i].value.width();
      total += w;
      if (w > worst_w ||
          (w == worst_w && (boxes[i].X.lo < boxes[worst].X.lo ||
                            (boxes[i].X.lo == boxes[worst].X.lo &&
                             boxes[i].Y.lo < boxes[worst].Y.lo)))) {
        worst_w = w;
        worst = i;
      }
    }
    if (total <= opts.tol) break;
    if (evals + 2 > opts.budget) {
      converged = false;
      break;
    }
    Box old = boxes[worst];
    bool split_x = old.err_x >= old.err_y;
    double mid = split_x ? old.X.mid() : old.Y.mid();
    if (split_x && (mid <= old.X.lo || mid >= old.X.hi)) split_x = false;
    if (!split_x) {
      mid = old.Y.mid();
      if (mid <= old.Y.lo || mid >= old.Y.hi) {
        converged = false;
        break;
      }
    }
    if (split_x) {
      boxes[worst] = eval_box(f, Interval(old.X.lo, mid), old.Y);
      boxes.push_back(eval_box(f, Interval(mid, old.X.hi), old.Y));
    } else {
      boxes[worst] = eval_box(f, old.X, Interval(old.Y.lo, mid));
      boxes.push_back(eval_box(f, old.X, Interval(mid, old.Y.hi)));
    }
    evals += 2;
  }
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
    return a.X.lo < b.X.lo || (a.X.lo == b.X.lo && a.Y.lo < b.Y.lo);
  });
  Enclosure total;
  total.main = Interval(0.0);
  for (const Box& b : boxes) total.main += b.value;
  total.error_term = Interval(0.0);
  total.value = total.main;
  total.cells = long(boxes.size());
  total.converged = converged;
  total.scheme = "midpoint-2d";
  return total;
}

JetFn change_of_variables_halfcircle(JetFn f) {
  return [f = std::move(f)](const TaylorJet& y) {
    SinCosJets sc = sin_cos(y * Interval(0.5));
    TaylorJet arg = Interval(2.0) * (sc.sin / sc.cos);
    return f(arg) / sqr(sc.cos);
  };
}

} // namespace rigor
