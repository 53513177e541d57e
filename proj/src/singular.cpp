#include "rigor/singular.hpp"

#include <cmath>

namespace rigor {

namespace {

Interval sym(double m) { return Interval::unchecked(-m, m); }

} // namespace

Interval tangent_expansion_constant(double eps) {
  // c1(y) = (2 tan(y/2) - y)/y^3 is even with positive series coefficients,
  // so it increases from 1/12 at 0 to its value at eps.
  Interval lo = Interval(1.0) / Interval(12.0);
  Interval e(eps);
  Interval at_eps = (Interval(2.0) * tan(e / Interval(2.0)) - e) / pow_int(e, 3);
  return Interval(lo.lo, std::fmax(at_eps.hi, lo.hi));
}

Interval cotangent_expansion_constant(double eps) {
  // c2(u) = (-(1/2)tan(u/2) + u/4)/u^3 decreases from -1/48 at 0.
  Interval hi = Interval(-1.0) / Interval(48.0);
  Interval e(eps);
  Interval at_eps =
      (e / Interval(4.0) - tan(e / Interval(2.0)) / Interval(2.0)) / pow_int(e, 3);
  return Interval(std::fmin(at_eps.lo, hi.lo), hi.hi);
}

Enclosure pv_near(const JetFn& f, const Interval& x, const SplitSpec& spec) {
  const int k = spec.order;
  if (k < 2) throw IntervalError("pv_near needs order >= 2");
  const double eps = spec.cut1();
  Interval c1 = tangent_expansion_constant(eps);
  Interval eiv(eps);
  // 1/(1 + c1 y^2) over |y| <= eps
  Interval den_range = hull(Interval(1.0),
                            Interval(1.0) / (Interval(1.0) + c1 * sqr(eiv)));
  // f(x) - f(x-y) = sum_{j>=1} (-1)^(j-1) (f)_j(x) y^j, Lagrange tail at j=k
  TaylorJet at_x = f(TaylorJet::variable(x, k - 1));
  Interval window(x.lo - eps, x.hi + eps);
  TaylorJet over = f(TaylorJet::variable(window, k));

  Interval inv_pi = Interval(1.0) / pi_iv();
  Enclosure e;
  e.main = Interval(0.0);
  // only odd j survive: even j carry an odd weight y^(j-1), whose integral
  // over the symmetric window is exactly zero for every admissible c1
  for (int j = 1; j <= k - 1; j += 2) {
    // int_{|y|<eps} y^(j-1)/(1+c1 y^2) dy = 2 eps^j / j * [den_range]
    Interval m = Interval(2.0) * pow_int(eiv, j) / Interval(double(j));
    e.main += inv_pi * at_x[j] * (m * den_range);
  }
  Interval rem = over[k];
  Interval m = Interval(2.0) * pow_int(eiv, k) / Interval(double(k));
  if (k % 2 == 1) {
    // even weight, sign (+1)^(k-1): straight product bound
    e.error_term = inv_pi * rem * (m * den_range);
  } else {
    // odd weight and a y-dependent coefficient: magnitude bound
    e.error_term = sym((inv_pi * Interval(rem.mag()) * m).hi);
  }
  e.value = e.main + e.error_term;
  e.cells = 1;
  e.scheme = "pv-near";
  return e;
}

namespace {

JetFn difference_integrand(const JetFn& f, const Interval& x) {
  Interval fx = eval_range(f, x);
  return [f, x, fx](const TaylorJet& y) {
    TaylorJet arg = TaylorJet::constant(x, y.base(), y.order()) - y;
    return TaylorJet::constant(fx, y.base(), y.order()) - f(arg);
  };
}

} // namespace

Enclosure pv_far(const JetFn& f, const Interval& x, const SplitSpec& spec,
                 const AdaptiveOptions& opts) {
  const double eps = spec.cut2();
  // the window edge H below is a rounded-down double; widen the expansion
  // radius accordingly
  const double eps_eff =
      rigor::detail::sub_up(pi_iv().hi, rigor::detail::sub_down(pi_iv().lo, eps));
  Interval c2 = cotangent_expansion_constant(eps_eff);
  JetFn diff = difference_integrand(f, x);
  JetFn g = [diff, c2](const TaylorJet& y) {
    TaylorJet u = y - TaylorJet::constant(pi_iv(), y.base(), y.order());
    TaylorJet kernel = u * Interval(-0.25) + pow_int(u, 3) * c2;
    return diff(y) * kernel;
  };
  double H = rigor::detail::sub_down(pi_iv().lo, eps);
  Interval U = two_pi_iv() - Interval(H); // wraps to -H on the torus
  Enclosure e = integrate_adaptive(g, Interval(H), U, opts);
  Interval inv_pi = Interval(1.0) / pi_iv();
  e.main = inv_pi * e.main;
  e.error_term = inv_pi * e.error_term;
  e.value = inv_pi * e.value;
  e.scheme = "pv-far";
  return e;
}

Enclosure hilbert_central(const JetFn& f, const Interval& x,
                          const SplitSpec& spec, const AdaptiveOptions& opts) {
  JetFn diff = difference_integrand(f, x);
  JetFn g = [diff](const TaylorJet& y) {
    SinCosJets sc = sin_cos(y * Interval(0.5));
    return diff(y) / (Interval(2.0) * (sc.sin / sc.cos));
  };
  double c1 = spec.cut1();
  double hi = rigor::detail::sub_down(pi_iv().lo, spec.cut2());
  AdaptiveOptions half = opts;
  half.tol = opts.tol / 2;
  Enclosure right = integrate_adaptive(g, Interval(c1), Interval(hi), half);
  Enclosure left = integrate_adaptive(g, Interval(-hi), Interval(-c1), half);
  Interval inv_pi = Interval(1.0) / pi_iv();
  Enclosure e;
  e.main = inv_pi * (right.main + left.main);
  e.error_term = inv_pi * (right.error_term + left.error_term);
  e.value = inv_pi * (right.value + left.value);
  e.cells = right.cells + left.cells;
  e.converged = right.converged && left.converged;
  e.scheme = "pv-central";
  return e;
}

Enclosure hilbert_transform(const JetFn& f, const Interval& x,
                            const SplitSpec& spec, const AdaptiveOptions& opts) {
  Enclosure n = pv_near(f, x, spec);
  Enclosure c = hilbert_central(f, x, spec, opts);
  Enclosure fa = pv_far(f, x, spec, opts);
  Enclosure e;
  e.main = n.main + c.main + fa.main;
  e.error_term = n.error_term + c.error_term + fa.error_term;
  e.value = n.value + c.value + fa.value;
  e.cells = n.cells + c.cells + fa.cells;
  e.converged = n.converged && c.converged && fa.converged;
  e.scheme = "hilbert-split";
  return e;
}

CancelledRatio::CancelledRatio(const TaylorJet& num, const TaylorJet& den,
                               int drop) {
  if (drop < 1 || drop > num.order() || num.order() != den.order())
    throw CancellationOrderMismatch("cancel_expand: bad drop order");
  if (!num.base().contains(0.0))
    throw CancellationOrderMismatch("cancel_expand: base must contain 0");
  for (int j = 0; j < drop; ++j) {
    if (!num[j].contains(0.0) || !den[j].contains(0.0))
      throw CancellationOrderMismatch(
          "cancel_expand: leading coefficients do not vanish to the stated order");
  }
  if (den[drop].lo <= 0.0 && 0.0 <= den[drop].hi)
    throw CancellationOrderMismatch(
        "cancel_expand: denominator coefficient at the drop order straddles zero");
  int m = num.order();
  for (int j = drop; j < m; ++j) {
    num_.push_back(num[j]);
    den_.push_back(den[j]);
  }
  num_rem_ = num[m];
  den_rem_ = den[m];
  tail_pow_ = m - drop;
  domain_ = num.base();
}

TaylorJet CancelledRatio::operator()(const TaylorJet& y) const {
  auto horner = [&](const std::vector<Interval>& cs, const Interval& rem) {
    TaylorJet acc = TaylorJet::constant(rem, y.base(), y.order());
    for (auto it = cs.rbegin(); it != cs.rend(); ++it)
      acc = acc * y + TaylorJet::constant(*it, y.base(), y.order());
    return acc;
  };
  return horner(num_, num_rem_) / horner(den_, den_rem_);
}

Interval CancelledRatio::range(const Interval& y) const {
  auto horner = [&](const std::vector<Interval>& cs, const Interval& rem) {
    Interval acc = rem;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * y + *it;
    return acc;
  };
  return horner(num_, num_rem_) / horner(den_, den_rem_);
}

Enclosure integrate_range(const std::function<Interval(const Interval&)>& r,
                          double a, double b, int panels) {
  Enclosure e;
  e.main = Interval(0.0);
  std::vector<Interval> parts = subdivide(Interval(a, b), panels);
  for (const Interval& p : parts) {
    Interval w = Interval(p.hi) - Interval(p.lo);
    e.main += w * r(p);
  }
  e.error_term = Interval(0.0);
  e.value = e.main;
  e.cells = panels;
  e.scheme = "range-sweep";
  return e;
}

} // namespace rigor
