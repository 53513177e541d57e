// singular.hpp - rigorous principal-value machinery: the three-way split of
// the periodic Hilbert transform (near / central / far) and a generic
// matched-order 0/0 cancellation for integrands whose numerator and
// denominator both vanish at the left end of the domain.

#ifndef RIGOR_SINGULAR_HPP
#define RIGOR_SINGULAR_HPP

#include "rigor/interval.hpp"
#include "rigor/jet.hpp"
#include "rigor/quadrature.hpp"

namespace rigor {

class CancellationOrderMismatch : public IntervalError {
public:
  using IntervalError::IntervalError;
};

// Split radii and expansion order for
//   Hf(x) = (1/pi) PV int_T (f(x)-f(x-y)) / (2 tan(y/2)) dy.
struct SplitSpec {
  Interval eps1{1e-3}; // |y| < eps1: Taylor-cancelled near part
  Interval eps2{1e-3}; // |y-pi| < eps2: cotangent-expanded far part
  int order = 8;

  double cut1() const noexcept { return eps1.hi; }
  double cut2() const noexcept { return eps2.hi; }
};

// Interval constants of the two kernel expansions on the given windows:
//   2 tan(y/2)   = y (1 + c1(eps1) y^2)          for |y| <= eps1
//   (1/2)cot(y/2) = -(y-pi)/4 + c2(eps2) (y-pi)^3 for |y-pi| <= eps2
Interval tangent_expansion_constant(double eps);
Interval cotangent_expansion_constant(double eps);

Enclosure pv_near(const JetFn& f, const Interval& x, const SplitSpec& spec);
Enclosure pv_far(const JetFn& f, const Interval& x, const SplitSpec& spec,
                 const AdaptiveOptions& opts = {});
Enclosure hilbert_central(const JetFn& f, const Interval& x,
                          const SplitSpec& spec,
                          const AdaptiveOptions& opts = {});
Enclosure hilbert_transform(const JetFn& f, const Interval& x,
                            const SplitSpec& spec = {},
                            const AdaptiveOptions& opts = {});

// Ratio of two functions that both vanish to order `drop` at 0, rebuilt from
// jets expanded over a base interval containing 0.  The shifted coefficient
// polynomials are evaluated with their Lagrange tails treated as constant
// coefficients of y^(M-drop); range() (order-0) evaluation on subsets of the
// base is the fully rigorous mode, and is what the integrators use.  Jet
// evaluation is exact whenever the tail coefficients are zero (polynomials).
class CancelledRatio {
public:
  CancelledRatio(const TaylorJet& num, const TaylorJet& den, int drop);

  TaylorJet operator()(const TaylorJet& y) const;
  Interval range(const Interval& y) const;
  const Interval& domain() const noexcept { return domain_; }
  int tail_power() const noexcept { return tail_pow_; }

private:
  std::vector<Interval> num_, den_;
  Interval num_rem_, den_rem_;
  int tail_pow_;
  Interval domain_;
};

inline CancelledRatio cancel_expand(const TaylorJet& num, const TaylorJet& den,
                                    int drop) {
  return CancelledRatio(num, den, drop);
}

// integral of r over [a,b] by an n-panel range sweep (zeroth order but
// always sound; used for the short cancelled windows)
Enclosure integrate_range(const std::function<Interval(const Interval&)>& r,
                          double a, double b, int panels);

} // namespace rigor

#endif // RIGOR_SINGULAR_HPP
