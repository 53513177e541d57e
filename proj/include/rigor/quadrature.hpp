// quadrature.hpp - rigorous enclosures of integrals of smooth integrands:
// classical schemes with interval error terms, Taylor-with-remainder
// integration, an adaptive bisection controller, half-line tails and a
// tensor rule for boxes.

#ifndef RIGOR_QUADRATURE_HPP
#define RIGOR_QUADRATURE_HPP

#include <string>
#include <vector>

#include "rigor/interval.hpp"
#include "rigor/jet.hpp"

namespace rigor {

struct Enclosure {
  Interval value;      // contains the true integral; value superset of main+error
  Interval main;       // quadrature sum (thin up to rounding)
  Interval error_term; // scheme error / Lagrange remainder / tails
  long cells = 1;      // panels or boxes used
  std::string scheme;
  bool converged = true; // false when a budget ran out first

  bool contains(double v) const noexcept { return value.contains(v); }
};

enum class Scheme { midpoint, trapezoid, simpson };

// Which range the scheme's derivative factor is enclosed over.  The classical
// table states the global form; per-panel is tighter and is what the adaptive
// controller uses.
enum class DerivScope { global, per_panel };

Enclosure integrate_scheme(const JetFn& f, const Interval& a, const Interval& b,
                           Scheme scheme, int panels,
                           DerivScope scope = DerivScope::global);

Enclosure integrate_taylor(const JetFn& f, const Interval& a, const Interval& b,
                           int order, Centering centering = Centering::left);

struct AdaptiveOptions {
  double tol = 1e-8;
  long budget = 200000;           // panel evaluations
  int taylor_order = 8;           // per-panel rule
  Centering centering = Centering::midpoint;
  std::vector<double> breakpoints; // panel edges the bisection never crosses
};

Enclosure integrate_adaptive(const JetFn& f, const Interval& a, const Interval& b,
                             const AdaptiveOptions& opts = {});

// Hypothesis |f(x)| <= C/|x|^k for |x| >= M, k >= 2.  Establishing it is the
// caller's burden; the tail over [M,inf) is then C/(k-1) * M^(1-k).
struct DecayBound {
  Interval C;
  int k = 2;
  double M = 1.0;
};

Enclosure integrate_halfline(const JetFn& f, const Interval& a,
                             const DecayBound& decay,
                             const AdaptiveOptions& opts = {});

struct Adaptive2DOptions {
  double tol = 1e-6;
  long budget = 200000; // box evaluations
  std::vector<double> breakpoints_x, breakpoints_y;
};

Enclosure integrate_2d(const Jet2Fn& f, const Interval& box_x,
                       const Interval& box_y, const Adaptive2DOptions& opts = {});

// x = 2 tan(y/2): pulls an integral over the real line back to (-pi, pi).
// The returned integrand is f(2 tan(y/2)) * sec(y/2)^2; it inherits f's
// behaviour at the ends (poles propagate as domain errors).
JetFn change_of_variables_halfcircle(JetFn f);

} // namespace rigor

#endif // RIGOR_QUADRATURE_HPP
