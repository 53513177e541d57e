#include "doctest.h"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "rigor/quadrature.hpp"

using rigor::Centering;
using rigor::Enclosure;
using rigor::Interval;
using rigor::JetFn;
using rigor::Scheme;
using rigor::TaylorJet;
namespace mp = boost::multiprecision;
using big = mp::cpp_bin_float_50;

namespace {

const JetFn kExp = [](const TaylorJet& x) { return exp(x); };
const JetFn kSin = [](const TaylorJet& x) { return sin(x); };

bool encloses(const Interval& iv, const big& v) {
  return big(iv.lo) <= v && v <= big(iv.hi);
}

const big kEm1 = mp::exp(big(1)) - 1;

} // namespace

TEST_CASE("trapezoid N=4 on exp matches the classical enclosure") {
  Enclosure e = rigor::integrate_scheme(kExp, Interval(0.0), Interval(1.0),
                                        Scheme::trapezoid, 4);
  CHECK(encloses(e.value, kEm1));
  CHECK(std::fabs(e.value.lo - 1.712642) < 2e-3);
  CHECK(std::fabs(e.value.hi - 1.7222017) < 2e-3);
  CHECK(e.error_term.hi < 0.0); // -(b-a)/12 h^2 f'' with f'' > 0
}

TEST_CASE("constant integrand has exactly zero error term") {
  JetFn c7 = [](const TaylorJet& x) {
    return TaylorJet::constant(Interval(7.0), x.base(), x.order());
  };
  for (Scheme s : {Scheme::midpoint, Scheme::trapezoid, Scheme::simpson}) {
    Enclosure e = rigor::integrate_scheme(c7, Interval(0.0), Interval(1.0), s, 3);
    CHECK(e.error_term == Interval(0.0));
    CHECK(e.value.contains(7.0));
    CHECK(e.value.width() < 1e-12);
  }
}

TEST_CASE("simpson N=8 on sin over [0,pi]") {
  Enclosure e = rigor::integrate_scheme(kSin, Interval(0.0), rigor::pi_iv(),
                                        Scheme::simpson, 8);
  CHECK(e.contains(2.0));
  CHECK(e.value.width() <= 1e-3);
}

TEST_CASE("taylor order 3 left-centered reproduces the worked example") {
  Enclosure e = rigor::integrate_taylor(kExp, Interval(0.0), Interval(1.0), 3,
                                        Centering::left);
  CHECK(encloses(e.value, kEm1));
  CHECK(std::fabs(e.value.lo - 1.70833) < 1e-4);
  CHECK(std::fabs(e.value.hi - 1.77994) < 1e-4);
}

TEST_CASE("taylor: polynomial below the order integrates exactly") {
  JetFn cubic = [](const TaylorJet& x) {
    return x * x * x - Interval(2.0) * x + Interval(1.0);
  };
  Enclosure e = rigor::integrate_taylor(cubic, Interval(0.0), Interval(2.0), 4,
                                        Centering::midpoint);
  CHECK(e.error_term == Interval(0.0));
  CHECK(e.contains(2.0)); // x^4/4 - x^2 + x at 2
  CHECK(e.value.width() < 1e-13);
}

TEST_CASE("taylor midpoint-centered handles 1/(1+x)") {
  JetFn f = [](const TaylorJet& x) { return Interval(1.0) / (Interval(1.0) + x); };
  Enclosure e = rigor::integrate_taylor(f, Interval(0.0), Interval(1.0), 8,
                                        Centering::midpoint);
  CHECK(encloses(e.value, mp::log(big(2))));
  // sharp single-panel width: (f)_8 over [0,1] ranges [2^-9,1], times the
  // eighth moment 2 (1/2)^9/9
  CHECK(e.value.width() <= 5e-4);
}

TEST_CASE("adaptive reaches the requested width") {
  rigor::AdaptiveOptions o;
  o.tol = 1e-8;
  Enclosure e = rigor::integrate_adaptive(kExp, Interval(0.0), Interval(1.0), o);
  CHECK(e.converged);
  CHECK(e.value.width() <= 1e-8);
  CHECK(encloses(e.value, kEm1));
}

TEST_CASE("declared breakpoint lets a kink converge") {
  // piecewise-linear ramp |x - 1/2|
  JetFn f = [](const TaylorJet& x) {
    double lo = x.base().lo;
    if (lo >= 0.5) return x - Interval(0.5);
    return Interval(0.5) - x;
  };
  rigor::AdaptiveOptions o;
  o.tol = 1e-10;
  o.breakpoints = {0.5};
  Enclosure e = rigor::integrate_adaptive(f, Interval(0.0), Interval(1.0), o);
  CHECK(e.converged);
  CHECK(e.contains(0.25));
  CHECK(e.value.width() <= 1e-10);
}

TEST_CASE("budget exhaustion still returns a valid enclosure") {
  rigor::AdaptiveOptions o;
  o.tol = 1e-30;
  o.budget = 8;
  Enclosure e = rigor::integrate_adaptive(kExp, Interval(0.0), Interval(1.0), o);
  CHECK(!e.converged);
  CHECK(encloses(e.value, kEm1));
}

TEST_CASE("half-line integrals with certified tails") {
  JetFn inv_sq = [](const TaylorJet& x) { return Interval(1.0) / sqr(x); };
  rigor::AdaptiveOptions o;
  o.tol = 1e-6;
  Enclosure e = rigor::integrate_halfline(inv_sq, Interval(1.0),
                                          {Interval(1.0), 2, 1.0}, o);
  CHECK(e.contains(1.0));
  CHECK(e.value.width() <= 1e-5);

  // exp(-x) <= 6/x^3 on [1,inf): x^3 e^-x peaks at 27/e^3 < 1.35
  JetFn edecay = [](const TaylorJet& x) { return exp(-x); };
  Enclosure e2 = rigor::integrate_halfline(edecay, Interval(0.0),
                                           {Interval(6.0), 3, 1.0}, o);
  CHECK(e2.contains(1.0));

  // zero decay constant: tail is exactly [0,0]
  JetFn zero = [](const TaylorJet& x) {
    return TaylorJet::constant(Interval(0.0), x.base(), x.order());
  };
  Enclosure e3 = rigor::integrate_halfline(zero, Interval(0.0),
                                           {Interval(0.0), 2, 4.0}, o);
  CHECK(e3.value.contains(0.0));
  CHECK(e3.value.width() < 1e-12);
}

TEST_CASE("2d boxes") {
  rigor::Jet2Fn one = [](const TaylorJet& x, const TaylorJet& y) {
    return TaylorJet::constant(Interval(1.0), x.base(), x.order()) +
           (y - y); // touch y to exercise the bivariate path
  };
  Enclosure e = rigor::integrate_2d(one, Interval(0, 1), Interval(0, 1), {});
  CHECK(e.contains(1.0));
  CHECK(e.value.width() < 1e-12);

  rigor::Jet2Fn xy = [](const TaylorJet& x, const TaylorJet& y) { return x * y; };
  rigor::Adaptive2DOptions o;
  o.tol = 1e-6;
  Enclosure e2 = rigor::integrate_2d(xy, Interval(0, 1), Interval(0, 1), o);
  CHECK(e2.contains(0.25));
  CHECK(e2.value.width() <= 1e-6);

  rigor::Jet2Fn ss = [](const TaylorJet& x, const TaylorJet& y) {
    return sin(x) * sin(y);
  };
  rigor::Adaptive2DOptions o3;
  o3.tol = 2e-3;
  o3.budget = 40000;
  Enclosure e3 = rigor::integrate_2d(ss, Interval(0.0, rigor::pi_iv().hi),
                                     Interval(0.0, rigor::pi_iv().hi), o3);
  CHECK(e3.contains(4.0));
  CHECK(e3.converged);
}

TEST_CASE("change of variables onto the half circle") {
  JetFn runge = [](const TaylorJet& x) {
    return Interval(1.0) / (Interval(1.0) + sqr(x));
  };
  JetFn g = rigor::change_of_variables_halfcircle(runge);
  double yc = rigor::pi_iv().lo - 0.2;
  rigor::AdaptiveOptions o;
  o.tol = 1e-6;
  Enclosure e = rigor::integrate_adaptive(g, Interval(-yc), Interval(yc), o);
  // oracle: integral of 1/(1+x^2) between +-2 tan(yc/2)
  big X = 2 * mp::tan(big(yc) / 2);
  CHECK(encloses(e.value, 2 * mp::atan(X)));

  JetFn zero = [](const TaylorJet& x) {
    return TaylorJet::constant(Interval(0.0), x.base(), x.order());
  };
  Enclosure ez = rigor::integrate_adaptive(
      rigor::change_of_variables_halfcircle(zero), Interval(-1.0), Interval(1.0), o);
  CHECK(ez.value.contains(0.0));
  CHECK(ez.value.width() < 1e-12);
}

TEST_CASE("interval endpoints get mean-value strips") {
  Enclosure e = rigor::integrate_adaptive(kExp, Interval(0.0, 0.01),
                                          Interval(1.0, 1.01), {});
  CHECK(encloses(e.value, kEm1));                  // a=0, b=1 admissible
  CHECK(encloses(e.value, mp::exp(big("1.01")) - mp::exp(big("0.01"))));
}

TEST_CASE("schemes agree with each other and refine monotonically") {
  std::vector<Enclosure> all;
  all.push_back(rigor::integrate_scheme(kExp, Interval(0.0), Interval(1.0),
                                        Scheme::midpoint, 7));
  all.push_back(rigor::integrate_scheme(kExp, Interval(0.0), Interval(1.0),
                                        Scheme::trapezoid, 7));
  all.push_back(rigor::integrate_scheme(kExp, Interval(0.0), Interval(1.0),
                                        Scheme::simpson, 7));
  all.push_back(rigor::integrate_taylor(kExp, Interval(0.0), Interval(1.0), 6,
                                        Centering::midpoint));
  for (const auto& x : all)
    for (const auto& y : all)
      CHECK(rigor::intersect(x.value, y.value).has_value());

  for (Scheme s : {Scheme::midpoint, Scheme::trapezoid, Scheme::simpson}) {
    Enclosure c = rigor::integrate_scheme(kSin, Interval(0.0), Interval(2.0), s, 5);
    Enclosure fine =
        rigor::integrate_scheme(kSin, Interval(0.0), Interval(2.0), s, 10);
    CHECK(rigor::intersect(c.value, fine.value).has_value());
    CHECK(fine.value.width() <= c.value.width());
  }
}

TEST_CASE("per-panel derivative scope is tighter than global") {
  Enclosure g = rigor::integrate_scheme(kExp, Interval(0.0), Interval(1.0),
                                        Scheme::trapezoid, 4, rigor::DerivScope::global);
  Enclosure p = rigor::integrate_scheme(kExp, Interval(0.0), Interval(1.0),
                                        Scheme::trapezoid, 4, rigor::DerivScope::per_panel);
  CHECK(p.value.width() < g.value.width());
  CHECK(encloses(p.value, kEm1));
  CHECK(rigor::intersect(g.value, p.value).has_value());
}

TEST_CASE("containment battery with closed forms") {
  struct Case {
    JetFn f;
    Interval a, b;
    big truth;
  };
  std::vector<Case> cases;
  cases.push_back({kExp, Interval(0.0), Interval(1.0), kEm1});
  cases.push_back({kSin, Interval(0.0), rigor::pi_iv(), big(2) * 1});
  cases.push_back({[](const TaylorJet& x) { return cos(x); }, Interval(0.0),
                   Interval(1.0), mp::sin(big(1))});
  cases.push_back({[](const TaylorJet& x) { return sqr(x); }, Interval(-1.0),
                   Interval(2.0), big(3)});
  cases.push_back({[](const TaylorJet& x) { return Interval(1.0) / (Interval(1.0) + sqr(x)); },
                   Interval(0.0), Interval(1.0),
                   mp::atan(big(1))});
  cases.push_back({[](const TaylorJet& x) { return exp(-sqr(x)); }, Interval(0.0),
                   Interval(1.0),
                   big("0.74682413281242702539946743613185300535449968681260632902765")});
  cases.push_back({[](const TaylorJet& x) { return sinh(x); }, Interval(0.0),
                   Interval(1.0), mp::cosh(big(1)) - 1});
  cases.push_back({[](const TaylorJet& x) { return cosh(x); }, Interval(-1.0),
                   Interval(1.0), 2 * mp::sinh(big(1))});
  cases.push_back({[](const TaylorJet& x) { return sqrt(Interval(1.0) + x); },
                   Interval(0.0), Interval(3.0),
                   (mp::pow(big(4), big("1.5")) - 1) * 2 / 3});
  cases.push_back({[](const TaylorJet& x) { return x * exp(x); }, Interval(0.0),
                   Interval(1.0), big(1)});
  rigor::AdaptiveOptions o;
  o.tol = 1e-9;
  for (const auto& c : cases) {
    Enclosure e = rigor::integrate_adaptive(c.f, c.a, c.b, o);
    CHECK(encloses(e.value, c.truth));
    CHECK(e.value.width() <= 1e-8);
  }
}
