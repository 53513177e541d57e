#include "doctest.h"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <memory>
#include <unordered_map>
#include <random>
#include <vector>

#include "rigor/jet.hpp"

using rigor::Interval;
using rigor::TaylorJet;
namespace mp = boost::multiprecision;
using big = mp::cpp_bin_float_50;

// ---- symbolic differentiation oracle (independent of the jet recurrences) --

namespace sym {

struct Expr;
using P = std::shared_ptr<const Expr>;

struct Expr {
  enum Kind { Var, Const, Add, Sub, Mul, Div, Sin, Cos, Exp, Sinh, Cosh, Sqrt } kind;
  double cval = 0;
  P a, b;
};

inline P make(Expr::Kind k, P a = nullptr, P b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
inline P var() { return make(Expr::Var); }
inline P cst(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Const;
  e->cval = v;
  return e;
}
inline P operator+(P x, P y) { return make(Expr::Add, x, y); }
inline P operator-(P x, P y) { return make(Expr::Sub, x, y); }
inline P operator*(P x, P y) { return make(Expr::Mul, x, y); }
inline P operator/(P x, P y) { return make(Expr::Div, x, y); }
inline P operator+(P x, double c) { return x + cst(c); }
inline P operator+(double c, P x) { return cst(c) + x; }
inline P operator-(P x, double c) { return x - cst(c); }
inline P operator-(double c, P x) { return cst(c) - x; }
inline P operator*(double c, P x) { return cst(c) * x; }
inline P operator*(P x, double c) { return x * cst(c); }
inline P sin(P x) { return make(Expr::Sin, x); }
inline P cos(P x) { return make(Expr::Cos, x); }
inline P exp(P x) { return make(Expr::Exp, x); }
inline P sinh(P x) { return make(Expr::Sinh, x); }
inline P cosh(P x) { return make(Expr::Cosh, x); }
inline P sqrt(P x) { return make(Expr::Sqrt, x); }

// differentiation memoized over the DAG so repeated derivatives stay
// polynomial in size
P diff_memo(const P& e, std::unordered_map<const Expr*, P>& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  auto d = [&](const P& s) { return diff_memo(s, memo); };
  P r;
  switch (e->kind) {
    case Expr::Var: r = cst(1); break;
    case Expr::Const: r = cst(0); break;
    case Expr::Add: r = d(e->a) + d(e->b); break;
    case Expr::Sub: r = d(e->a) - d(e->b); break;
    case Expr::Mul: r = d(e->a) * e->b + e->a * d(e->b); break;
    case Expr::Div: r = (d(e->a) * e->b - e->a * d(e->b)) / (e->b * e->b); break;
    case Expr::Sin: r = cos(e->a) * d(e->a); break;
    case Expr::Cos: r = cst(0) - sin(e->a) * d(e->a); break;
    case Expr::Exp: r = exp(e->a) * d(e->a); break;
    case Expr::Sinh: r = cosh(e->a) * d(e->a); break;
    case Expr::Cosh: r = sinh(e->a) * d(e->a); break;
    case Expr::Sqrt: r = d(e->a) / (cst(2) * sqrt(e->a)); break;
  }
  memo.emplace(e.get(), r);
  return r;
}

P diff(const P& e) {
  std::unordered_map<const Expr*, P> memo;
  return diff_memo(e, memo);
}

// evaluation memoized over the DAG (derivative trees share subtrees heavily)
big eval_memo(const P& e, const big& x,
              std::unordered_map<const Expr*, big>& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  big r;
  switch (e->kind) {
    case Expr::Var: r = x; break;
    case Expr::Const: r = big(e->cval); break;
    case Expr::Add: r = eval_memo(e->a, x, memo) + eval_memo(e->b, x, memo); break;
    case Expr::Sub: r = eval_memo(e->a, x, memo) - eval_memo(e->b, x, memo); break;
    case Expr::Mul: r = eval_memo(e->a, x, memo) * eval_memo(e->b, x, memo); break;
    case Expr::Div: r = eval_memo(e->a, x, memo) / eval_memo(e->b, x, memo); break;
    case Expr::Sin: r = mp::sin(eval_memo(e->a, x, memo)); break;
    case Expr::Cos: r = mp::cos(eval_memo(e->a, x, memo)); break;
    case Expr::Exp: r = mp::exp(eval_memo(e->a, x, memo)); break;
    case Expr::Sinh: r = mp::sinh(eval_memo(e->a, x, memo)); break;
    case Expr::Cosh: r = mp::cosh(eval_memo(e->a, x, memo)); break;
    case Expr::Sqrt: r = mp::sqrt(eval_memo(e->a, x, memo)); break;
  }
  memo.emplace(e.get(), r);
  return r;
}

big eval(const P& e, const big& x) {
  std::unordered_map<const Expr*, big> memo;
  return eval_memo(e, x, memo);
}

} // namespace sym

namespace {

bool encloses(const Interval& iv, const big& v) {
  return big(iv.lo) <= v && v <= big(iv.hi);
}

TaylorJet jvar(double x, int n) { return TaylorJet::variable(Interval(x), n); }

// each battery entry is the same expression over jets and over the oracle
struct Entry {
  rigor::JetFn jet;
  sym::P tree;
};

std::vector<Entry> battery() {
  using rigor::TaylorJet;
  std::vector<Entry> v;
  auto X = sym::var();
  auto add = [&](rigor::JetFn f, sym::P t) { v.push_back({std::move(f), t}); };
  using J = const TaylorJet&;
  add([](J x) { return x; }, X);
  add([](J x) { return x * x + 3.0 * x + Interval(1.0); }, X * X + 3.0 * X + 1.0);
  add([](J x) { return sin(x); }, sin(X));
  add([](J x) { return cos(x) * sin(x); }, cos(X) * sin(X));
  add([](J x) { return exp(x); }, exp(X));
  add([](J x) { return exp(Interval(0.0) - x * x); }, exp(0.0 - X * X));
  add([](J x) { return Interval(1.0) / (Interval(1.0) + x * x); },
      sym::cst(1.0) / (1.0 + X * X));
  add([](J x) { return sqrt(Interval(1.0) + x * x); }, sqrt(1.0 + X * X));
  add([](J x) { return sinh(x) * cosh(x); }, sinh(X) * cosh(X));
  add([](J x) { return sin(x) / (Interval(2.0) + cos(x)); }, sin(X) / (2.0 + cos(X)));
  add([](J x) { return exp(sin(x)); }, exp(sin(X)));
  add([](J x) { return x / (Interval(1.0) + exp(x)); }, X / (1.0 + exp(X)));
  add([](J x) { return sqrt(Interval(2.0) + sin(x)); }, sqrt(2.0 + sin(X)));
  add([](J x) { return cos(x * x); }, cos(X * X));
  add([](J x) { return sinh(x) / (Interval(1.0) + cosh(x)); }, sinh(X) / (1.0 + cosh(X)));
  add([](J x) { return exp(x) * sin(Interval(2.0) * x); }, exp(X) * sin(2.0 * X));
  add([](J x) { return (Interval(1.0) + x) * (Interval(1.0) - x) * (Interval(1.0) + x * x); },
      (1.0 + X) * (1.0 - X) * (1.0 + X * X));
  add([](J x) { return exp(x / (Interval(3.0) + x)); }, exp(X / (3.0 + X)));
  add([](J x) { return sin(sinh(x)); }, sin(sinh(X)));
  add([](J x) { return sqrt(Interval(4.0) + x * sin(x)); }, sqrt(4.0 + X * sin(X)));
  return v;
}

} // namespace

TEST_CASE("jet seeds") {
  TaylorJet v = jvar(2.0, 3);
  CHECK(v[0] == Interval(2));
  CHECK(v[1] == Interval(1));
  CHECK(v[2] == Interval(0));
  CHECK(v[3] == Interval(0));
  TaylorJet c = TaylorJet::constant(Interval(5.0), Interval(2.0), 2);
  CHECK(c[0] == Interval(5));
  CHECK(c[1] == Interval(0));
  TaylorJet w = TaylorJet::variable(Interval(0, 1), 1);
  CHECK(w[0] == Interval(0, 1));
  CHECK(w[1] == Interval(1));
}

TEST_CASE("jet arithmetic goldens") {
  TaylorJet x = jvar(3.0, 2);
  TaylorJet sq = x * x;
  CHECK(sq[0] == Interval(9));
  CHECK(sq[1] == Interval(6));
  CHECK(sq[2] == Interval(1));

  TaylorJet e = exp(jvar(0.0, 4));
  CHECK(e[0] == Interval(1));
  CHECK(e[1] == Interval(1));
  CHECK(e[2].contains(0.5));
  CHECK(e[3].contains(big(1.0 / 6).convert_to<double>()));
  CHECK(encloses(e[3], big(1) / 6));
  CHECK(encloses(e[4], big(1) / 24));
  CHECK(e[4].width() < 1e-17);

  auto sc = sin_cos(jvar(0.0, 3));
  CHECK(sc.sin[0] == Interval(0));
  CHECK(sc.sin[1] == Interval(1));
  CHECK(sc.sin[2] == Interval(0));
  CHECK(encloses(sc.sin[3], big(-1) / 6));
  CHECK(sc.cos[0] == Interval(1));
  CHECK(encloses(sc.cos[2], big(-1) / 2));

  // tan as sin/cos at 0, order 5: (0, 1, 0, 1/3, 0, 2/15)
  TaylorJet t = sin(jvar(0.0, 5)) / cos(jvar(0.0, 5));
  CHECK(t[0] == Interval(0));
  CHECK(t[1].contains(1.0));
  CHECK(encloses(t[3], big(1) / 3));
  CHECK(encloses(t[5], big(2) / 15));
  CHECK(t[5].width() < 1e-16);
}

TEST_CASE("jet errors") {
  TaylorJet a = jvar(0.0, 3), b = jvar(1.0, 3), c = jvar(0.0, 2);
  CHECK_THROWS_AS((void)(a + b), rigor::BaseMismatch);
  CHECK_THROWS_AS((void)(a + c), rigor::BaseMismatch);
  TaylorJet z = TaylorJet::constant(Interval(-1, 1), Interval(0.0), 3);
  CHECK_THROWS_AS((void)(a / z), rigor::DivisionByZeroInterval);
  TaylorJet neg = TaylorJet::constant(Interval(-2.0), Interval(0.0), 3);
  CHECK_THROWS_AS((void)sqrt(neg), rigor::DomainViolation);
}

TEST_CASE("sinh cosh jets match the oracle at 1") {
  auto sc = sinh_cosh(jvar(1.0, 2));
  big s1 = mp::sinh(big(1)), c1 = mp::cosh(big(1));
  CHECK(encloses(sc.sinh[0], s1));
  CHECK(encloses(sc.sinh[1], c1));
  CHECK(encloses(sc.sinh[2], s1 / 2));
  CHECK(encloses(sc.cosh[2], c1 / 2));
}

TEST_CASE("oracle equivalence for the composite battery") {
  auto bat = battery();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (const auto& entry : bat) {
    // derivative trees up to order 8
    std::vector<sym::P> trees{entry.tree};
    for (int k = 1; k <= 8; ++k) trees.push_back(sym::diff(trees.back()));
    for (int pt = 0; pt < 2; ++pt) {
      double x0 = u(rng);
      TaylorJet j = entry.jet(jvar(x0, 8));
      big fact = 1;
      for (int k = 0; k <= 8; ++k) {
        if (k > 0) fact *= k;
        big want = sym::eval(trees[std::size_t(k)], big(x0)) / fact;
        CAPTURE(x0);
        CAPTURE(k);
        CHECK(encloses(j[k], want));
        CHECK(j[k].width() < 1e-8); // enclosures stay meaningfully tight
      }
    }
  }
}

TEST_CASE("inclusion monotonicity in the base") {
  auto bat = battery();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (const auto& entry : bat) {
    double c = u(rng);
    Interval narrow(c, c + 0.05), wide(c - 0.05, c + 0.1);
    TaylorJet jn = entry.jet(TaylorJet::variable(narrow, 6));
    TaylorJet jw = entry.jet(TaylorJet::variable(wide, 6));
    for (int k = 0; k <= 6; ++k) CHECK(jw[k].contains(jn[k]));
  }
}

TEST_CASE("finite differences land in the first coefficient") {
  auto bat = battery();
  double h = 1e-4;
  for (const auto& entry : bat) {
    for (double x0 : {-0.5, 0.2, 0.7}) {
      TaylorJet j = entry.jet(jvar(x0, 1));
      TaylorJet wideband = entry.jet(TaylorJet::variable(Interval(x0 - h, x0 + h), 3));
      double fd = (entry.jet(jvar(x0 + h, 0))[0].mid() -
                   entry.jet(jvar(x0 - h, 0))[0].mid()) / (2 * h);
      // fd = f'(x0) + (f)_3(xi) h^2, |xi-x0|<=h, plus fp noise
      double slack = wideband[3].mag() * h * h + 1e-9;
      CHECK(j[1].lo - slack <= fd);
      CHECK(fd <= j[1].hi + slack);
    }
  }
}

TEST_CASE("jet cost is quadratic in the order") {
  auto f = [](const TaylorJet& x) {
    return exp(sin(x) * x) / (Interval(2.0) + cos(x));
  };
  rigor::jet_stats::reset_mul_count();
  (void)f(jvar(0.3, 8));
  long long c8 = rigor::jet_stats::mul_count();
  rigor::jet_stats::reset_mul_count();
  (void)f(jvar(0.3, 16));
  long long c16 = rigor::jet_stats::mul_count();
  CHECK(c8 > 0);
  CHECK(double(c16) <= 4.8 * double(c8)); // ~(16/8)^2 with lower-order slack
  CHECK(c16 <= 40 * 16 * 16);
}

TEST_CASE("jet_eval_remainder encloses the function over the domain") {
  rigor::JetFn f = [](const TaylorJet& x) { return exp(x); };
  auto tr = rigor::jet_eval_remainder(f, Interval(0, 1), 3);
  REQUIRE(tr.poly.size() == 4);
  CHECK(encloses(tr.poly[0], big(1)));
  CHECK(encloses(tr.remainder, mp::exp(big(1)) / 24)); // e^xi/4! at xi=1
  CHECK(encloses(tr.remainder, big(1) / 24));
  // pointwise: f(x) in poly(x) + rem x^4
  for (double x : {0.1, 0.5, 0.9}) {
    Interval acc(0.0);
    Interval xs(1.0);
    for (std::size_t k = 0; k < tr.poly.size(); ++k) {
      acc += tr.poly[k] * xs;
      xs *= Interval(x);
    }
    acc += tr.remainder * xs;
    CHECK(encloses(acc, mp::exp(big(x))));
  }
  // constant function: zero coefficients, zero remainder
  rigor::JetFn g = [](const TaylorJet& x) {
    return TaylorJet::constant(Interval(7.0), x.base(), x.order());
  };
  auto trc = rigor::jet_eval_remainder(g, Interval(0, 1), 3);
  CHECK(trc.poly[0] == Interval(7));
  CHECK(trc.poly[2] == Interval(0));
  CHECK(trc.remainder == Interval(0));
  // sin on [-0.1,0.1], order 1: remainder contains -sin(xi)/2 range
  rigor::JetFn s = [](const TaylorJet& x) { return sin(x); };
  auto trs = rigor::jet_eval_remainder(s, Interval(-0.1, 0.1), 1);
  CHECK(trs.remainder.contains(0.0));
  CHECK(trs.remainder.mag() >= std::sin(0.1) / 2 - 1e-12);
  CHECK(trs.remainder.mag() <= std::sin(0.1) / 2 + 1e-12);
}
