// jet.hpp - Taylor jets: interval enclosures of normalized derivatives
// (f)_k = f^(k)(x0)/k! up to a chosen order, propagated by the standard
// convolution recurrences.  A jet of order 0 is just a range evaluation.

#ifndef RIGOR_JET_HPP
#define RIGOR_JET_HPP

#include <functional>
#include <vector>

#include "rigor/interval.hpp"

namespace rigor {

class BaseMismatch : public IntervalError {
public:
  using IntervalError::IntervalError;
};

inline constexpr int kDefaultMaxOrder = 16;

class TaylorJet {
public:
  TaylorJet() : base_(0.0), coeffs_(1) {}

  // constant c: (c, 0, ..., 0)
  static TaylorJet constant(const Interval& value, const Interval& base, int order);
  // the variable at x0: (x0, 1, 0, ..., 0)
  static TaylorJet variable(const Interval& base, int order);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const Interval& base() const noexcept { return base_; }
  const Interval& operator[](int k) const { return coeffs_.at(std::size_t(k)); }
  Interval& operator[](int k) { return coeffs_.at(std::size_t(k)); }
  const std::vector<Interval>& coeffs() const noexcept { return coeffs_; }

  // enclosure of the k-th derivative (k! * coeff)
  Interval derivative(int k) const;

  TaylorJet(Interval base, std::vector<Interval> coeffs)
      : base_(base), coeffs_(std::move(coeffs)) {}

private:
  Interval base_;
  std::vector<Interval> coeffs_;
};

TaylorJet operator+(const TaylorJet& u, const TaylorJet& v);
TaylorJet operator-(const TaylorJet& u, const TaylorJet& v);
TaylorJet operator-(const TaylorJet& u);
TaylorJet operator*(const TaylorJet& u, const TaylorJet& v);
TaylorJet operator/(const TaylorJet& u, const TaylorJet& v);

TaylorJet operator+(const TaylorJet& u, const Interval& c);
TaylorJet operator+(const Interval& c, const TaylorJet& u);
TaylorJet operator-(const TaylorJet& u, const Interval& c);
TaylorJet operator-(const Interval& c, const TaylorJet& u);
TaylorJet operator*(const TaylorJet& u, const Interval& c);
TaylorJet operator*(const Interval& c, const TaylorJet& u);
TaylorJet operator/(const TaylorJet& u, const Interval& c);
TaylorJet operator/(const Interval& c, const TaylorJet& u);

struct SinCosJets {
  TaylorJet sin, cos;
};
struct SinhCoshJets {
  TaylorJet sinh, cosh;
};

TaylorJet exp(const TaylorJet& u);
SinCosJets sin_cos(const TaylorJet& u);
SinhCoshJets sinh_cosh(const TaylorJet& u);
inline TaylorJet sin(const TaylorJet& u) { return sin_cos(u).sin; }
inline TaylorJet cos(const TaylorJet& u) { return sin_cos(u).cos; }
inline TaylorJet sinh(const TaylorJet& u) { return sinh_cosh(u).sinh; }
inline TaylorJet cosh(const TaylorJet& u) { return sinh_cosh(u).cosh; }
TaylorJet sqrt(const TaylorJet& u);
TaylorJet sqr(const TaylorJet& u);
TaylorJet pow_int(const TaylorJet& u, int k);

// A univariate function evaluable on jets (and hence on intervals, via
// order-0 jets).
using JetFn = std::function<TaylorJet(const TaylorJet&)>;
// A bivariate one; partial jets are obtained by seeding one argument as the
// variable and the other as a constant.
using Jet2Fn = std::function<TaylorJet(const TaylorJet&, const TaylorJet&)>;

// Range enclosure of f over x (order-0 evaluation).
Interval eval_range(const JetFn& f, const Interval& x);

// Taylor polynomial with Lagrange remainder: degree-N coefficients at the
// chosen center together with the (N+1)-th coefficient enclosed over the
// whole domain.  For every x in the domain,
//   f(x)  in  sum_k poly[k] (x-c)^k  +  remainder * (x-c)^(N+1).
struct TaylorRemainder {
  Interval center;
  std::vector<Interval> poly;
  Interval remainder;
};
enum class Centering { left, midpoint };
TaylorRemainder jet_eval_remainder(const JetFn& f, const Interval& domain,
                                   int order,
                                   Centering centering = Centering::left);

// Interval-multiplication counter for cost instrumentation (thread-local,
// diagnostics only).
namespace jet_stats {
long long mul_count() noexcept;
void reset_mul_count() noexcept;
} // namespace jet_stats

} // namespace rigor

#endif // RIGOR_JET_HPP
