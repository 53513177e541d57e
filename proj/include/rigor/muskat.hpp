// muskat.hpp - certification of the open sign conditions behind the Muskat
// stability-shift results: the confined/flat coefficients for the explicit
// piecewise initial curve, and the (h2, K) bifurcation map driven by the
// sign of I1 + I2, with the K-derivative DI2 for the implicit-function step.

#ifndef RIGOR_MUSKAT_HPP
#define RIGOR_MUSKAT_HPP

#include <optional>
#include <vector>

#include "rigor/interval.hpp"
#include "rigor/jet.hpp"
#include "rigor/quadrature.hpp"
#include "rigor/singular.hpp"

namespace rigor::muskat {

class PositivityCertificateFailed : public IntervalError {
public:
  using IntervalError::IntervalError;
};

// A curve (z1(a), z2(a)) for a >= 0, z2 piecewise with true (irrational)
// breakpoints.  Pieces are separated by one-ULP gap slivers so that panels
// on either side evaluate a single analytic formula; the slivers themselves
// only support range evaluation (hull of the adjacent formulas).
struct CurvePiece {
  Interval domain; // outward enclosure of the true piece domain
  JetFn z2, dz2;
};

struct CurveFamily {
  JetFn z1, dz1;
  std::vector<CurvePiece> pieces;    // ordered; beyond the last piece z2 == 0
  std::vector<Interval> breakpoints; // enclosures of the true kink locations
  Interval B;                        // Gaussian damping of z1
  std::optional<Interval> h2;
  Interval support_radius;           // z2 vanishes identically beyond

  TaylorJet z2_jet(const TaylorJet& a) const;
  TaylorJet dz2_jet(const TaylorJet& a) const;
  Interval z2_range(const Interval& a) const;  // hulls across pieces/slivers
  Interval dz2_range(const Interval& a) const;
  Interval dz2_at0() const;
  Interval z2_sup() const;  // sup |z2| over [0, support]
  Interval dz2_sup() const; // sup |dz2|
};

CurveFamily curve_theorem1();
CurveFamily curve_bifurcation(const Interval& h2);

struct ParamCell {
  Interval h2{0.25, 1.25};
  Interval K{-0.99, 0.99};
  int depth = 0;
};

enum class Verdict { Turn, NoTurn, Unknown };
const char* to_string(Verdict v);

struct CellVerdict {
  ParamCell cell;
  Verdict verdict = Verdict::Unknown;
  Interval enclosure; // of I1 + I2 (the sign of dt RT(0,0) up to C > 0)
};

struct MuskatOptions {
  double tol = 1e-3;          // 1D integrals
  double tol_2d = 2e-3;       // I2 / DI2 double integrals
  long budget = 40000;
  long budget_2d = 30000;
  int taylor_order = 8;
  double cancel_window = 1e-2; // near-origin 0/0 window in the A/I1 integrands
  int cancel_order = 8;
  double strip_y = 1e-4;       // y-edge strip of I2/DI2 handled by cancellation
  int strip_gamma_panels = 48;
  double tail_tol_frac = 0.25; // fraction of tol_2d granted to the y-tail
};

// confined/flat coefficients for the Theorem-3.1 curve (the leading 2 resp. 8
// times dz2(0) included)
Enclosure a_confined(const CurveFamily& curve, const MuskatOptions& opts = {});
Enclosure a_flat(const CurveFamily& curve, const MuskatOptions& opts = {});

// certified zero: integrand range on [support, support+1] (must be [0,0])
Interval support_tail_residual(const CurveFamily& curve);

Enclosure i1(const Interval& h2, const MuskatOptions& opts = {});
Enclosure i2(const ParamCell& cell, const MuskatOptions& opts = {});
Enclosure di2(const ParamCell& cell, const MuskatOptions& opts = {});

CellVerdict dt_rt_sign(const ParamCell& cell, const MuskatOptions& opts = {});

struct Di2Result {
  Enclosure enclosure;
  bool sign_definite = false;
};
Di2Result di2_nonzero(const ParamCell& cell, const MuskatOptions& opts = {});

struct ScanResult {
  std::vector<CellVerdict> leaves; // sorted by (h2.lo, K.lo)
  double area_turn = 0, area_noturn = 0, area_unknown = 0;
  double decided_fraction = 0;
  long cells_evaluated = 0;
};

ScanResult bifurcation_scan(const ParamCell& box, int max_depth,
                            const MuskatOptions& opts = {});

std::string scan_to_csv(const ScanResult& scan);
// P6 image, NoTurn yellow / Turn red / Unknown white
void scan_to_ppm(const ScanResult& scan, const ParamCell& box, int width,
                 int height, const std::string& path);

} // namespace rigor::muskat

#endif // RIGOR_MUSKAT_HPP
