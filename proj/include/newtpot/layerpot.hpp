#ifndef NEWTPOT_LAYERPOT_HPP
#define NEWTPOT_LAYERPOT_HPP

#include <vector>

#include "newtpot/common.hpp"
#include "newtpot/geom.hpp"

namespace newtpot {

// Zone radius multiplier: targets within closeFactor * (panel radius) of the
// panel's bounding-circle center take the recurrence path.
inline constexpr double kCloseFactor = 1.3;

// Boundary pieces are described in their chord frame tau = (z - mid)/half,
// which sends the endpoints to -1 and +1.
struct Panel {
    cplx mid, half;
    bool curved = false;
    ChebCurve tau;  // curved only: tau(0) = -1, tau(1) = 1
    ChebCurve dtau, d2tau;
    Circle zone;    // bounding circle in the outer (unscaled) coordinates
    // branch-rotation data for curved panels
    bool flat = true;
    int bulge = -1;       // +1: curve lies above its chord (left of travel), -1: below
    double thetaLo = kPi, thetaHi = kPi;
    double cutBeyond = 0.0, cutBetween = 0.0;

    cplx toLocal(cplx z) const { return (z - mid) / half; }
};

Panel makeStraightPanel(cplx a, cplx b);
// piece [t0, t1] of a curve z(t), re-expanded on [0,1]
Panel makeCurvedPanel(const ChebCurve& z, double t0, double t1);

enum class CurveSide { Interior, Exterior }; // left / right of the direction of travel

// Nearest point on a curved panel in the chord frame; returns the side of x
// relative to the curve and the distance (chord-frame units).
CurveSide curvedPanelSide(const Panel& P, cplx x, double* distance = nullptr,
                          double* tNearest = nullptr);

// True when the two branch choices disagree at x, i.e. the side matters.
bool curvedPanelSideMatters(const Panel& P, cplx x);

// p_k = int tau^k/(tau - x) dtau for k = 0..K+1 and
// q_k = int tau^k log(tau - x) dtau for k = 0..K over the panel, log continuous
// along the panel starting from the principal value at tau = -1.
struct CauchyTable {
    std::vector<cplx> p, q;
    int branchShift = 0; // multiples of 2 pi i added to the straight-chord p_0
};

// Straight segment [-1,1]. Throws ValidationError when x is within 1e-14 of it.
CauchyTable cauchyTableStraight(cplx x, int K);
// Curved panel; side picks the branch rotation.
CauchyTable cauchyTableCurved(const Panel& P, cplx x, int K, CurveSide side);

// Allocation-free versions used on the hot path; p has K+2 entries, q K+1.
void cauchyStraight(cplx x, int K, cplx* p, cplx* q);
int cauchyCurved(const Panel& P, cplx x, int K, CurveSide side, cplx* p, cplx* q);
// Same, with ua = x + 1 and ub = x - 1 supplied separately: near a panel end
// these offsets are known far more precisely than x itself.
void cauchyStraight(cplx x, cplx ua, cplx ub, int K, cplx* p, cplx* q);
int cauchyCurved(const Panel& P, cplx x, cplx ua, cplx ub, int K, CurveSide side, cplx* p,
                 cplx* q);

// Principal-branch p_0 of a panel as seen from x (chord frame), only for the
// winding count; Im part is the subtended angle.
double subtendedAngle(cplx x);

// Winding number from the sum of p_0 over a closed boundary; throws
// NumericalError when it is not within 0.1 of 0 or 1.
bool windingIndicator(cplx sumP0, double* value = nullptr);

} // namespace newtpot

#endif
