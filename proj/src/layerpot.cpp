#include "newtpot/layerpot.hpp"

#include <algorithm>
#include <cmath>

namespace newtpot {

Panel makeStraightPanel(cplx a, cplx b)
{
    Panel P;
    P.mid = 0.5 * (a + b);
    P.half = 0.5 * (b - a);
    P.curved = false;
    P.zone = Circle{P.mid, std::abs(P.half)};
    return P;
}

namespace {

double arg2pi(cplx w)
{
    double a = std::arg(w);
    if (a < 0.0)
        a += 2.0 * kPi;
    return a;
}

} // namespace

Panel makeCurvedPanel(const ChebCurve& z, double t0, double t1)
{
    Panel P;
    P.curved = true;
    const ChebCurve sub =
        ChebCurve::fit([&](double t) { return z(t0 + (t1 - t0) * t); }, std::max(z.degree(), 2));
    const cplx a = sub(0.0), b = sub(1.0);
    P.mid = 0.5 * (a + b);
    P.half = 0.5 * (b - a);
    std::vector<cplx> c = sub.coeffs();
    c[0] -= P.mid;
    for (cplx& v : c)
        v /= P.half;
    P.tau = ChebCurve(std::move(c));
    P.dtau = P.tau.derivativeCurve();
    P.d2tau = P.dtau.derivativeCurve();

    std::vector<cplx> pts;
    double meanIm = 0.0, maxIm = 0.0;
    for (int j = 0; j <= 64; ++j) {
        pts.push_back(sub(j / 64.0));
        const double im = P.tau(j / 64.0).imag();
        meanIm += im;
        maxIm = std::max(maxIm, std::abs(im));
    }
    P.zone = minimalEnclosingCircle(pts);
    P.flat = maxIm < 1e-10;
    P.bulge = meanIm > 0.0 ? 1 : -1;

    // angles of the arcs through -1, 1 occupied by the curve, ends as limits
    double lo = arg2pi(-1.0 / P.dtau(0.0)), hi = lo;
    const double endAngle = arg2pi(-P.dtau(1.0));
    lo = std::min(lo, endAngle);
    hi = std::max(hi, endAngle);
    for (int j = 1; j < 64; ++j) {
        const cplx t = P.tau(j / 64.0);
        const double th = arg2pi((t - 1.0) / (t + 1.0));
        lo = std::min(lo, th);
        hi = std::max(hi, th);
    }
    P.thetaLo = lo;
    P.thetaHi = hi;
    if (P.bulge < 0) {
        P.cutBeyond = 0.5 * (hi + 2.0 * kPi);
        P.cutBetween = 0.5 * (kPi + lo);
    } else {
        P.cutBeyond = 0.5 * lo;
        P.cutBetween = 0.5 * (hi + kPi);
    }
    return P;
}

CurveSide curvedPanelSide(const Panel& P, cplx x, double* distance, double* tNearest)
{
    double best = 0.0, bestD = 1e300;
    for (int j = 0; j <= 32; ++j) {
        const double d = std::abs(P.tau(j / 32.0) - x);
        if (d < bestD) {
            bestD = d;
            best = j / 32.0;
        }
    }
    double t = best;
    for (int it = 0; it < 20; ++it) {
        const cplx r = P.tau(t) - x, d1 = P.dtau(t), d2 = P.d2tau(t);
        const double f = (std::conj(r) * d1).real();
        const double fp = std::norm(d1) + (std::conj(r) * d2).real();
        if (!(fp > 0.0))
            break;
        const double tn = std::clamp(t - f / fp, 0.0, 1.0);
        const double step = std::abs(tn - t);
        t = tn;
        if (step < 1e-16)
            break;
    }
    const cplx r = x - P.tau(t);
    if (distance)
        *distance = std::abs(r);
    if (tNearest)
        *tNearest = t;
    const double cross = (std::conj(P.dtau(t)) * r).imag();
    return cross > 0.0 ? CurveSide::Interior : CurveSide::Exterior;
}

bool curvedPanelSideMatters(const Panel& P, cplx x)
{
    if (!P.curved || P.flat)
        return false;
    const double th = arg2pi((x - 1.0) / (x + 1.0));
    const double lo = std::min(P.cutBeyond, P.cutBetween), hi = std::max(P.cutBeyond, P.cutBetween);
    return th > lo && th <= hi;
}

namespace {

// p_0..p_{K+1} from p0 (on whatever branch), then q_0..q_K.
void fillTables(cplx x, int K, cplx p0, int shift, cplx Lm, cplx* p, cplx* q)
{
    const double ax = std::abs(x);
    if (ax <= 1.1) {
        p[0] = p0;
        for (int k = 1; k <= K + 1; ++k)
            p[k] = x * p[k - 1] + ((k & 1) ? 2.0 / k : 0.0);
    } else {
        // backward recurrence is stable outside the unit disk; it lands on the
        // straight-segment branch, the residue term restores the rotated one
        const int top = K + 2 + int(std::ceil(39.2 / std::log(ax)));
        cplx pk = 0.0;
        for (int k = top; k >= 1; --k) {
            const cplx prev = (pk - ((k & 1) ? 2.0 / k : 0.0)) / x;
            if (k - 1 <= K + 1)
                p[k - 1] = prev;
            pk = prev;
        }
        if (shift != 0) {
            const cplx r(0.0, 2.0 * kPi * shift);
            cplx xp = 1.0;
            for (int k = 0; k <= K + 1; ++k, xp *= x)
                p[k] += r * xp;
        }
    }
    const cplx Lp = Lm + p0;
    for (int k = 0; k <= K; ++k) {
        const cplx lm = (k & 1) ? -Lm : Lm; // -(-1)^{k+1} Lm
        q[k] = (Lp + lm - p[k + 1]) / double(k + 1);
    }
}

} // namespace

void cauchyStraight(cplx x, int K, cplx* p, cplx* q)
{
    cauchyStraight(x, x + 1.0, x - 1.0, K, p, q);
}

void cauchyStraight(cplx x, cplx ua, cplx ub, int K, cplx* p, cplx* q)
{
    if (std::abs(x.imag()) <= 1e-14 && std::abs(x.real()) <= 1.0 + 1e-14)
        throw ValidationError("on-boundary target: point lies on a boundary segment");
    const cplx Lm = std::log(-ua);
    const cplx p0 = std::log(-ub) - Lm;
    fillTables(x, K, p0, 0, Lm, p, q);
}

int cauchyCurved(const Panel& P, cplx x, int K, CurveSide side, cplx* p, cplx* q)
{
    return cauchyCurved(P, x, x + 1.0, x - 1.0, K, side, p, q);
}

int cauchyCurved(const Panel& P, cplx x, cplx ua, cplx ub, int K, CurveSide side, cplx* p, cplx* q)
{
    if (std::abs(ua) <= 1e-14 || std::abs(ub) <= 1e-14)
        throw ValidationError("on-boundary target: point coincides with a panel end");
    const cplx w = ub / ua;
    const double principal = std::arg(w);
    double a = principal;
    int shift = 0;
    if (!P.flat) {
        const bool chordSide = (side == CurveSide::Interior) == (P.bulge < 0);
        const double cut = chordSide ? P.cutBeyond : P.cutBetween;
        a = arg2pi(w);
        if (a > cut)
            a -= 2.0 * kPi;
        shift = int(std::lround((a - principal) / (2.0 * kPi)));
    }
    const cplx Lm = std::log(-ua);
    const cplx p0(std::log(std::abs(ub)) - std::log(std::abs(ua)), a);
    fillTables(x, K, p0, shift, Lm, p, q);
    return shift;
}

CauchyTable cauchyTableStraight(cplx x, int K)
{
    CauchyTable t;
    t.p.resize(K + 2);
    t.q.resize(K + 1);
    cauchyStraight(x, K, t.p.data(), t.q.data());
    return t;
}

CauchyTable cauchyTableCurved(const Panel& P, cplx x, int K, CurveSide side)
{
    CauchyTable t;
    t.p.resize(K + 2);
    t.q.resize(K + 1);
    t.branchShift = cauchyCurved(P, x, K, side, t.p.data(), t.q.data());
    return t;
}

double subtendedAngle(cplx x)
{
    return std::arg((x - 1.0) / (x + 1.0));
}

bool windingIndicator(cplx sumP0, double* value)
{
    const double v = sumP0.imag() / (2.0 * kPi);
    if (value)
        *value = v;
    const double r = std::round(v);
    if (std::abs(v - r) > 0.1 || (r != 0.0 && r != 1.0))
        throw NumericalError("target too close to boundary for classification (winding " +
                             std::to_string(v) + ")");
    return r == 1.0;
}

} // namespace newtpot
