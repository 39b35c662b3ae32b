#include "newtpot/element.hpp"

#include <algorithm>
#include <cmath>

namespace newtpot {

namespace {

struct PhiEval {
    const std::vector<double>& phi;
    int deg;
    // value and outward normal derivative for tangent direction dz
    void operator()(cplx z, cplx dz, double& v, double& dn) const
    {
        double gx, gy;
        v = evalMonomial2D(phi, deg, z, gx, gy);
        const cplx n = cplx(0.0, -1.0) * dz / std::abs(dz);
        dn = gx * n.real() + gy * n.imag();
    }
};

void farRule(PanelTrace& pt)
{
    const Panel& P = pt.panel;
    const Rule1D& g = gaussLegendre(2 * (pt.K + 1));
    for (int j = 0; j < g.size(); ++j) {
        cplx tau, dtau;
        double w;
        if (P.curved) {
            const double t = 0.5 * (g.x[j] + 1.0);
            tau = P.tau(t);
            dtau = P.dtau(t);
            w = 0.5 * g.w[j];
        } else {
            tau = g.x[j];
            dtau = 1.0;
            w = g.w[j];
        }
        const cplx dz = P.half * dtau;
        pt.farZ.push_back(P.mid + P.half * tau);
        pt.farDz.push_back(w * dz);
        pt.farPhi.push_back(evalMonomial1D(pt.c, tau).real());
        pt.farSigma.push_back(w * (evalMonomial1D(pt.e, tau) * dtau).real());
    }
}

void recordSolve(ElementTables& t, const SolveReport& r)
{
    ++t.traceSolves;
    if (!r.residualContractHolds)
        ++t.traceContractViolations;
}

PanelTrace straightTrace(ElementTables& t, int edge, cplx a, cplx b, const ElementOptions& opt)
{
    PanelTrace pt;
    pt.edge = edge;
    pt.panel = makeStraightPanel(a, b);
    pt.K = t.N + opt.straightExtra;
    const int K = pt.K;
    const Rule1D& g = gaussLegendre(K + 1);
    const PhiEval ev{t.phi, t.N + 2};
    Eigen::VectorXcd vphi(K + 1), ve(K + 1);
    const double len = std::abs(pt.panel.half);
    for (int j = 0; j <= K; ++j) {
        double v, dn;
        ev(pt.panel.mid + pt.panel.half * g.x[j], pt.panel.half, v, dn);
        vphi[j] = v;
        ve[j] = dn * len;
    }
    const SquareSolver& S = straightTraceSolver(K, opt.solver, opt.seed);
    SolveReport r1, r2;
    const Eigen::VectorXcd c = S.solve(vphi, &r1), e = S.solve(ve, &r2);
    recordSolve(t, r1);
    recordSolve(t, r2);
    pt.c.assign(c.data(), c.data() + c.size());
    pt.e.assign(e.data(), e.data() + e.size());
    farRule(pt);
    return pt;
}

// Fits the traces on curve piece [t0,t1]; returns false if the fit misses
// the check points by more than the tolerance.
bool curvedTrace(ElementTables& t, int edge, const ChebCurve& z, double t0, double t1,
                 const ElementOptions& opt, double tolPhi, double tolE, PanelTrace& pt)
{
    pt = PanelTrace{};
    pt.edge = edge;
    pt.panel = makeCurvedPanel(z, t0, t1);
    pt.K = t.N + opt.curvedExtra;
    const Panel& P = pt.panel;
    const int K = pt.K;
    const PhiEval ev{t.phi, t.N + 2};

    auto sample = [&](double s, cplx& tau, cplx& vphi, cplx& ve) {
        tau = P.tau(s);
        const cplx dtau = P.dtau(s);
        double v, dn;
        ev(P.mid + P.half * tau, P.half * dtau, v, dn);
        vphi = v;
        ve = dn * std::abs(P.half * dtau) / dtau;
    };

    const Rule1D& g = gaussLegendre(K + 1);
    std::vector<cplx> tau(K + 1), vphi(K + 1), ve(K + 1);
    for (int j = 0; j <= K; ++j)
        sample(0.5 * (g.x[j] + 1.0), tau[j], vphi[j], ve[j]);
    SolveReport r1, r2;
    pt.c = fitMonomial1D(tau, vphi, opt.solver, opt.seed, &r1);
    pt.e = fitMonomial1D(tau, ve, opt.solver, opt.seed, &r2);
    recordSolve(t, r1);
    recordSolve(t, r2);

    double errPhi = 0.0, errE = 0.0;
    for (int j = 0; j <= 2 * K; ++j) {
        cplx tj, fp, fe;
        sample((j + 0.5) / (2 * K + 1), tj, fp, fe);
        errPhi = std::max(errPhi, std::abs(evalMonomial1D(pt.c, tj) - fp));
        errE = std::max(errE, std::abs(evalMonomial1D(pt.e, tj) - fe));
    }
    return errPhi <= tolPhi && errE <= tolE * std::abs(P.half);
}

void curvedTraces(ElementTables& t, int edge, const ChebCurve& z, const ElementOptions& opt)
{
    double s1 = 0.0, s2 = 0.0;
    for (int m = 0; m <= t.N + 2; ++m)
        for (int n = 0; n <= m; ++n) {
            const double c = std::abs(t.phi[monoIndex(m, n)]);
            s1 += c;
            s2 += m * c;
        }
    const double tolPhi = 1e-13 * std::max(s1, 1e-300);
    const double tolE = 1e-13 * std::max(s2, 1e-300);

    struct Piece {
        double t0, t1;
        int depth;
    };
    std::vector<Piece> todo{{0.0, 1.0, 0}};
    std::vector<PanelTrace> done;
    while (!todo.empty()) {
        const Piece p = todo.back();
        todo.pop_back();
        PanelTrace pt;
        const bool ok = curvedTrace(t, edge, z, p.t0, p.t1, opt, tolPhi, tolE, pt);
        if (ok || p.depth >= opt.maxCurvedSplits) {
            farRule(pt);
            pt.t1 = p.t1;
            done.push_back(std::move(pt));
            continue;
        }
        const double mid = 0.5 * (p.t0 + p.t1);
        // pushed in reverse so pieces come out in order along the curve
        todo.push_back({mid, p.t1, p.depth + 1});
        todo.push_back({p.t0, mid, p.depth + 1});
    }
    for (auto& pt : done)
        t.panels.push_back(std::move(pt));
}

ElementTables build(const MeshElement& e, const std::vector<cplx>& pts,
                    const std::vector<double>& vals, const ElementOptions& opt, int id)
{
    if (opt.order < 0 || opt.order > 20)
        throw ValidationError("element order must be in 0..20");
    ElementTables t;
    t.id = id;
    t.element = e;
    t.N = opt.order;
    t.frame = boundingCircle(e, opt.bounding);

    std::vector<cplx> local(pts.size());
    for (size_t j = 0; j < pts.size(); ++j)
        local[j] = t.toFrame(pts[j]);
    t.a = fitMonomial2D(local, vals, t.N, opt.solver, opt.seed, &t.fit);
    t.phi = antiLaplacian(t.N, opt.base).apply(t.a);

    for (int k = 0; k < 3; ++k) {
        const ElementEdge& ed = e.edges[k];
        if (!ed.curved) {
            t.panels.push_back(straightTrace(t, k, t.toFrame(ed.a), t.toFrame(ed.b), opt));
            t.panels.back().start = ed.a;
            t.panels.back().end = ed.b;
        } else {
            std::vector<cplx> c = ed.curve.coeffs();
            c[0] -= t.frame.center;
            for (cplx& v : c)
                v /= t.frame.radius;
            const size_t first = t.panels.size();
            curvedTraces(t, k, ChebCurve(std::move(c)), opt);
            for (size_t j = first; j < t.panels.size(); ++j) {
                PanelTrace& pt = t.panels[j];
                pt.start = j == first ? ed.a : t.panels[j - 1].end;
                pt.end = j + 1 == t.panels.size() ? ed.b : ed.curve(pt.t1);
            }
        }
    }
    long double m = 0.0L;
    for (const auto& pt : t.panels)
        for (double s : pt.farSigma)
            m += s;
    t.mass = double(m);
    return t;
}

} // namespace

int ElementTables::farSourceCount() const
{
    int n = 0;
    for (const auto& p : panels)
        n += int(p.farZ.size());
    return n;
}

std::vector<cplx> elementSamplePoints(const MeshElement& e, int N)
{
    const TriNodeSet& ns = triNodes(N);
    const SimplexMap map = elementMap(e);
    std::vector<cplx> pts;
    pts.reserve(ns.nodes.size());
    for (const auto& nd : ns.nodes) {
        double jac;
        pts.push_back(map(nd[0], nd[1], jac));
    }
    return pts;
}

ElementTables precomputeElement(const MeshElement& e, const Density& f, const ElementOptions& opt,
                                int id)
{
    const std::vector<cplx> pts = elementSamplePoints(e, opt.order);
    std::vector<double> vals(pts.size());
    for (size_t j = 0; j < pts.size(); ++j)
        vals[j] = f(pts[j]);
    return build(e, pts, vals, opt, id);
}

ElementTables precomputeElement(const MeshElement& e, const std::vector<double>& samples,
                                const ElementOptions& opt, int id)
{
    const std::vector<cplx> pts = elementSamplePoints(e, opt.order);
    if (samples.size() != pts.size())
        throw ValidationError("element " + std::to_string(id) + ": expected " +
                              std::to_string(pts.size()) + " density samples, got " +
                              std::to_string(samples.size()));
    return build(e, pts, samples, opt, id);
}

namespace {

PotentialResult evaluate(const ElementTables& t, cplx x, int forced)
{
    const cplx xs = t.toFrame(x);
    long double single = 0.0L, dbl = 0.0L;
    cplx windSum = 0.0;
    bool anyClose = false;
    std::vector<cplx> p, q;

    for (const PanelTrace& pt : t.panels) {
        const Panel& P = pt.panel;
        const bool close =
            forced == 1 || (forced < 0 && std::abs(xs - P.zone.center) <= kCloseFactor * P.zone.radius);
        if (!close) {
            double s = 0.0, d = 0.0;
            for (size_t j = 0; j < pt.farZ.size(); ++j) {
                const cplx r = pt.farZ[j] - xs;
                s += pt.farSigma[j] * std::log(std::norm(r));
                d += pt.farPhi[j] * (pt.farDz[j] / r).imag();
            }
            single += 0.5 * s;
            dbl += d;
            windSum += cplx(0.0, subtendedAngle(P.toLocal(xs)));
            continue;
        }
        anyClose = true;
        const int K = pt.K;
        p.resize(K + 2);
        q.resize(K + 1);
        // offsets from the panel ends taken in physical coordinates, so a
        // target next to a vertex keeps its relative position
        const cplx scale = t.frame.radius * P.half;
        const cplx ua = (x - pt.start) / scale, ub = (x - pt.end) / scale;
        const cplx xl = std::abs(ua) <= std::abs(ub) ? ua - 1.0 : ub + 1.0;
        if (!P.curved) {
            cauchyStraight(xl, ua, ub, K, p.data(), q.data());
        } else {
            CurveSide side = CurveSide::Interior;
            if (curvedPanelSideMatters(P, xl)) {
                double dist;
                side = curvedPanelSide(P, xl, &dist);
                if (dist <= 1e-14)
                    throw ValidationError("on-boundary target: point lies on a curved side");
            }
            cauchyCurved(P, xl, ua, ub, K, side, p.data(), q.data());
        }
        cplx dsum = 0.0, ssum = 0.0;
        double mk = 0.0;
        const double logHalf = std::log(std::abs(P.half));
        for (int k = 0; k <= K; ++k) {
            dsum += pt.c[k] * p[k];
            mk = (k & 1) ? 0.0 : 2.0 / (k + 1);
            ssum += pt.e[k] * (q[k] + logHalf * mk);
        }
        // Re[(1/i) sum] = Im[sum]
        dbl += dsum.imag();
        single += ssum.real();
        windSum += p[0];
    }
    const bool inside = windingIndicator(windSum);
    double V = double(single - dbl) / (2.0 * kPi);
    if (inside)
        V += evalMonomial2D(t.phi, t.N + 2, xs);
    const double R = t.frame.radius;
    PotentialResult res;
    res.value = R * R * (std::log(R) / (2.0 * kPi) * t.mass + V);
    res.inside = inside;
    res.path = anyClose ? PathUsed::Close : PathUsed::Far;
    return res;
}

} // namespace

PotentialResult evaluateElement(const ElementTables& t, cplx x)
{
    return evaluate(t, x, -1);
}

PotentialResult evaluateElement(const ElementTables& t, cplx x, PathUsed forced)
{
    return evaluate(t, x, forced == PathUsed::Close ? 1 : 0);
}

std::vector<FarFieldSource> elementFarSources(const ElementTables& t)
{
    const double R = t.frame.radius, R2 = R * R;
    std::vector<FarFieldSource> out;
    out.reserve(t.farSourceCount());
    for (const PanelTrace& pt : t.panels) {
        const int n = int(pt.farZ.size());
        for (int j = 0; j < n; ++j) {
            FarFieldSource s;
            s.pos = t.frame.center + R * pt.farZ[j];
            s.charge = R2 * pt.farSigma[j];
            s.dipole = cplx(0.0, -R2 * R * pt.farPhi[j]) * pt.farDz[j]; // dz scales with R
            s.owner = t.id;
            s.edgeNode = j;
            s.edgeNodes = n;
            out.push_back(s);
        }
    }
    return out;
}

double sourceKernel(const FarFieldSource& s, cplx x)
{
    const cplx r = x - s.pos;
    return (0.5 * s.charge * std::log(std::norm(r)) + (s.dipole / r).real()) / (2.0 * kPi);
}

} // namespace newtpot
