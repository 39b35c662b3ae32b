#include "newtpot/geom.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace newtpot {

ChebCurve::ChebCurve(std::vector<cplx> coeffs) : c_(std::move(coeffs))
{
    const int n = int(c_.size()) - 1;
    if (n < 0)
        return;
    // derivative in s = 2t - 1, then the factor 2 from ds/dt
    std::vector<cplx> d(std::max(n, 1), 0.0);
    if (n >= 1) {
        std::vector<cplx> dd(n + 2, 0.0);
        for (int k = n; k >= 1; --k)
            dd[k - 1] = dd[k + 1] + 2.0 * double(k) * c_[k];
        dd[0] *= 0.5;
        for (int k = 0; k < n; ++k)
            d[k] = 2.0 * dd[k];
    }
    d_ = std::move(d);
}

namespace {

cplx clenshaw(const std::vector<cplx>& c, double s)
{
    cplx b1 = 0.0, b2 = 0.0;
    for (size_t k = c.size(); k-- > 1;) {
        const cplx b0 = 2.0 * s * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return s * b1 - b2 + (c.empty() ? cplx(0.0) : c[0]);
}

} // namespace

ChebCurve ChebCurve::fit(const std::function<cplx(double)>& f, int degree)
{
    if (degree < 1)
        throw ValidationError("ChebCurve::fit: degree must be positive");
    // Chebyshev-Lobatto points include both endpoints exactly
    const int n = degree;
    std::vector<cplx> fv(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double s = std::cos(kPi * j / n);
        fv[j] = f(0.5 * (s + 1.0));
    }
    fv[0] = f(1.0);
    fv[n] = f(0.0);
    std::vector<cplx> c(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        cplx s = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            s += w * fv[j] * std::cos(kPi * double(j) * k / n);
        }
        c[k] = (2.0 / n) * s;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    return ChebCurve(std::move(c));
}

ChebCurve ChebCurve::arc(cplx center, double r, double th0, double th1, int degree)
{
    return fit([=](double t) { return center + std::polar(r, th0 + t * (th1 - th0)); }, degree);
}

cplx ChebCurve::operator()(double t) const
{
    return clenshaw(c_, 2.0 * t - 1.0);
}

cplx ChebCurve::derivative(double t) const
{
    return clenshaw(d_, 2.0 * t - 1.0);
}

ChebCurve ChebCurve::reversed() const
{
    std::vector<cplx> c = c_;
    for (size_t k = 1; k < c.size(); k += 2)
        c[k] = -c[k];
    return ChebCurve(std::move(c));
}

double MeshElement::area() const
{
    double s = 0.0;
    for (const auto& e : edges) {
        if (!e.curved) {
            s += 0.5 * (std::conj(e.a) * e.b).imag();
        } else {
            const Rule1D& g = gaussLegendre(32);
            for (int j = 0; j < g.size(); ++j) {
                const double t = 0.5 * (g.x[j] + 1.0);
                s += 0.25 * g.w[j] * (std::conj(e.curve(t)) * e.curve.derivative(t)).imag();
            }
        }
    }
    return s;
}

namespace {

double elementScale(const MeshElement& e)
{
    return std::max({std::abs(e.edges[0].a - e.edges[1].a), std::abs(e.edges[1].a - e.edges[2].a),
                     std::abs(e.edges[2].a - e.edges[0].a)});
}

} // namespace

void validateElement(const MeshElement& e)
{
    const double scale = elementScale(e);
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ValidationError("element has coincident or non-finite vertices");
    for (int i = 0; i < 3; ++i)
        if (std::abs(e.edges[i].b - e.edges[(i + 1) % 3].a) > 1e-12 * scale)
            throw ValidationError("element sides do not form a closed loop");
    for (int i = 1; i < 3; ++i)
        if (e.edges[i].curved)
            throw ValidationError("element has more than one curved side, or the curved side is not first");
    const cplx u = e.edges[0].b - e.edges[0].a, v = e.edges[2].a - e.edges[0].a;
    const double cross = (std::conj(u) * v).imag();
    if (std::abs(cross) <= 1e-12 * scale * scale)
        throw ValidationError("element vertices are collinear");
    if (e.area() <= 0.0)
        throw ValidationError("element is clockwise or degenerate");
    if (e.curved()) {
        const ElementEdge& c = e.edges[0];
        const double chord = std::abs(c.b - c.a);
        if (std::abs(c.curve(0.0) - c.a) > 1e-12 * scale || std::abs(c.curve(1.0) - c.b) > 1e-12 * scale)
            throw ValidationError("curved side endpoints do not match its vertices");
        const cplx dir = (c.b - c.a) / chord;
        double lo = 0.0, hi = 0.0;
        for (int j = 1; j < 64; ++j) {
            const double d = (std::conj(dir) * (c.curve(j / 64.0) - c.a)).imag();
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        if (std::max(-lo, hi) > 0.5 * chord)
            throw ValidationError("curved side deviates from its chord by more than half the chord length");
        if (lo < -1e-12 * chord && hi > 1e-12 * chord)
            throw ValidationError("curved side crosses its chord");
    }
}

MeshElement makeTriangle(cplx a, cplx b, cplx c)
{
    MeshElement e;
    e.edges[0] = {a, b, false, {}};
    e.edges[1] = {b, c, false, {}};
    e.edges[2] = {c, a, false, {}};
    validateElement(e);
    return e;
}

MeshElement makeCurvedElement(const ChebCurve& curve, cplx o)
{
    MeshElement e;
    const cplx a = curve(0.0), b = curve(1.0);
    e.edges[0] = {a, b, true, curve};
    e.edges[1] = {b, o, false, {}};
    e.edges[2] = {o, a, false, {}};
    validateElement(e);
    return e;
}

Circle minimalEnclosingCircle(std::vector<cplx> pts)
{
    if (pts.empty())
        throw ValidationError("minimalEnclosingCircle: no points");
    XorShift64 rng(0xC1C1Eull);
    for (size_t i = pts.size(); i > 1; --i)
        std::swap(pts[i - 1], pts[rng.next() % i]);
    auto inside = [](const Circle& c, cplx p) {
        return std::abs(p - c.center) <= c.radius * (1.0 + 1e-14) + 1e-300;
    };
    auto two = [](cplx a, cplx b) { return Circle{0.5 * (a + b), 0.5 * std::abs(a - b)}; };
    auto three = [&](cplx a, cplx b, cplx c) {
        const cplx ab = b - a, ac = c - a;
        const double d = 2.0 * (std::conj(ab) * ac).imag();
        if (std::abs(d) < 1e-300) {
            Circle best = two(a, b);
            for (const Circle& k : {two(a, c), two(b, c)})
                if (k.radius > best.radius)
                    best = k;
            return best;
        }
        const double nab = std::norm(ab), nac = std::norm(ac);
        const cplx cc = cplx(ac.imag() * nab - ab.imag() * nac, ab.real() * nac - ac.real() * nab) / d;
        return Circle{a + cc, std::abs(cc)};
    };
    Circle c{pts[0], 0.0};
    for (size_t i = 1; i < pts.size(); ++i) {
        if (inside(c, pts[i]))
            continue;
        c = Circle{pts[i], 0.0};
        for (size_t j = 0; j < i; ++j) {
            if (inside(c, pts[j]))
                continue;
            c = two(pts[i], pts[j]);
            for (size_t k = 0; k < j; ++k)
                if (!inside(c, pts[k]))
                    c = three(pts[i], pts[j], pts[k]);
        }
    }
    return c;
}

Circle boundingCircle(const MeshElement& e, BoundingRule rule)
{
    const cplx u = e.edges[0].b - e.edges[0].a, v = e.edges[2].a - e.edges[0].a;
    const double scale = elementScale(e);
    if (std::abs((std::conj(u) * v).imag()) <= 1e-12 * scale * scale)
        throw ValidationError("boundingCircle: element vertices are collinear");
    std::vector<cplx> pts = {e.edges[0].a, e.edges[1].a, e.edges[2].a};
    for (const auto& ed : e.edges)
        if (ed.curved)
            for (int j = 0; j <= 32; ++j)
                pts.push_back(ed.curve(j / 32.0));
    if (rule == BoundingRule::Minimal)
        return minimalEnclosingCircle(pts);
    Circle c{e.centroid(), 0.0};
    for (cplx p : pts)
        c.radius = std::max(c.radius, std::abs(p - c.center));
    return c;
}

cplx blendingMap(double xi, double eta, const ChebCurve& curve, cplx o)
{
    if (!(xi >= -1e-14 && eta >= -1e-14 && xi + eta <= 1 + 1e-14))
        throw ValidationError("blendingMap: point outside the reference simplex");
    const cplx P = curve(1.0), Q = curve(0.0);
    const double lin = 1.0 - xi - eta;
    cplx z = lin * P + xi * Q + eta * o;
    const double om = 1.0 - xi;
    if (om < 1e-14)
        return z; // the correction vanishes in the limit
    const cplx g = curve(om) - om * P - xi * Q;
    return z + (lin / om) * g;
}

SimplexMap elementMap(const MeshElement& e)
{
    if (!e.curved())
        return affineSimplexMap(e.edges[0].a, e.edges[0].b, e.edges[1].b);
    // blending form with curve(1) at (0,0): use the counterclockwise side reversed
    const ChebCurve g = e.edges[0].curve.reversed();
    const cplx o = e.edges[1].b;
    return [g, o](double xi, double eta, double& jac) {
        const cplx P = g(1.0), Q = g(0.0);
        const double lin = 1.0 - xi - eta, om = 1.0 - xi;
        cplx z = lin * P + xi * Q + eta * o;
        cplx zx = Q - P, ze = o - P;
        if (om >= 1e-14) {
            const cplx gv = g(om) - om * P - xi * Q;
            const cplx gd = -g.derivative(om) + P - Q;
            const double s = lin / om;
            z += s * gv;
            zx += (-eta / (om * om)) * gv + s * gd;
            ze += (-1.0 / om) * gv;
        }
        jac = std::abs((std::conj(zx) * ze).imag());
        return z;
    };
}

MeshElement Mesh::element(int i) const
{
    if (i < 0 || i >= size())
        throw ValidationError("mesh element index out of range");
    MeshElement e;
    int curvedAt = -1;
    for (int k = 0; k < 3; ++k) {
        const EdgeRef r = triangles[i][k];
        const MeshEdge& me = edges[r.edge];
        ElementEdge ee;
        ee.a = vertices[r.reversed ? me.v1 : me.v0];
        ee.b = vertices[r.reversed ? me.v0 : me.v1];
        ee.curved = me.curved;
        if (me.curved) {
            ee.curve = r.reversed ? me.curve.reversed() : me.curve;
            if (curvedAt >= 0)
                throw ValidationError("triangle " + std::to_string(i) + " has more than one curved side");
            curvedAt = k;
        }
        e.edges[k] = ee;
    }
    if (curvedAt > 0)
        std::rotate(e.edges.begin(), e.edges.begin() + curvedAt, e.edges.end());
    try {
        validateElement(e);
    } catch (const ValidationError& err) {
        throw ValidationError("triangle " + std::to_string(i) + ": " + err.what());
    }
    return e;
}

std::vector<MeshElement> Mesh::elements() const
{
    std::vector<MeshElement> out;
    out.reserve(triangles.size());
    for (int i = 0; i < size(); ++i)
        out.push_back(element(i));
    return out;
}

void validateMesh(const Mesh& m)
{
    const int nv = int(m.vertices.size()), ne = int(m.edges.size());
    for (cplx v : m.vertices)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ValidationError("mesh has a non-finite vertex");
    for (int i = 0; i < ne; ++i) {
        const MeshEdge& e = m.edges[i];
        if (e.v0 < 0 || e.v0 >= nv || e.v1 < 0 || e.v1 >= nv || e.v0 == e.v1)
            throw ValidationError("edge " + std::to_string(i) + " has invalid vertex indices");
        if (e.curved && e.curve.empty())
            throw ValidationError("curved edge " + std::to_string(i) + " has no curve coefficients");
        if (e.hint >= nv)
            throw ValidationError("edge " + std::to_string(i) + " has an invalid opposite-vertex hint");
    }
    std::vector<int> uses(ne, 0);
    for (int t = 0; t < m.size(); ++t)
        for (const EdgeRef& r : m.triangles[t]) {
            if (r.edge < 0 || r.edge >= ne)
                throw ValidationError("triangle " + std::to_string(t) + " references a missing edge");
            if (++uses[r.edge] > 2)
                throw ValidationError("edge " + std::to_string(r.edge) + " is shared by more than two triangles");
        }
    for (int t = 0; t < m.size(); ++t)
        (void)m.element(t);
}

namespace {

struct MeshBuilder {
    Mesh m;
    std::map<std::pair<int, int>, int> lookup;

    int vertex(cplx p)
    {
        m.vertices.push_back(p);
        return int(m.vertices.size()) - 1;
    }
    EdgeRef edge(int u, int v)
    {
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        auto it = lookup.find(key);
        if (it != lookup.end())
            return EdgeRef{it->second, m.edges[it->second].v0 != u};
        MeshEdge e;
        e.v0 = u;
        e.v1 = v;
        m.edges.push_back(e);
        lookup[key] = int(m.edges.size()) - 1;
        return EdgeRef{int(m.edges.size()) - 1, false};
    }
    EdgeRef curvedEdge(int u, int v, const ChebCurve& c)
    {
        EdgeRef r = edge(u, v);
        m.edges[r.edge].curved = true;
        m.edges[r.edge].curve = c;
        return r;
    }
    void tri(int a, int b, int c) { m.triangles.push_back({edge(a, b), edge(b, c), edge(c, a)}); }
};

} // namespace

Mesh standardSimplexMesh()
{
    MeshBuilder b;
    const int v0 = b.vertex({0.0, 0.0}), v1 = b.vertex({1.0, 0.0}), v2 = b.vertex({0.0, 1.0});
    b.tri(v0, v1, v2);
    return b.m;
}

Mesh twoTriangleSquareMesh()
{
    return gridMesh(1);
}

Mesh gridMesh(int n, double x0, double x1, double y0, double y1)
{
    if (n < 1)
        throw ValidationError("gridMesh: n must be positive");
    MeshBuilder b;
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            b.vertex({x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n});
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            b.tri(id(i, j), id(i + 1, j), id(i + 1, j + 1));
            b.tri(id(i, j), id(i + 1, j + 1), id(i, j + 1));
        }
    return b.m;
}

Mesh diskSectorMesh(int sectors, double radius)
{
    if (sectors < 3)
        throw ValidationError("diskSectorMesh: need at least 3 sectors");
    MeshBuilder b;
    const int c = b.vertex({0.0, 0.0});
    std::vector<int> rim;
    for (int k = 0; k < sectors; ++k)
        rim.push_back(b.vertex(std::polar(radius, 2.0 * kPi * k / sectors)));
    for (int k = 0; k < sectors; ++k) {
        const int p = rim[k], q = rim[(k + 1) % sectors];
        const double th0 = 2.0 * kPi * k / sectors, th1 = 2.0 * kPi * (k + 1) / sectors;
        const EdgeRef spoke = b.edge(c, p);
        const EdgeRef arcRef = b.curvedEdge(p, q, ChebCurve::arc({0.0, 0.0}, radius, th0, th1));
        const EdgeRef back = b.edge(q, c);
        b.m.triangles.push_back({spoke, arcRef, back});
    }
    // snap rim vertices onto the fitted curve ends so sides close exactly
    for (const MeshEdge& e : b.m.edges)
        if (e.curved) {
            b.m.vertices[e.v0] = e.curve(0.0);
            b.m.vertices[e.v1] = e.curve(1.0);
        }
    return b.m;
}

Mesh quarterDiskMesh(double radius)
{
    MeshBuilder b;
    const int o = b.vertex({0.0, 0.0}), a = b.vertex({radius, 0.0}), c = b.vertex({0.0, radius});
    const EdgeRef e0 = b.edge(o, a);
    const ChebCurve arc = ChebCurve::arc({0.0, 0.0}, radius, 0.0, kPi / 2.0);
    const EdgeRef e1 = b.curvedEdge(a, c, arc);
    const EdgeRef e2 = b.edge(c, o);
    b.m.vertices[a] = arc(0.0);
    b.m.vertices[c] = arc(1.0);
    b.m.triangles.push_back({e0, e1, e2});
    return b.m;
}

} // namespace newtpot
