// Reference computations used only by the tests. Nothing here calls into the
// library's numerical kernels.
#ifndef NEWTPOT_TESTS_ORACLES_HPP
#define NEWTPOT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <vector>

namespace oracle {

using cld = std::complex<long double>;
using Vec = std::vector<cld>;

// Adaptive bisection with a 20-point Gauss-Legendre rule in long double, for
// vector-valued integrands on [a, b]. Nodes come from Newton on P_20.
struct GL20 {
    long double x[20], w[20];
    GL20()
    {
        const int n = 20;
        const long double pi = 3.141592653589793238462643383279502884L;
        for (int i = 0; i < n; ++i) {
            long double z = std::cos(pi * (i + 0.75L) / (n + 0.5L)), dp = 0;
            for (int it = 0; it < 100; ++it) {
                long double p0 = 1, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1);
                const long double dz = p1 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-19L)
                    break;
            }
            x[i] = z;
            w[i] = 2 / ((1 - z * z) * dp * dp);
        }
    }
};

inline const GL20& gl20()
{
    static const GL20 g;
    return g;
}

using VecFn = std::function<void(long double, Vec&)>;

inline Vec ruleOn(const VecFn& f, long double a, long double b, size_t n)
{
    const GL20& g = gl20();
    Vec s(n, 0.0L), v(n);
    const long double c = (a + b) / 2, h = (b - a) / 2;
    for (int i = 0; i < 20; ++i) {
        f(c + h * g.x[i], v);
        for (size_t k = 0; k < n; ++k)
            s[k] += g.w[i] * h * v[k];
    }
    return s;
}

// Global adaptive bisection: the interval whose halves disagree most with it
// is split next, until the summed disagreement is below tol or the split
// budget is spent. A budget instead of a depth limit keeps integrands whose
// rounding noise exceeds tol from refining without end.
struct Piece1D {
    long double a, b, err;
    Vec whole;
    bool operator<(const Piece1D& o) const { return err < o.err; }
};

inline long double pieceError(const Vec& l, const Vec& r, const Vec& whole)
{
    long double d = 0;
    for (size_t k = 0; k < whole.size(); ++k)
        d = std::max(d, std::abs(l[k] + r[k] - whole[k]));
    return d;
}

inline Vec adaptGlobal(const VecFn& f, std::vector<Piece1D> start, size_t n, long double tol,
                       int budget = 200000)
{
    std::priority_queue<Piece1D> heap;
    long double total = 0;
    for (Piece1D& p : start) {
        const long double m = (p.a + p.b) / 2;
        p.err = pieceError(ruleOn(f, p.a, m, n), ruleOn(f, m, p.b, n), p.whole);
        total += p.err;
        heap.push(std::move(p));
    }
    for (int it = 0; it < budget && total > tol && !heap.empty(); ++it) {
        Piece1D p = heap.top();
        heap.pop();
        total -= p.err;
        const long double m = (p.a + p.b) / 2;
        if (!(m > p.a && m < p.b)) {
            p.err = 0; // cannot split further
            heap.push(std::move(p));
            continue;
        }
        for (auto [lo, hi] : {std::pair{p.a, m}, std::pair{m, p.b}}) {
            Piece1D c{lo, hi, 0, ruleOn(f, lo, hi, n)};
            const long double mm = (lo + hi) / 2;
            c.err = pieceError(ruleOn(f, lo, mm, n), ruleOn(f, mm, hi, n), c.whole);
            total += c.err;
            heap.push(std::move(c));
        }
    }
    Vec acc(n, 0.0L);
    while (!heap.empty()) {
        for (size_t k = 0; k < n; ++k)
            acc[k] += heap.top().whole[k];
        heap.pop();
    }
    return acc;
}

// Integral over [a, b] with the listed interior break points; tol is relative
// to the largest component (absTol if that is larger). With near > 0 the
// variable is changed to s = center + near sinh(u), which spreads out a
// near-singularity at distance near from the point center.
inline Vec integrate(const VecFn& f, size_t n, long double a, long double b,
                     std::vector<long double> breaks = {}, long double tol = 1e-16L,
                     long double center = 0, long double near = 0, long double absTol = 0)
{
    VecFn g = f;
    if (near > 0) {
        g = [&f, center, near, n](long double u, Vec& v) {
            f(center + near * std::sinh(u), v);
            const long double j = near * std::cosh(u);
            for (size_t k = 0; k < n; ++k)
                v[k] *= j;
        };
        auto toU = [&](long double s) { return std::asinh((s - center) / near); };
        for (long double& x : breaks)
            x = toU(x);
        a = toU(a);
        b = toU(b);
    }
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    std::vector<Piece1D> start;
    long double scale = 1e-300L;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i]))
            continue;
        start.push_back({breaks[i], breaks[i + 1], 0, ruleOn(g, breaks[i], breaks[i + 1], n)});
        for (const cld& v : start.back().whole)
            scale = std::max(scale, std::abs(v));
    }
    return adaptGlobal(g, std::move(start), n, std::max(tol * scale, absTol));
}

// Potential (1/2pi) int log|x - y| dy of the unit density on a counterclockwise
// polygon, edge by edge from the antiderivative of log r along a line.
inline long double polygonConstPotential(const std::vector<std::complex<double>>& v,
                                         std::complex<double> x)
{
    const long double pi = 3.141592653589793238462643383279502884L;
    long double s = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        const std::complex<long double> a(v[i].real(), v[i].imag());
        const std::complex<long double> b(v[(i + 1) % v.size()].real(),
                                          v[(i + 1) % v.size()].imag());
        const std::complex<long double> X(x.real(), x.imag());
        const std::complex<long double> t = (b - a) / std::abs(b - a);
        const std::complex<long double> n(t.imag(), -t.real()); // outward
        const long double h = ((a - X) * std::conj(n)).real();
        const long double s0 = ((a - X) * std::conj(t)).real();
        const long double s1 = ((b - X) * std::conj(t)).real();
        // F(t) = int_0^t log sqrt(h^2 + u^2) du
        auto F = [h](long double u) {
            const long double r2 = h * h + u * u;
            long double v = (r2 > 0 ? u * 0.5L * std::log(r2) : 0.0L) - u;
            if (h != 0)
                v += h * std::atan(u / h);
            return v;
        };
        // div((y - x)(log r - 1/2)/2) = log r, and (y - x).n = h on the edge
        s += (h / 4) * (2 * (F(s1) - F(s0)) - (s1 - s0));
    }
    return s / (2 * pi);
}

// (1/2pi) int log|x - y| f(y) dy over a counterclockwise polygon, as a sum of
// signed fans (x, v_i, v_i+1) in polar coordinates about x. Along each ray f
// is interpolated at deg + 1 Chebyshev points in r / rho, and the radial
// moments against s and s log s come from precomputed weights, so the result
// is exact for polynomial f of total degree at most deg. Only the sweep
// along the edge is integrated adaptively.
using Density = std::function<long double(cld)>;

inline long double polygonPotential(const std::vector<std::complex<double>>& v,
                                    std::complex<double> x, const Density& f, int deg)
{
    const long double pi = 3.141592653589793238462643383279502884L;
    const cld X(x.real(), x.imag());
    const int n = deg + 1;
    std::vector<long double> sj(n), bw(n);
    for (int j = 0; j < n; ++j) {
        const long double th = pi * (2 * j + 1) / (2 * n);
        sj[j] = (1 - std::cos(th)) / 2;
        bw[j] = (j % 2 ? -1 : 1) * std::sin(th);
    }
    // w1_j = int_0^1 s l_j(s) ds and w2_j = int_0^1 s log s l_j(s) ds for the
    // barycentric Lagrange basis l_j
    const Vec mom = integrate(
        [&](long double s, Vec& out) {
            long double den = 0;
            std::vector<long double> l(n);
            int hit = -1;
            for (int j = 0; j < n; ++j) {
                if (s == sj[j])
                    hit = j;
                l[j] = bw[j] / (s - sj[j]);
                den += l[j];
            }
            for (int j = 0; j < n; ++j) {
                const long double lj = hit >= 0 ? (j == hit) : l[j] / den;
                out[j] = s * lj;
                out[n + j] = s > 0 ? s * std::log(s) * lj : 0.0L;
            }
        },
        2 * n, 0.0L, 1.0L, {}, 1e-18L);
    long double diam = 0;
    for (const auto& p : v)
        for (const auto& q : v)
            diam = std::max<long double>(diam, std::abs(p - q));
    // fans next to the target are tiny; hold them to the polygon's scale
    const long double absTol = 1e-19L * diam * diam * (1 + std::fabs(std::log(diam)));
    long double total = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        const cld a(v[i].real(), v[i].imag());
        const cld b(v[(i + 1) % v.size()].real(), v[(i + 1) % v.size()].imag());
        const cld t = b - a;
        // the fan is swept by y = a + s t; d theta = Im[t / (y - x)] ds
        auto fan = [&](long double s, Vec& out) {
            const cld w = a + s * t - X;
            const long double R = std::abs(w);
            const cld e = w / R;
            long double s1 = 0, s2 = 0;
            for (int j = 0; j < n; ++j) {
                const long double fj = f(X + R * sj[j] * e);
                s1 += mom[j].real() * fj;
                s2 += mom[n + j].real() * fj;
            }
            out[0] = (t / w).imag() * R * R * (std::log(R) * s1 + s2);
        };
        const long double L2 = std::norm(t);
        const long double s0 = std::clamp(((X - a) * std::conj(t)).real() / L2, 0.0L, 1.0L);
        const long double near = std::max(std::abs(a + s0 * t - X) / std::sqrt(L2), 1e-15L);
        total += integrate(fan, 1, 0.0L, 1.0L, {}, 1e-17L, s0, near, absTol)[0].real();
    }
    return total / (2 * pi);
}

// Potential of the unit density on a region bounded by the counterclockwise
// closed chain of parametrized pieces z(s), s in [0, 1], from the divergence
// form (1/2pi) sum int Im[conj(z - x) dz] (log|z - x| - 1/2) / 2.
struct Piece {
    std::function<cld(long double)> z, dz;
};

inline long double boundaryConstPotential(const std::vector<Piece>& pieces, std::complex<double> x)
{
    const long double pi = 3.141592653589793238462643383279502884L;
    const cld X(x.real(), x.imag());
    long double total = 0;
    for (const Piece& p : pieces) {
        // nearest point on the piece, for the change of variable
        long double best = 1e300L, s0 = 0;
        for (int i = 0; i <= 2000; ++i)
            if (std::abs(p.z(i / 2000.0L) - X) < best) {
                best = std::abs(p.z(i / 2000.0L) - X);
                s0 = i / 2000.0L;
            }
        const long double near = std::max(best / std::abs(p.dz(s0)), 1e-12L);
        auto f = [&](long double s, Vec& v) {
            const cld w = p.z(s) - X;
            const long double r = std::abs(w);
            v[0] = r > 0 ? (std::conj(w) * p.dz(s)).imag() * (std::log(r) - 0.5L) / 2 : 0.0L;
        };
        total += integrate(f, 1, 0.0L, 1.0L, {}, 1e-18L, s0, near)[0].real();
    }
    return total / (2 * pi);
}

inline Piece segmentPiece(std::complex<double> a, std::complex<double> b)
{
    const cld A(a.real(), a.imag()), B(b.real(), b.imag());
    return {[A, B](long double s) { return A + s * (B - A); }, [A, B](long double) { return B - A; }};
}

inline Piece arcPiece(std::complex<double> c, long double r, long double th0, long double th1)
{
    const cld C(c.real(), c.imag());
    return {[=](long double s) { return C + std::polar(r, th0 + (th1 - th0) * s); },
            [=](long double s) { return cld(0, th1 - th0) * std::polar(r, th0 + (th1 - th0) * s); }};
}

// Smallest circle through some 2 or 3 of the points that contains all of
// them, by exhaustive search.
struct Disk {
    std::complex<double> c;
    double r;
};

inline Disk bruteForceMEC(const std::vector<std::complex<double>>& p)
{
    Disk best{p[0], 1e300};
    auto contains = [&](const Disk& d) {
        for (const auto& q : p)
            if (std::abs(q - d.c) > d.r * (1 + 1e-12) + 1e-15)
                return false;
        return true;
    };
    const size_t n = p.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            Disk d{(p[i] + p[j]) / 2.0, std::abs(p[i] - p[j]) / 2};
            if (d.r < best.r && contains(d))
                best = d;
            for (size_t k = j + 1; k < n; ++k) {
                const std::complex<double> a = p[i], b = p[j], c = p[k];
                const double D = 2 * (a.real() * (b.imag() - c.imag()) +
                                      b.real() * (c.imag() - a.imag()) +
                                      c.real() * (a.imag() - b.imag()));
                if (std::abs(D) < 1e-14)
                    continue;
                const double A = std::norm(a), B = std::norm(b), C = std::norm(c);
                const std::complex<double> o(
                    (A * (b.imag() - c.imag()) + B * (c.imag() - a.imag()) +
                     C * (a.imag() - b.imag())) / D,
                    (A * (c.real() - b.real()) + B * (a.real() - c.real()) +
                     C * (b.real() - a.real())) / D);
                Disk e{o, std::abs(a - o)};
                if (e.r < best.r && contains(e))
                    best = e;
            }
        }
    return best;
}

// p_k and q_k along a parametrized path tau(s), s in [0,1], evaluated in long
// double, with the log kept continuous by counting crossings of the cut of
// the principal branch.
struct PathTables {
    std::vector<std::complex<double>> p, q;
};

using LPath = std::function<cld(long double)>;

inline PathTables pathOracle(const LPath& tau, const LPath& dtau, cld X, int K)
{
    const int M = 4000;
    std::vector<long double> cuts;
    std::vector<double> jumps;
    const long double pi = 3.141592653589793238462643383279502884L;
    auto w = [&](long double s) { return tau(s) - X; };
    for (int i = 0; i < M; ++i) {
        long double a = (long double)i / M, b = (long double)(i + 1) / M;
        const cld wa = w(a), wb = w(b);
        if ((wa.imag() > 0) == (wb.imag() > 0))
            continue;
        for (int it = 0; it < 80; ++it) {
            const long double m = (a + b) / 2;
            if ((w(m).imag() > 0) == (wa.imag() > 0))
                a = m;
            else
                b = m;
        }
        if (w((a + b) / 2).real() >= 0)
            continue;
        cuts.push_back((a + b) / 2);
        // upper half-plane to lower: arg falls through pi, continuity adds 2 pi
        jumps.push_back(wa.imag() > 0 ? 2 * pi : -2 * pi);
    }
    // nearest point of the path, for the change of variable
    long double best = 1e300, sNear = 0.5;
    for (int i = 0; i <= M; ++i)
        if (std::abs(w((long double)i / M)) < best) {
            best = std::abs(w((long double)i / M));
            sNear = (long double)i / M;
        }
    for (int it = 0; it < 40; ++it) {
        const long double h = 1e-9L;
        auto g = [&](long double s) { return (std::conj(w(s)) * dtau(s)).real(); };
        const long double dg = (g(sNear + h) - g(sNear - h)) / (2 * h);
        if (dg == 0)
            break;
        const long double next = std::clamp(sNear - g(sNear) / dg, 0.0L, 1.0L);
        if (std::abs(next - sNear) < 1e-19L)
            break;
        sNear = next;
    }
    const long double near = std::abs(w(sNear)) / std::abs(dtau(sNear));

    const size_t n = size_t(2 * K + 3);
    auto f = [&](long double s, Vec& v) {
        const cld T = tau(s), D = dtau(s);
        double offset = 0;
        for (size_t c = 0; c < cuts.size(); ++c)
            if (s > cuts[c])
                offset += jumps[c];
        const cld L = std::log(T - X) + cld(0, offset);
        cld tk = 1;
        for (int k = 0; k <= K + 1; ++k, tk *= T) {
            v[k] = tk / (T - X) * D;
            if (k <= K)
                v[K + 2 + k] = tk * L * D;
        }
    };
    // the integrand is only known to about 1e-19 / near relative near its peak
    const Vec r =
        integrate(f, n, 0.0L, 1.0L, cuts, 1e-16L + 1e-19L / near, sNear, near);
    PathTables out;
    for (int k = 0; k <= K + 1; ++k)
        out.p.emplace_back(double(r[k].real()), double(r[k].imag()));
    for (int k = 0; k <= K; ++k)
        out.q.emplace_back(double(r[K + 2 + k].real()), double(r[K + 2 + k].imag()));
    return out;
}

inline double tableError(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b)
{
    double d = 0, s = 0;
    for (size_t k = 0; k < a.size(); ++k) {
        d = std::max(d, std::abs(a[k] - b[k]));
        s = std::max(s, std::abs(b[k]));
    }
    return d / s;
}


} // namespace oracle

#endif
