#include "newtpot/quadrule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>

namespace newtpot {

namespace {

Rule1D buildGaussLegendre(int n)
{
    Rule1D r;
    r.x.assign(n, 0.0);
    r.w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi-type starting guess, then Newton on P_n
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-17)
                break;
        }
        // one more derivative evaluation at the converged root
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) {
            p1 = x;
            p0 = 1.0;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        r.x[n / 2] = 0.0;
    return r;
}

template <class T>
const T& cached(std::map<int, std::unique_ptr<T>>& cache, std::mutex& mu, int key,
                T (*build)(int))
{
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<T>(build(key))).first;
    return *it->second;
}

TriRule buildTriRule(int n)
{
    const Rule1D& g = gaussLegendre(n);
    TriRule r;
    for (int i = 0; i < n; ++i) {
        const double v = 0.5 * (g.x[i] + 1.0);
        for (int j = 0; j < n; ++j) {
            const double u = 0.5 * (g.x[j] + 1.0);
            r.p.push_back({u * (1.0 - v), v});
            r.w.push_back(0.25 * g.w[i] * g.w[j] * (1.0 - v));
        }
    }
    return r;
}

} // namespace

const Rule1D& gaussLegendre(int n)
{
    if (n < 1 || n > 200)
        throw ValidationError("gaussLegendre: n must be in 1..200, got " + std::to_string(n));
    static std::map<int, std::unique_ptr<Rule1D>> cache;
    static std::mutex mu;
    return cached(cache, mu, n, &buildGaussLegendre);
}

const TriRule& triQuadrature(int n)
{
    if (n < 1 || n > 200)
        throw ValidationError("triQuadrature: n must be in 1..200");
    static std::map<int, std::unique_ptr<TriRule>> cache;
    static std::mutex mu;
    return cached(cache, mu, n, &buildTriRule);
}

SimplexMap affineSimplexMap(cplx a, cplx b, cplx c)
{
    const cplx e1 = b - a, e2 = c - a;
    const double det = std::abs(e1.real() * e2.imag() - e1.imag() * e2.real());
    return [=](double xi, double eta, double& jac) {
        jac = det;
        return a + xi * e1 + eta * e2;
    };
}

namespace {

struct SubTri {
    std::array<double, 2> v[3]; // reference-simplex coordinates
    int depth;
    double value;  // children sum
    double child[4];
    double err;
    bool operator<(const SubTri& o) const { return err < o.err; }
};

class Integrator {
public:
    Integrator(const std::function<double(cplx)>& f, const SimplexMap& map,
               const AdaptiveOptions& opt)
        : f_(f), map_(map), opt_(opt), rule_(triQuadrature(opt.baseRule))
    {
    }

    double apply(const std::array<double, 2> (&v)[3])
    {
        const double e1x = v[1][0] - v[0][0], e1y = v[1][1] - v[0][1];
        const double e2x = v[2][0] - v[0][0], e2y = v[2][1] - v[0][1];
        const double det = std::abs(e1x * e2y - e1y * e2x);
        long double s = 0.0L;
        for (size_t q = 0; q < rule_.w.size(); ++q) {
            const double xi = v[0][0] + rule_.p[q][0] * e1x + rule_.p[q][1] * e2x;
            const double eta = v[0][1] + rule_.p[q][0] * e1y + rule_.p[q][1] * e2y;
            double jac = 0.0;
            const cplx z = map_(xi, eta, jac);
            s += (long double)(rule_.w[q] * jac * f_(z));
        }
        evaluations_ += long(rule_.w.size());
        return double(s) * det;
    }

    static void split(const std::array<double, 2> (&v)[3], std::array<double, 2> (&c)[4][3])
    {
        auto mid = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
            return std::array<double, 2>{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
        };
        const auto m01 = mid(v[0], v[1]), m12 = mid(v[1], v[2]), m20 = mid(v[2], v[0]);
        c[0][0] = v[0]; c[0][1] = m01; c[0][2] = m20;
        c[1][0] = m01; c[1][1] = v[1]; c[1][2] = m12;
        c[2][0] = m20; c[2][1] = m12; c[2][2] = v[2];
        c[3][0] = m12; c[3][1] = m20; c[3][2] = m01;
    }

    // physical diameter and distance to the singular point, from the vertex images
    void geometry(const std::array<double, 2> (&v)[3], double& diam, double& dist)
    {
        cplx z[3];
        for (int i = 0; i < 3; ++i) {
            double jac;
            z[i] = map_(v[i][0], v[i][1], jac);
        }
        diam = std::max({std::abs(z[0] - z[1]), std::abs(z[1] - z[2]), std::abs(z[2] - z[0])});
        dist = 0.0;
        if (opt_.hasSingularPoint) {
            const cplx c = (z[0] + z[1] + z[2]) / 3.0;
            dist = std::max(0.0, std::abs(opt_.singularPoint - c) - diam);
        }
    }

    SubTri make(const std::array<double, 2> (&v)[3], int depth, double parentValue)
    {
        SubTri t;
        for (int i = 0; i < 3; ++i)
            t.v[i] = v[i];
        t.depth = depth;
        std::array<double, 2> c[4][3];
        split(v, c);
        long double s = 0.0L;
        for (int i = 0; i < 4; ++i) {
            t.child[i] = apply(c[i]);
            s += t.child[i];
        }
        t.value = double(s);
        t.err = std::abs(t.value - parentValue);
        if (opt_.hasSingularPoint) {
            double diam, dist;
            geometry(v, diam, dist);
            // keep splitting toward the target until it is resolved relative to size
            if (dist < diam && diam > rootDiam_ * 1e-9)
                t.err = std::max(t.err, 2.0 * opt_.tol + 1e-300);
        }
        return t;
    }

    AdaptiveResult run()
    {
        std::array<double, 2> root[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
        double dist;
        geometry(root, rootDiam_, dist);
        const double whole = apply(root);
        std::priority_queue<SubTri> heap;
        heap.push(make(root, 0, whole));
        std::vector<SubTri> done;
        AdaptiveResult res;
        long double errTotal = heap.top().err;
        while (!heap.empty()) {
            if (errTotal <= opt_.tol)
                break;
            SubTri t = heap.top();
            heap.pop();
            if (t.depth >= opt_.maxDepth) {
                res.depthCapped = true;
                done.push_back(t);
                continue;
            }
            if (evaluations_ > opt_.maxEvaluations)
                throw NumericalError("adaptive triangle quadrature exceeded its evaluation budget");
            errTotal -= t.err;
            std::array<double, 2> c[4][3];
            split(t.v, c);
            for (int i = 0; i < 4; ++i) {
                SubTri s = make(c[i], t.depth + 1, t.child[i]);
                res.maxDepthReached = std::max(res.maxDepthReached, s.depth);
                errTotal += s.err;
                heap.push(s);
            }
        }
        long double v = 0.0L, e = 0.0L;
        while (!heap.empty()) {
            v += heap.top().value;
            e += heap.top().err;
            heap.pop();
        }
        for (const auto& t : done) {
            v += t.value;
            e += t.err;
        }
        res.value = double(v);
        res.errorEstimate = double(e);
        res.evaluations = evaluations_;
        return res;
    }

private:
    const std::function<double(cplx)>& f_;
    const SimplexMap& map_;
    AdaptiveOptions opt_;
    const TriRule& rule_;
    long evaluations_ = 0;
    double rootDiam_ = 1.0;
};

} // namespace

AdaptiveResult adaptiveTriangleIntegrate(const std::function<double(cplx)>& f,
                                         const SimplexMap& map, const AdaptiveOptions& opt)
{
    if (!(opt.tol > 0.0))
        throw ValidationError("adaptiveTriangleIntegrate: tol must be positive");
    Integrator in(f, map, opt);
    return in.run();
}

} // namespace newtpot
