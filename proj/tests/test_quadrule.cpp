#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/Dense>
#include <cmath>

#include "newtpot/approx.hpp"
#include "newtpot/quadrule.hpp"
#include "oracles.hpp"

using namespace newtpot;

namespace {

// int over the reference simplex of xi^a eta^b = a! b! / (a + b + 2)!
double simplexMoment(int a, int b)
{
    return std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 3.0));
}

template <int N>
void compareWithBoost()
{
    using G = boost::math::quadrature::gauss<double, N>;
    const Rule1D& r = gaussLegendre(N);
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    // boost keeps the non-negative half
    for (size_t i = 0; i < x.size(); ++i) {
        const int j = N / 2 + int(i);
        CHECK(std::abs(r.x[j] - x[i]) <= 2e-16);
        CHECK(std::abs(r.w[j] - w[i]) <= 4e-16);
        CHECK(std::abs(r.x[N - 1 - j] + x[i]) <= 2e-16);
    }
}

} // namespace

TEST_CASE("Gauss-Legendre nodes and weights")
{
    compareWithBoost<7>();
    compareWithBoost<10>();
    compareWithBoost<20>();
    compareWithBoost<30>();

    for (int n : {1, 2, 5, 17, 64, 200}) {
        const Rule1D& r = gaussLegendre(n);
        REQUIRE(r.size() == n);
        CHECK(std::is_sorted(r.x.begin(), r.x.end()));
        // exact through degree 2n - 1
        for (int d = 0; d <= std::min(2 * n - 1, 60); ++d) {
            double s = 0;
            for (int i = 0; i < n; ++i)
                s += r.w[i] * std::pow(r.x[i], d);
            const double exact = (d % 2) ? 0.0 : 2.0 / (d + 1);
            CHECK(std::abs(s - exact) <= 1e-14);
        }
    }
    CHECK_THROWS_AS(gaussLegendre(0), ValidationError);
    CHECK_THROWS_AS(gaussLegendre(201), ValidationError);
}

TEST_CASE("triangle node sets")
{
    for (int N = 0; N <= 20; ++N) {
        const TriNodeSet& s = triNodes(N);
        REQUIRE(int(s.nodes.size()) == (N + 1) * (N + 2) / 2);
        for (const auto& p : s.nodes) {
            CHECK(p[0] > 0.0);
            CHECK(p[1] > 0.0);
            CHECK(p[0] + p[1] < 1.0);
        }
        // unisolvent and well spread: the orthonormal-basis matrix is well
        // conditioned (its basis is checked in test_approx)
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(koornwinderVandermonde(s.nodes, N));
        CHECK(svd.singularValues().maxCoeff() / svd.singularValues().minCoeff() < 1e4);

        // a declared quadrature degree means some weights integrate every
        // monomial of that degree; check by least squares against the moments
        if (s.quadratureDegree > 0) {
            const int D = s.quadratureDegree;
            const int rows = (D + 1) * (D + 2) / 2;
            Eigen::MatrixXd A(rows, s.nodes.size());
            Eigen::VectorXd b(rows);
            int r = 0;
            for (int m = 0; m <= D; ++m)
                for (int n = 0; n <= m; ++n, ++r) {
                    for (size_t j = 0; j < s.nodes.size(); ++j)
                        A(r, j) = std::pow(s.nodes[j][0], m - n) * std::pow(s.nodes[j][1], n);
                    b(r) = simplexMoment(m - n, n);
                }
            const Eigen::VectorXd w = A.completeOrthogonalDecomposition().solve(b);
            CHECK((A * w - b).norm() <= 1e-12);
        }
    }
    CHECK_THROWS_AS(triNodes(21), ValidationError);
    CHECK_THROWS_AS(triNodes(-1), ValidationError);
}

TEST_CASE("computed node family matches the shipped tables")
{
    // the tables in data/ are what gen_nodes writes
    for (int N : {0, 3, 7}) {
        const TriNodeSet a = computeFallbackTriNodes(N);
        const TriNodeSet& b = triNodes(N);
        REQUIRE(a.nodes.size() == b.nodes.size());
        for (size_t i = 0; i < a.nodes.size(); ++i) {
            CHECK(std::abs(a.nodes[i][0] - b.nodes[i][0]) <= 1e-15);
            CHECK(std::abs(a.nodes[i][1] - b.nodes[i][1]) <= 1e-15);
        }
    }
}

TEST_CASE("collapsed Gauss rule on the simplex")
{
    for (int n : {1, 3, 8, 12}) {
        const TriRule& r = triQuadrature(n);
        for (int d = 0; d <= 2 * n - 2; ++d)
            for (int b = 0; b <= d; ++b) {
                double s = 0;
                for (size_t i = 0; i < r.w.size(); ++i)
                    s += r.w[i] * std::pow(r.p[i][0], d - b) * std::pow(r.p[i][1], b);
                CHECK(std::abs(s - simplexMoment(d - b, b)) <= 1e-15);
            }
    }
}

TEST_CASE("adaptive triangle integration")
{
    // smooth: int_T e^(xi + eta) = 1
    const SimplexMap ref = affineSimplexMap(0.0, 1.0, cplx(0, 1));
    const AdaptiveResult r = adaptiveTriangleIntegrate(
        [](cplx z) { return std::exp(z.real() + z.imag()); }, ref);
    CHECK(std::abs(r.value - 1.0) <= 1e-14);

    // log-singular, compared with the edge-by-edge closed form
    const std::vector<cplx> tri = {cplx(0.2, -0.1), cplx(1.3, 0.4), cplx(0.1, 0.9)};
    const SimplexMap map = affineSimplexMap(tri[0], tri[1], tri[2]);
    for (cplx x : {cplx(0.5, 0.3), cplx(0.2, -0.1), cplx(0.75, 0.15), cplx(2.0, 2.0),
                   cplx(0.75, 0.15 - 1e-7)}) {
        AdaptiveOptions o;
        o.tol = 1e-15;
        o.hasSingularPoint = true;
        o.singularPoint = x;
        const AdaptiveResult a = adaptiveTriangleIntegrate(
            [x](cplx y) {
                const double r2 = std::norm(y - x);
                return r2 > 0 ? std::log(r2) / (4 * kPi) : 0.0;
            },
            map, o);
        const double exact = double(oracle::polygonConstPotential(tri, x));
        CHECK_MESSAGE(std::abs(a.value - exact) <= 1e-14, "x = " << x);
    }
}
