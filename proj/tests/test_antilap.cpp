#include <doctest.h>

#include <cmath>

#include "newtpot/antilap.hpp"
#include "newtpot/approx.hpp"

using namespace newtpot;

namespace {

// Laplacian of sum c[monoIndex(m, n)] x^(m-n) y^n, term by term, kept at degree N.
std::vector<double> termwiseLaplacian(const std::vector<double>& c, int N)
{
    std::vector<double> out(c.size(), 0.0);
    for (int m = 0; m <= N; ++m)
        for (int n = 0; n <= m; ++n) {
            const double v = c[monoIndex(m, n)];
            const int p = m - n, q = n;
            if (p >= 2)
                out[monoIndex(m - 2, n)] += p * (p - 1) * v;
            if (q >= 2)
                out[monoIndex(m - 2, n - 2)] += q * (q - 1) * v;
        }
    return out;
}

std::vector<double> randomExpansion(int N, std::uint64_t seed)
{
    XorShift64 rng(seed);
    std::vector<double> a(monoCount(N));
    for (double& v : a)
        v = rng.uniform(-1, 1);
    return a;
}

} // namespace

TEST_CASE("low-order particular solutions")
{
    for (BaseConvention conv : {BaseConvention::XFirst, BaseConvention::YFirst}) {
        const AntiLaplacian& A = antiLaplacian(2, conv);
        std::vector<double> one(monoCount(2), 0.0);
        one[0] = 1;
        const std::vector<double> phi = A.apply(one);
        REQUIRE(phi.size() == size_t(monoCount(4)));
        CHECK(phi[conv == BaseConvention::XFirst ? monoIndex(2, 0) : monoIndex(2, 2)] == 0.5);
        const std::vector<double> zero = A.apply(std::vector<double>(monoCount(2), 0.0));
        for (double v : zero)
            CHECK(v == 0.0);
    }
    // x -> x^3 / 6
    std::vector<double> x(monoCount(1), 0.0);
    x[monoIndex(1, 0)] = 1;
    const std::vector<double> px = antiLaplacian(1).apply(x);
    for (size_t k = 0; k < px.size(); ++k)
        CHECK(px[k] == doctest::Approx(k == size_t(monoIndex(3, 0)) ? 1.0 / 6 : 0.0));
    // x^2 y^2 -> x^4 y^2 / 12 - x^6 / 180
    std::vector<double> e(monoCount(4), 0.0);
    e[monoIndex(4, 2)] = 1;
    const std::vector<double> pe = antiLaplacian(4).apply(e);
    for (size_t k = 0; k < pe.size(); ++k) {
        double want = 0;
        if (k == size_t(monoIndex(6, 2)))
            want = 1.0 / 12;
        if (k == size_t(monoIndex(6, 0)))
            want = -1.0 / 180;
        CHECK(std::abs(pe[k] - want) <= 1e-16);
    }
}

TEST_CASE("Laplacian inverts the map")
{
    for (BaseConvention conv : {BaseConvention::XFirst, BaseConvention::YFirst})
        for (int N : {0, 1, 2, 4, 8, 12, 16, 20}) {
            const std::vector<double> a = randomExpansion(N, 100 + N);
            const std::vector<double> phi = antiLaplacian(N, conv).apply(a);
            const std::vector<double> back = termwiseLaplacian(phi, N + 2);
            double amax = 0, err = 0;
            for (int k = 0; k < monoCount(N); ++k) {
                amax = std::max(amax, std::abs(a[k]));
                err = std::max(err, std::abs(back[k] - a[k]));
            }
            for (int k = monoCount(N); k < monoCount(N + 2); ++k)
                err = std::max(err, std::abs(back[k]));
            CHECK_MESSAGE(err <= 1e-12 * amax, "N = " << N);
            // the library's Laplacian agrees with the term-by-term one
            const std::vector<double> lib = laplacianOf(phi, N + 2);
            for (int k = 0; k < monoCount(N); ++k)
                CHECK(std::abs(lib[k] - back[k]) <= 1e-13 * amax);
        }
}

TEST_CASE("the two base conventions differ by a harmonic polynomial")
{
    const int N = 10;
    const std::vector<double> a = randomExpansion(N, 7);
    const std::vector<double> px = antiLaplacian(N, BaseConvention::XFirst).apply(a);
    const std::vector<double> py = antiLaplacian(N, BaseConvention::YFirst).apply(a);
    std::vector<double> d(px.size());
    double dmax = 0;
    for (size_t k = 0; k < d.size(); ++k) {
        d[k] = px[k] - py[k];
        dmax = std::max(dmax, std::abs(d[k]));
    }
    CHECK(dmax > 1e-3);
    for (double v : termwiseLaplacian(d, N + 2))
        CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("linearity and sparsity")
{
    const int N = 12;
    const AntiLaplacian& A = antiLaplacian(N);
    const std::vector<double> a = randomExpansion(N, 1), b = randomExpansion(N, 2);
    std::vector<double> c(a.size());
    for (size_t k = 0; k < a.size(); ++k)
        c[k] = 2.5 * a[k] - 0.75 * b[k];
    const std::vector<double> pa = A.apply(a), pb = A.apply(b), pc = A.apply(c);
    for (size_t k = 0; k < pc.size(); ++k)
        CHECK(std::abs(pc[k] - (2.5 * pa[k] - 0.75 * pb[k])) <= 1e-14);
    CHECK_THROWS_AS(antiLaplacian(-1), ValidationError);
}

TEST_CASE("nonzero count follows the shorter recurrence chain")
{
    // x^p y^q expands into floor(min(p, q) / 2) + 1 monomials
    for (int N : {0, 3, 8, 16, 20}) {
        long expect = 0;
        for (int m = 0; m <= N; ++m)
            for (int n = 0; n <= m; ++n)
                expect += std::min(m - n, n) / 2 + 1;
        CHECK(antiLaplacian(N).nonzeros() == expect);
    }
}

// The chain length grows with the degree, so the count is cubic in N for
// large N; this records how far the quadratic growth target is from it.
TEST_CASE("nonzero count at most 4.5x per doubling of the order" * doctest::may_fail())
{
    for (int n : {4, 8, 10}) {
        const double ratio = double(antiLaplacian(2 * n).nonzeros()) / antiLaplacian(n).nonzeros();
        CHECK_MESSAGE(ratio <= 4.5, "N = " << n << " ratio " << ratio);
    }
}
