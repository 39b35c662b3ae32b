#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "newtpot/oracle.hpp"
#include "newtpot/pipeline.hpp"
#include "oracles.hpp"

using namespace newtpot;

namespace {

PipelineOptions options(int order, const std::string& backend = "tree")
{
    PipelineOptions o;
    o.element.order = order;
    o.backend = backend;
    return o;
}

double maxDiff(const std::vector<double>& a, const std::vector<double>& b)
{
    REQUIRE(a.size() == b.size());
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

std::vector<cplx> gridTargets(int n, double lo, double hi)
{
    std::vector<cplx> t;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            t.emplace_back(lo + (hi - lo) * (i + 0.41) / n, lo + (hi - lo) * (j + 0.37) / n);
    return t;
}

} // namespace

TEST_CASE("unit density on the square matches the polygon formula")
{
    const Mesh m = twoTriangleSquareMesh();
    std::vector<cplx> targets = gridTargets(10, -0.5, 1.5);
    // on the shared diagonal and on the outer boundary
    targets.emplace_back(0.5, 0.5);
    targets.emplace_back(0.25, 0.0);
    targets.emplace_back(1.0, 1.0);
    const EvaluationResult r = evaluateMesh(m, parseDensity("const"), targets, options(8));
    const std::vector<std::complex<double>> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    double worst = 0;
    for (size_t i = 0; i < targets.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - double(oracle::polygonConstPotential(sq, targets[i]))));
    MESSAGE("worst error " << worst);
    CHECK(worst <= 1e-12);
    CHECK(r.notices.size() == 3);
    CHECK(r.fitContractViolations == 0);
    for (const Notice& n : r.notices)
        CHECK(n.target >= 100);
}

TEST_CASE("unit density on the disk matches the closed form")
{
    const Mesh m = diskSectorMesh(4);
    std::vector<cplx> targets = {0.0, cplx(2, 0)};
    XorShift64 rng(21);
    for (int i = 0; i < 60; ++i)
        targets.push_back(std::polar(rng.uniform(0.02, 3.0), rng.uniform(0.1, 6.2)));
    const EvaluationResult r = evaluateMesh(m, parseDensity("const"), targets, options(8));
    CHECK(std::abs(r.values[0] + 0.25) <= 1e-12);
    CHECK(std::abs(r.values[1] - std::log(2.0) / 2) <= 1e-12);
    double worst = 0;
    for (size_t i = 0; i < targets.size(); ++i) {
        const double rr = std::abs(targets[i]);
        const double want = rr < 1 ? (rr * rr - 1) / 4 : std::log(rr) / 2;
        worst = std::max(worst, std::abs(r.values[i] - want));
    }
    MESSAGE("worst error " << worst);
    CHECK(worst <= 1e-12);
    // the center lies on the boundary of all four sectors
    CHECK(r.notices.size() == 1);
}

TEST_CASE("empty target list")
{
    const EvaluationResult r =
        evaluateMesh(gridMesh(3), parseDensity("gauss"), {}, options(6));
    CHECK(r.values.empty());
    CHECK(r.timings.total == 0.0);
    CHECK(r.timings.init == 0.0);
    CHECK(r.timings.far == 0.0);
}

TEST_CASE("boundary targets without nudging")
{
    PipelineOptions o = options(6);
    o.nudgeBoundary = false;
    CHECK_THROWS_AS(evaluateMesh(gridMesh(2), parseDensity("gauss"), {cplx(0.5, 0.25)}, o), ValidationError);
    o.nudgeBoundary = true;
    const EvaluationResult r = evaluateMesh(gridMesh(2), parseDensity("gauss"), {cplx(0.5, 0.25)}, o);
    REQUIRE(r.notices.size() == 1);
    CHECK(r.notices[0].text.find("boundary") != std::string::npos);
    CHECK(r.containing[0] >= 0);
}

TEST_CASE("threads, backends and edge merging give the same values")
{
    const Mesh m = gridMesh(6, -1, 1, -1, 1);
    const DensitySource g = parseDensity("gauss");
    const std::vector<cplx> targets = gridTargets(25, -1.3, 1.3);
    PipelineOptions o = options(10);
    const EvaluationResult one = evaluateMesh(m, g, targets, o);
    o.threads = 4;
    const EvaluationResult four = evaluateMesh(m, g, targets, o);
    CHECK(one.values == four.values);
    CHECK(one.containing == four.containing);
    o.backend = "direct";
    const EvaluationResult direct = evaluateMesh(m, g, targets, o);
    CHECK(maxDiff(one.values, direct.values) <= 1e-12);
    o.mergeEdges = true;
    const EvaluationResult merged = evaluateMesh(m, g, targets, o);
    CHECK(merged.farSources < direct.farSources);
    CHECK(maxDiff(merged.values, direct.values) <= 1e-12);
    for (size_t i = 0; i < targets.size(); ++i) {
        const bool inside = std::abs(targets[i].real()) < 1 && std::abs(targets[i].imag()) < 1;
        CHECK((one.containing[i] >= 0) == inside);
    }
}

TEST_CASE("density specs")
{
    CHECK(parseDensity("gauss").func(cplx(1, 1)) == doctest::Approx(std::exp(-2.0)));
    CHECK(parseDensity("sin56").func(cplx(0.1, 0.2)) == doctest::Approx(std::sin(1.7)));
    CHECK(parseDensity("const:2.5").func(cplx(3, 4)) == 2.5);
    for (const char* bad : {"const:x", "const:1y", "cos", "samples:/nonexistent/file"})
        CHECK_THROWS_AS(parseDensity(bad), ValidationError);
}

TEST_CASE("tabulated samples give the same potential as the callable")
{
    const Mesh m = gridMesh(2);
    const int N = 7;
    const std::string path = "pipeline_samples.txt";
    {
        std::ofstream out(path);
        out << "# element node value\n";
        out.precision(17);
        for (int e = 0; e < m.size(); ++e) {
            const std::vector<cplx> pts = elementSamplePoints(m.element(e), N);
            for (size_t j = 0; j < pts.size(); ++j)
                out << e << " " << j << " " << sin56Density(pts[j]) << "\n";
        }
    }
    const std::vector<cplx> targets = gridTargets(6, -0.2, 1.2);
    const EvaluationResult a = evaluateMesh(m, parseDensity("samples:" + path), targets, options(N));
    const EvaluationResult b = evaluateMesh(m, parseDensity("sin56"), targets, options(N));
    CHECK(a.values == b.values);
    // wrong order: the file has too few values per element
    CHECK_THROWS_AS(evaluateMesh(m, parseDensity("samples:" + path), targets, options(N + 1)), ValidationError);
    {
        std::ofstream out(path);
        out << "0 0 1.0 extra\n";
    }
    CHECK_THROWS_AS(parseDensity("samples:" + path), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("mesh evaluation agrees with the adaptive quadrature reference")
{
    const Mesh m = diskSectorMesh(5, 0.8);
    const std::vector<cplx> targets = {cplx(0.1, 0.2), cplx(-0.5, 0.3), cplx(0.79, 0.05), cplx(1.5, -1)};
    const EvaluationResult r = evaluateMesh(m, parseDensity("gauss"), targets, options(16));
    for (size_t i = 0; i < targets.size(); ++i) {
        const double want = oraclePotential(m, gaussDensity, targets[i], 1e-14);
        CHECK_MESSAGE(std::abs(r.values[i] - want) <= 1e-12, "target " << targets[i]);
    }
}
