#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "newtpot/approx.hpp"
#include "newtpot/oracle.hpp"

namespace newtpot::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        out.push_back(item);
    return out;
}

double toDouble(const std::string& s, const std::string& what)
{
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size())
            return v;
    } catch (const std::logic_error&) {
    }
    throw ValidationError(what + ": '" + s + "' is not a number");
}

int toInt(const std::string& s, const std::string& what)
{
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos == s.size())
            return v;
    } catch (const std::logic_error&) {
    }
    throw ValidationError(what + ": '" + s + "' is not an integer");
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Output files: the CSV named by --out and a JSON file next to it.
std::string jsonPath(const std::string& csv)
{
    const auto dot = csv.rfind('.');
    const auto slash = csv.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csv.substr(0, dot) + ".json";
    return csv + ".json";
}

std::string withSuffix(const std::string& csv, const std::string& suffix)
{
    const auto dot = csv.rfind('.');
    const auto slash = csv.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csv.substr(0, dot) + suffix + csv.substr(dot);
    return csv + suffix;
}

std::ofstream openOut(const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw ValidationError("cannot write output file '" + path + "'");
    return f;
}

void writeJson(const std::string& path, const json& j)
{
    std::ofstream f = openOut(path);
    f << j.dump(2) << "\n";
}

json configJson(const RunConfig& c, const std::string& command)
{
    return {{"command", command},   {"mesh", c.mesh},           {"density", c.density},
            {"order", c.order},     {"solver", c.solver},       {"backend", c.backend},
            {"targets", c.targets}, {"seed", c.seed},           {"merge_edges", c.mergeEdges},
            {"threads", c.threads}, {"with_oracle", c.withOracle}, {"orders", c.orders},
            {"element", c.element}, {"samples", c.samples},     {"hs", c.hs}};
}

ElementOptions elementOptions(const RunConfig& c)
{
    ElementOptions o;
    o.order = c.order;
    o.solver = parseSolver(c.solver);
    o.seed = c.seed;
    return o;
}

DensitySource callableDensity(const RunConfig& c, const std::string& command)
{
    DensitySource d = parseDensity(c.density);
    if (d.tabulated())
        throw ValidationError(command + " needs a density that can be evaluated anywhere "
                                        "(gauss, sin56, const), not samples");
    return d;
}

// midpoint of side k pushed out along the element's outward normal
cplx probe(const MeshElement& e, int k, double h)
{
    const ElementEdge& ed = e.edges[k];
    const cplx t = ed.tangent(0.5);
    return ed.point(0.5) - cplx(0.0, 1.0) * t / std::abs(t) * h;
}

} // namespace

void validate(const RunConfig& c)
{
    if (c.order < 0 || c.order > 20)
        throw ValidationError("--order must be in 0..20, got " + std::to_string(c.order));
    parseSolver(c.solver);
    if (c.backend != "direct" && c.backend != "tree")
        throw ValidationError("--backend must be 'direct' or 'tree', got '" + c.backend + "'");
    if (c.threads < 1 || c.threads > 256)
        throw ValidationError("--threads must be in 1..256");
    if (c.samples < 1)
        throw ValidationError("--samples must be positive");
    if (c.element < 0)
        throw ValidationError("--element must be non-negative");
    if (!(c.minSeconds > 0.0))
        throw ValidationError("--min-seconds must be positive");
    if (c.out.empty())
        throw ValidationError("--out must name a file");
}

std::string canonical(const RunConfig& c, const std::string& command)
{
    return configJson(c, command).dump();
}

std::string configHash(const RunConfig& c, const std::string& command)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canonical(c, command)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Mesh loadMesh(const std::string& spec)
{
    if (spec.rfind("builtin:", 0) != 0)
        return readMesh(spec);
    const std::string name = spec.substr(8);
    if (name == "simplex")
        return standardSimplexMesh();
    if (name == "square")
        return twoTriangleSquareMesh();
    if (name == "disk4")
        return diskSectorMesh(4, 1.0);
    if (name == "quarter")
        return quarterDiskMesh(std::sqrt(0.5 / kPi)); // same area as the simplex
    if (name.rfind("grid:", 0) == 0) {
        const int n = toInt(name.substr(5), "builtin grid size");
        if (n < 1 || n > 1000)
            throw ValidationError("builtin grid size must be in 1..1000");
        return gridMesh(n);
    }
    throw ValidationError("unknown builtin mesh '" + name +
                          "' (simplex, square, disk4, quarter, grid:n)");
}

std::vector<cplx> makeTargets(const std::string& spec, const Mesh& mesh, int order)
{
    std::vector<cplx> out;
    const std::vector<MeshElement> els = mesh.elements();
    if (spec == "none")
        return out;
    if (spec == "nodes" || spec.rfind("nodes:", 0) == 0) {
        const int N = spec.size() > 6 ? toInt(spec.substr(6), "nodes order") : order;
        const TriNodeSet& nodes = triNodes(N);
        for (const MeshElement& e : els) {
            const SimplexMap map = elementMap(e);
            for (const auto& p : nodes.nodes) {
                double jac;
                out.push_back(map(p[0], p[1], jac));
            }
        }
        return out;
    }
    if (spec.rfind("grid:", 0) == 0) {
        const std::vector<std::string> f = split(spec.substr(5), ',');
        if (f.size() != 2 && f.size() != 6)
            throw ValidationError("grid targets: expected grid:nx,ny or grid:nx,ny,x0,x1,y0,y1");
        const int nx = toInt(f[0], "grid nx"), ny = toInt(f[1], "grid ny");
        if (nx < 1 || ny < 1)
            throw ValidationError("grid targets: nx and ny must be positive");
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        if (f.size() == 6) {
            x0 = toDouble(f[2], "grid x0");
            x1 = toDouble(f[3], "grid x1");
            y0 = toDouble(f[4], "grid y0");
            y1 = toDouble(f[5], "grid y1");
        } else {
            for (const MeshElement& e : els) {
                const Circle b = boundingCircle(e);
                x0 = std::min(x0, b.center.real() - b.radius);
                x1 = std::max(x1, b.center.real() + b.radius);
                y0 = std::min(y0, b.center.imag() - b.radius);
                y1 = std::max(y1, b.center.imag() + b.radius);
            }
        }
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                out.emplace_back(nx == 1 ? 0.5 * (x0 + x1) : x0 + (x1 - x0) * i / (nx - 1),
                                 ny == 1 ? 0.5 * (y0 + y1) : y0 + (y1 - y0) * j / (ny - 1));
        return out;
    }
    if (spec.rfind("file:", 0) == 0) {
        const std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in)
            throw ValidationError("cannot open target file '" + path + "'");
        std::string line;
        int lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double x, y;
            if (!(ls >> x))
                continue;
            std::string rest;
            if (!(ls >> y) || (ls >> rest))
                throw ValidationError("target file line " + std::to_string(lineNo) +
                                      ": expected 'x y'");
            out.emplace_back(x, y);
        }
        return out;
    }
    if (spec.rfind("probes:", 0) == 0) {
        std::vector<double> hs = parseList(spec.substr(7));
        for (const MeshElement& e : els)
            for (int k = 0; k < 3; ++k)
                for (double h : hs)
                    out.push_back(probe(e, k, h));
        return out;
    }
    throw ValidationError("unknown target spec '" + spec +
                          "' (nodes[:N], grid:nx,ny[,x0,x1,y0,y1], file:path, probes:h,...)");
}

std::vector<int> parseOrders(const std::string& s)
{
    std::vector<int> out;
    if (s.find(':') != std::string::npos) {
        const std::vector<std::string> f = split(s, ':');
        if (f.size() < 2 || f.size() > 3)
            throw ValidationError("orders: expected a:b or a:b:step");
        const int a = toInt(f[0], "orders"), b = toInt(f[1], "orders");
        const int step = f.size() == 3 ? toInt(f[2], "orders step") : 1;
        if (step < 1)
            throw ValidationError("orders: step must be positive");
        for (int n = a; n <= b; n += step)
            out.push_back(n);
    } else {
        for (const std::string& t : split(s, ','))
            out.push_back(toInt(t, "orders"));
    }
    for (int n : out)
        if (n < 0 || n > 20)
            throw ValidationError("orders must lie in 0..20");
    if (out.empty())
        throw ValidationError("orders: empty list");
    return out;
}

std::vector<double> parseList(const std::string& s)
{
    std::vector<double> out;
    for (const std::string& t : split(s, ','))
        out.push_back(toDouble(t, "list value"));
    if (out.empty())
        throw ValidationError("empty list");
    return out;
}

int runEvaluate(const RunConfig& c)
{
    validate(c);
    const auto t0 = Clock::now();
    const Mesh mesh = loadMesh(c.mesh);
    const DensitySource density = parseDensity(c.density);
    const std::vector<cplx> targets = makeTargets(c.targets, mesh, c.order);
    if (c.withOracle && density.tabulated())
        throw ValidationError("--with-oracle needs a callable density");
    const double tLoad = since(t0);

    PipelineOptions po;
    po.element = elementOptions(c);
    po.backend = c.backend;
    po.mergeEdges = c.mergeEdges;
    po.threads = c.threads;
    const EvaluationResult r = evaluateMesh(mesh, density, targets, po);

    std::vector<double> oracle;
    if (c.withOracle)
        for (const cplx& x : targets)
            oracle.push_back(oraclePotential(mesh, density.func, x));

    const std::string hash = configHash(c, "evaluate");
    std::ofstream f = openOut(c.out);
    f << "# config_hash: " << hash << "\n";
    f << "target,x,y,u,element,near_count" << (c.withOracle ? ",oracle,error" : "") << "\n";
    double maxErr = 0.0;
    for (size_t i = 0; i < targets.size(); ++i) {
        f << i << ',' << fmt(targets[i].real()) << ',' << fmt(targets[i].imag()) << ','
          << fmt(r.values[i]) << ',' << r.containing[i] << ',' << r.nearCount[i];
        if (c.withOracle) {
            const double err = std::abs(r.values[i] - oracle[i]);
            maxErr = std::max(maxErr, err);
            f << ',' << fmt(oracle[i]) << ',' << fmt(err);
        }
        f << "\n";
    }
    f.close();

    json notices = json::array();
    for (const Notice& n : r.notices) {
        std::fprintf(stderr, "notice: %s\n", n.text.c_str());
        notices.push_back({{"target", n.target}, {"text", n.text}});
    }
    const SolverStats stats = solverStats();
    json meta = {{"config_hash", hash},
                 {"config", configJson(c, "evaluate")},
                 {"elements", mesh.size()},
                 {"targets", targets.size()},
                 {"far_sources", r.farSources},
                 {"timings",
                  {{"T_geom", r.timings.geom + tLoad},
                   {"T_init", r.timings.init},
                   {"T_F", r.timings.far},
                   {"T_N", r.timings.near},
                   {"T_S", r.timings.self},
                   {"T_tot", r.timings.total + tLoad}}},
                 {"max_coefficient_norm", r.maxCoefficientNorm},
                 {"fit_contract_violations", r.fitContractViolations},
                 {"trace_contract_violations", r.traceContractViolations},
                 {"solves", stats.solves},
                 {"solve_contract_violations", stats.violations},
                 {"notices", notices}};
    if (c.withOracle)
        meta["max_error"] = maxErr;
    writeJson(jsonPath(c.out), meta);
    std::printf("evaluated %zu targets on %d elements in %.3g s -> %s\n", targets.size(),
                mesh.size(), r.timings.total + tLoad, c.out.c_str());
    if (c.withOracle)
        std::printf("max |u - oracle| = %.3e\n", maxErr);
    return 0;
}

int runConvergence(const RunConfig& c)
{
    validate(c);
    const Mesh mesh = loadMesh(c.mesh);
    if (c.element >= mesh.size())
        throw ValidationError("--element " + std::to_string(c.element) + " out of range");
    const MeshElement e = mesh.element(c.element);
    const DensitySource density = callableDensity(c, "convergence");
    const std::vector<int> orders = parseOrders(c.orders);
    const SolverKind solver = parseSolver(c.solver);
    const SimplexMap map = elementMap(e);
    const Circle frame = boundingCircle(e);

    // uniform samples on the reference simplex, pushed through the element map
    XorShift64 rng(c.seed);
    std::vector<std::array<double, 2>> ref(c.samples);
    std::vector<cplx> phys(c.samples);
    std::vector<double> exact(c.samples);
    for (int i = 0; i < c.samples; ++i) {
        double u = rng.uniform(), v = rng.uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        double jac;
        ref[i] = {u, v};
        phys[i] = map(u, v, jac);
        exact[i] = density.func(phys[i]);
    }

    const std::string hash = configHash(c, "convergence");
    std::ofstream f = openOut(c.out);
    std::ofstream g = openOut(withSuffix(c.out, "_coeffs"));
    f << "# config_hash: " << hash << "\n";
    f << "N,solver,linf_error,coef_norm,estimate,koornwinder_error,koornwinder_tail\n";
    g << "# config_hash: " << hash << "\n";
    g << "N,index,m,n,monomial_abs,koornwinder_abs\n";
    for (int N : orders) {
        const TriNodeSet& nodes = triNodes(N);
        std::vector<cplx> pts, local;
        std::vector<double> vals;
        for (const auto& p : nodes.nodes) {
            double jac;
            pts.push_back(map(p[0], p[1], jac));
            local.push_back((pts.back() - frame.center) / frame.radius);
            vals.push_back(density.func(pts.back()));
        }
        SolveReport rep;
        const std::vector<double> a = fitMonomial2D(local, vals, N, solver, c.seed, &rep);

        const Eigen::MatrixXd K = koornwinderVandermonde(nodes.nodes, N);
        const Eigen::VectorXd b = K.partialPivLu().solve(
            Eigen::Map<const Eigen::VectorXd>(vals.data(), Eigen::Index(vals.size())));

        double err = 0.0, kerr = 0.0;
        for (int i = 0; i < c.samples; ++i) {
            const double fm = evalMonomial2D(a, N, (phys[i] - frame.center) / frame.radius);
            const double fk = koornwinderBasis(N, ref[i][0], ref[i][1]).dot(b);
            err = std::max(err, std::abs(fm - exact[i]));
            kerr = std::max(kerr, std::abs(fk - exact[i]));
        }
        double tail = 0.0;
        for (int n = 0; n <= N; ++n)
            tail = std::max(tail, std::abs(b[monoIndex(N, n)]));
        const double lebesgue = lebesgueConstantTri(nodes.nodes, N, 60);
        const double est = errorEstimate(NodeFamily::Triangle, N, rep.solutionNorm, lebesgue,
                                         rep.matrixNorm);
        f << N << ',' << solverName(solver) << ',' << fmt(err) << ',' << fmt(rep.solutionNorm)
          << ',' << fmt(est) << ',' << fmt(kerr) << ',' << fmt(tail) << "\n";
        for (int m = 0; m <= N; ++m)
            for (int n = 0; n <= m; ++n) {
                const int k = monoIndex(m, n);
                g << N << ',' << k << ',' << m << ',' << n << ',' << fmt(std::abs(a[k])) << ','
                  << fmt(std::abs(b[k])) << "\n";
            }
        std::printf("N=%2d  fit error %.3e  |a| %.3e  Koornwinder error %.3e\n", N, err,
                    rep.solutionNorm, kerr);
    }
    writeJson(jsonPath(c.out), {{"config_hash", hash}, {"config", configJson(c, "convergence")}});
    return 0;
}

int runBench(const RunConfig& c)
{
    validate(c);
    const Mesh mesh = loadMesh(c.mesh);
    if (c.element >= mesh.size())
        throw ValidationError("--element " + std::to_string(c.element) + " out of range");
    const MeshElement e = mesh.element(c.element);
    const DensitySource density = callableDensity(c, "bench");
    const ElementTables t = precomputeElement(e, density.func, elementOptions(c), c.element);
    const std::vector<FarFieldSource> far = elementFarSources(t);

    struct Row {
        std::string kind;
        double h;
        cplx x;
    };
    std::vector<Row> rows;
    for (double h : parseList(c.hs))
        rows.push_back({"close", h, probe(e, 0, h)});
    rows.push_back({"self", 0.0, e.centroid()});
    rows.push_back({"far", 0.0, t.frame.center + 3.0 * t.frame.radius});

    auto rate = [&](auto&& work) {
        long n = 0;
        const auto t0 = Clock::now();
        double dt = 0.0;
        do {
            work();
            ++n;
            dt = since(t0);
        } while (dt < c.minSeconds);
        return n / dt;
    };

    const std::string hash = configHash(c, "bench");
    std::ofstream f = openOut(c.out);
    f << "# config_hash: " << hash << "\n";
    f << "kind,h,x,y,path,S_exps,S_adap,ratio,error\n";
    json rowsJson = json::array();
    for (const Row& r : rows) {
        PotentialResult res;
        double sExps;
        if (r.kind == "far") {
            // what the far field costs per element: its point sources
            sExps = rate([&] {
                double v = 0.0;
                for (const FarFieldSource& s : far)
                    v += sourceKernel(s, r.x);
                res.value = v;
            });
        } else {
            sExps = rate([&] { res = evaluateElement(t, r.x); });
        }
        // the baseline at a tolerance matching the expansion's accuracy
        AdaptiveResult ref;
        const double sAdap = rate([&] { ref = oraclePotential(e, density.func, r.x, 1e-13); });
        const double exact = oraclePotential(e, density.func, r.x).value;
        const double err = std::abs(res.value - exact);
        const char* path = r.kind == "far" ? "sources" : res.path == PathUsed::Close ? "close" : "far";
        f << r.kind << ',' << fmt(r.h) << ',' << fmt(r.x.real()) << ',' << fmt(r.x.imag()) << ','
          << path << ',' << fmt(sExps) << ',' << fmt(sAdap) << ',' << fmt(sExps / sAdap) << ','
          << fmt(err) << "\n";
        rowsJson.push_back({{"kind", r.kind}, {"h", r.h}, {"S_exps", sExps}, {"S_adap", sAdap}});
        std::printf("%-5s h=%-8.2g path=%-5s S_exps=%.3e/s S_adap=%.3e/s ratio=%.1f err=%.2e\n",
                    r.kind.c_str(), r.h, path, sExps, sAdap, sExps / sAdap, err);
    }
    writeJson(jsonPath(c.out),
              {{"config_hash", hash}, {"config", configJson(c, "bench")}, {"rows", rowsJson}});
    return 0;
}

int runOracle(const RunConfig& c)
{
    validate(c);
    const Mesh mesh = loadMesh(c.mesh);
    const DensitySource density = callableDensity(c, "oracle");
    const std::vector<cplx> targets = makeTargets(c.targets, mesh, c.order);
    const std::vector<MeshElement> els = mesh.elements();
    const std::string hash = configHash(c, "oracle");
    std::ofstream f = openOut(c.out);
    f << "# config_hash: " << hash << "\n";
    f << "target,x,y,oracle,error_estimate,depth_capped\n";
    const double tol = 1e-15 / std::max<size_t>(1, els.size());
    for (size_t i = 0; i < targets.size(); ++i) {
        double v = 0.0, est = 0.0;
        bool capped = false;
        for (const MeshElement& e : els) {
            const AdaptiveResult r = oraclePotential(e, density.func, targets[i], tol);
            v += r.value;
            est += r.errorEstimate;
            capped = capped || r.depthCapped;
        }
        f << i << ',' << fmt(targets[i].real()) << ',' << fmt(targets[i].imag()) << ',' << fmt(v)
          << ',' << fmt(est) << ',' << (capped ? 1 : 0) << "\n";
    }
    writeJson(jsonPath(c.out), {{"config_hash", hash}, {"config", configJson(c, "oracle")}});
    std::printf("oracle at %zu targets -> %s\n", targets.size(), c.out.c_str());
    return 0;
}

} // namespace newtpot::cli
