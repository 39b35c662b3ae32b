#include "newtpot/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace newtpot {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
void parallelFor(int n, int threads, F&& body)
{
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i)
            body(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += threads)
                    body(i, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace

NearFinder::NearFinder(const std::vector<ElementTables>& tables)
{
    for (const ElementTables& t : tables) {
        const double R = t.frame.radius;
        disks_.push_back({t.frame.center, R, t.id});
        for (const PanelTrace& p : t.panels)
            disks_.push_back({t.frame.center + R * p.panel.zone.center,
                              kCloseFactor * R * p.panel.zone.radius, t.id});
    }
    if (disks_.empty())
        return;
    double x1 = -1e300, y1 = -1e300, sumR = 0.0;
    x0_ = y0_ = 1e300;
    for (const Disk& d : disks_) {
        x0_ = std::min(x0_, d.c.real() - d.r);
        y0_ = std::min(y0_, d.c.imag() - d.r);
        x1 = std::max(x1, d.c.real() + d.r);
        y1 = std::max(y1, d.c.imag() + d.r);
        sumR += d.r;
    }
    cell_ = std::max(2.0 * sumR / disks_.size(), 1e-300);
    const double w = x1 - x0_, h = y1 - y0_;
    // keep the grid bounded for very spread-out meshes
    const double maxCells = 4.0 * disks_.size() + 16;
    if ((w / cell_ + 1) * (h / cell_ + 1) > maxCells)
        cell_ = std::sqrt(w * h / maxCells) + 1e-300;
    nx_ = std::max(1, int(w / cell_) + 1);
    ny_ = std::max(1, int(h / cell_) + 1);
    bins_.assign(size_t(nx_) * ny_, {});
    for (int i = 0; i < int(disks_.size()); ++i) {
        const Disk& d = disks_[i];
        const int i0 = std::clamp(int((d.c.real() - d.r - x0_) / cell_), 0, nx_ - 1);
        const int i1 = std::clamp(int((d.c.real() + d.r - x0_) / cell_), 0, nx_ - 1);
        const int j0 = std::clamp(int((d.c.imag() - d.r - y0_) / cell_), 0, ny_ - 1);
        const int j1 = std::clamp(int((d.c.imag() + d.r - y0_) / cell_), 0, ny_ - 1);
        for (int j = j0; j <= j1; ++j)
            for (int k = i0; k <= i1; ++k)
                bins_[size_t(j) * nx_ + k].push_back(i);
    }
}

std::vector<int> NearFinder::near(cplx x) const
{
    std::vector<int> out;
    if (disks_.empty())
        return out;
    const double fx = (x.real() - x0_) / cell_, fy = (x.imag() - y0_) / cell_;
    if (fx < 0 || fy < 0 || fx >= nx_ || fy >= ny_)
        return out;
    for (int i : bins_[size_t(int(fy)) * nx_ + int(fx)]) {
        const Disk& d = disks_[i];
        if (std::abs(x - d.c) <= d.r * (1.0 + 1e-12))
            out.push_back(d.owner);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ElementTables> precomputeMesh(const Mesh& mesh, const DensitySource& density,
                                          const ElementOptions& opt, int threads)
{
    const std::vector<MeshElement> els = mesh.elements();
    std::vector<ElementTables> tables(els.size());
    const int count = monoCount(opt.order);
    parallelFor(int(els.size()), threads, [&](int i, int) {
        if (density.tabulated())
            tables[i] = precomputeElement(els[i], density.elementSamples(i, count), opt, i);
        else
            tables[i] = precomputeElement(els[i], density.func, opt, i);
    });
    return tables;
}

std::vector<FarFieldSource> meshFarSources(const Mesh& mesh, const std::vector<ElementTables>& tables)
{
    std::vector<FarFieldSource> all;
    for (const ElementTables& t : tables) {
        std::vector<FarFieldSource> src = elementFarSources(t);
        // which mesh edge each straight panel sits on
        int pos = 0;
        for (const PanelTrace& p : t.panels) {
            const int n = int(p.farZ.size());
            const ElementEdge& ee = t.element.edges[p.edge];
            if (!ee.curved) {
                for (const EdgeRef& r : mesh.triangles[t.id]) {
                    const MeshEdge& me = mesh.edges[r.edge];
                    const cplx a = mesh.vertices[r.reversed ? me.v1 : me.v0];
                    const cplx b = mesh.vertices[r.reversed ? me.v0 : me.v1];
                    if (me.curved || a != ee.a || b != ee.b)
                        continue;
                    for (int j = 0; j < n; ++j) {
                        src[pos + j].edgeKey = r.edge;
                        src[pos + j].edgeNode = r.reversed ? n - 1 - j : j;
                    }
                    break;
                }
            }
            pos += n;
        }
        all.insert(all.end(), src.begin(), src.end());
    }
    return all;
}

EvaluationResult evaluateMesh(const Mesh& mesh, const DensitySource& density,
                              const std::vector<cplx>& targets, const PipelineOptions& opt)
{
    EvaluationResult res;
    const auto tStart = Clock::now();
    const int nt = int(targets.size());
    res.values.assign(nt, 0.0);
    res.containing.assign(nt, -1);
    res.nearCount.assign(nt, 0);
    if (nt == 0)
        return res; // nothing to do, all timings stay zero

    auto t0 = Clock::now();
    const std::vector<ElementTables> tables =
        precomputeMesh(mesh, density, opt.element, opt.threads);
    res.timings.init = since(t0);
    for (const ElementTables& t : tables) {
        res.maxCoefficientNorm = std::max(res.maxCoefficientNorm, t.fit.solutionNorm);
        res.fitContractViolations += t.fit.residualContractHolds ? 0 : 1;
        res.traceContractViolations += t.traceContractViolations;
    }

    t0 = Clock::now();
    const NearFinder finder(tables);
    std::vector<cplx> pts = targets;
    ExclusionLists nearLists(nt);
    for (int i = 0; i < nt; ++i)
        nearLists[i] = finder.near(pts[i]);
    res.timings.geom = since(t0);

    // near and self interactions; a boundary target is nudged once and
    // its near list recomputed
    std::vector<double> nearTime(std::max(1, opt.threads), 0.0),
        selfTime(std::max(1, opt.threads), 0.0);
    std::vector<std::string> notes(nt);
    parallelFor(nt, opt.threads, [&](int i, int w) {
        for (int attempt = 0;; ++attempt) {
            double sum = 0.0;
            int inside = -1;
            try {
                for (int e : nearLists[i]) {
                    const auto s = Clock::now();
                    const PotentialResult r = evaluateElement(tables[e], pts[i]);
                    const double dt = since(s);
                    sum += r.value;
                    if (r.inside && inside < 0) {
                        inside = e;
                        selfTime[w] += dt;
                    } else {
                        nearTime[w] += dt;
                    }
                }
            } catch (const ValidationError& err) {
                if (!opt.nudgeBoundary || attempt > 0)
                    throw;
                // find the element whose boundary we hit and step into it
                int owner = nearLists[i].empty() ? -1 : nearLists[i].front();
                for (int e : nearLists[i]) {
                    try {
                        evaluateElement(tables[e], pts[i]);
                    } catch (const ValidationError&) {
                        owner = e;
                        break;
                    }
                }
                const ElementTables& t = tables[owner];
                const cplx c = t.element.centroid();
                pts[i] += 1e-12 * t.frame.radius * (c - pts[i]) / std::abs(c - pts[i]);
                nearLists[i] = finder.near(pts[i]);
                notes[i] = "target " + std::to_string(i) + " lies on the boundary of element " +
                           std::to_string(owner) + "; moved 1e-12 R toward its centroid";
                continue;
            }
            res.values[i] = sum;
            res.containing[i] = inside;
            res.nearCount[i] = int(nearLists[i].size());
            break;
        }
    });
    for (int w = 0; w < int(nearTime.size()); ++w) {
        res.timings.near += nearTime[w];
        res.timings.self += selfTime[w];
    }
    for (int i = 0; i < nt; ++i)
        if (!notes[i].empty())
            res.notices.push_back({i, notes[i]});

    t0 = Clock::now();
    const std::vector<FarFieldSource> far = meshFarSources(mesh, tables);
    const std::vector<PointSource> src = opt.mergeEdges ? mergeEdgeSources(far) : toPointSources(far);
    res.farSources = long(src.size());
    TreeOptions topt = opt.tree;
    topt.threads = opt.threads;
    const auto backend = makeBackend(opt.backend, topt);
    const std::vector<double> farVals = backend->evaluate(src, pts, nearLists);
    for (int i = 0; i < nt; ++i)
        res.values[i] += farVals[i];
    res.timings.far = since(t0);
    res.timings.total = since(tStart);
    return res;
}

} // namespace newtpot
