#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "commands.hpp"

using newtpot::cli::RunConfig;

namespace {

void commonFlags(CLI::App* cmd, RunConfig& c)
{
    cmd->add_option("--mesh", c.mesh, "mesh file, or builtin:simplex|square|disk4|quarter|grid:n");
    cmd->add_option("--density", c.density, "gauss | sin56 | const[:c] | samples:<path>");
    cmd->add_option("--order", c.order, "fit order N (0..20)");
    cmd->add_option("--solver", c.solver, "tsvd | plu");
    cmd->add_option("--out", c.out, "output CSV (metadata goes to the matching .json)");
    cmd->add_option("--seed", c.seed, "seed for the perturbed LU and sampling");
    cmd->add_option("--threads", c.threads, "worker threads");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Newtonian potentials on triangle meshes"};
    app.require_subcommand(1);
    RunConfig c;

    CLI::App* ev = app.add_subcommand("evaluate", "evaluate the potential at targets");
    commonFlags(ev, c);
    ev->add_option("--backend", c.backend, "far-field backend: direct | tree");
    ev->add_option("--targets", c.targets,
                   "nodes[:N] | grid:nx,ny[,x0,x1,y0,y1] | file:<path> | probes:h1,h2,...");
    ev->add_flag("--merge-edges", c.mergeEdges, "merge coincident far sources on shared edges");
    ev->add_flag("--with-oracle", c.withOracle, "add adaptive-quadrature reference columns");

    CLI::App* cv = app.add_subcommand("convergence", "fit error versus order on one element");
    commonFlags(cv, c);
    cv->add_option("--orders", c.orders, "a:b, a:b:step or a,b,c");
    cv->add_option("--element", c.element, "element index in the mesh");
    cv->add_option("--samples", c.samples, "uniform samples for the max-norm error");

    CLI::App* bn = app.add_subcommand("bench", "close/self/far throughput against adaptive quadrature");
    commonFlags(bn, c);
    bn->add_option("--element", c.element, "element index in the mesh");
    bn->add_option("--hs", c.hs, "distances of the close targets");
    bn->add_option("--min-seconds", c.minSeconds, "timing window per measurement");

    CLI::App* orc = app.add_subcommand("oracle", "adaptive-quadrature reference values");
    commonFlags(orc, c);
    orc->add_option("--targets", c.targets, "as for evaluate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (ev->parsed())
            return newtpot::cli::runEvaluate(c);
        if (cv->parsed())
            return newtpot::cli::runConvergence(c);
        if (bn->parsed())
            return newtpot::cli::runBench(c);
        return newtpot::cli::runOracle(c);
    } catch (const newtpot::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const newtpot::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
