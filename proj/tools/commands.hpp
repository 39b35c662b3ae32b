#ifndef NEWTPOT_TOOLS_COMMANDS_HPP
#define NEWTPOT_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "newtpot/pipeline.hpp"

namespace newtpot::cli {

struct RunConfig {
    std::string mesh = "builtin:simplex";
    std::string density = "gauss";
    int order = 12;
    std::string solver = "plu";
    std::string backend = "tree";
    std::string targets = "nodes";
    std::string out = "potential.csv";
    std::uint64_t seed = 1;
    bool mergeEdges = false;
    int threads = 1;
    bool withOracle = false;
    // convergence
    std::string orders = "0:20";
    int element = 0;
    int samples = 20000;
    // bench
    std::string hs = "5e-1,5e-2,5e-3,5e-4,5e-5,5e-6";
    double minSeconds = 0.2;
};

// Checks ranges and names; throws ValidationError with a usable message.
void validate(const RunConfig& c);

// Canonical text of the config (output paths left out) and its FNV-1a hash.
std::string canonical(const RunConfig& c, const std::string& command);
std::string configHash(const RunConfig& c, const std::string& command);

// "builtin:simplex|square|disk4|quarter|grid:n" or a mesh file path
Mesh loadMesh(const std::string& spec);

// nodes[:N] | grid:nx,ny[,x0,x1,y0,y1] | file:<path> | probes:h1,h2,...
std::vector<cplx> makeTargets(const std::string& spec, const Mesh& mesh, int order);

// "a:b" (inclusive range), "a:b:step" or "a,b,c"
std::vector<int> parseOrders(const std::string& s);
std::vector<double> parseList(const std::string& s);

int runEvaluate(const RunConfig& c);
int runConvergence(const RunConfig& c);
int runBench(const RunConfig& c);
int runOracle(const RunConfig& c);

} // namespace newtpot::cli

#endif
