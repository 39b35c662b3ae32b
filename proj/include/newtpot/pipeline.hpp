#ifndef NEWTPOT_PIPELINE_HPP
#define NEWTPOT_PIPELINE_HPP

#include <string>
#include <vector>

#include "newtpot/density.hpp"
#include "newtpot/element.hpp"
#include "newtpot/fastsum.hpp"

namespace newtpot {

struct PipelineOptions {
    ElementOptions element;
    std::string backend = "tree";
    TreeOptions tree;
    bool mergeEdges = false;
    int threads = 1;
    bool nudgeBoundary = true; // move on-boundary targets 1e-12 R toward the element centroid
};

// Seconds. With several threads T_N and T_S add up per-thread time.
struct Timings {
    double geom = 0.0; // element setup, bounding circles, near-list binning
    double init = 0.0; // per-element precomputation
    double far = 0.0;  // far-field sum (tree build included)
    double near = 0.0; // close evaluations on neighbouring elements
    double self = 0.0; // evaluations on the element containing the target
    double total = 0.0;
};

struct Notice {
    int target = 0;
    std::string text;
};

struct EvaluationResult {
    std::vector<double> values;
    std::vector<int> containing; // element holding the target, -1 if none
    std::vector<int> nearCount;
    std::vector<Notice> notices;
    Timings timings;
    long farSources = 0;
    double maxCoefficientNorm = 0.0;
    int fitContractViolations = 0;
    int traceContractViolations = 0;
};

// Elements whose bounding circle or any boundary close zone contains x; the
// far sources of all other elements are valid for x.
class NearFinder {
public:
    explicit NearFinder(const std::vector<ElementTables>& tables);
    std::vector<int> near(cplx x) const;

private:
    struct Disk {
        cplx c;
        double r;
        int owner;
    };
    std::vector<Disk> disks_;
    double x0_ = 0, y0_ = 0, cell_ = 1;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> bins_; // disk indices per cell
};

// Precomputes every element of the mesh.
std::vector<ElementTables> precomputeMesh(const Mesh& mesh, const DensitySource& density,
                                          const ElementOptions& opt, int threads);

// Far sources of all elements with shared-edge keys filled in.
std::vector<FarFieldSource> meshFarSources(const Mesh& mesh, const std::vector<ElementTables>& t);

EvaluationResult evaluateMesh(const Mesh& mesh, const DensitySource& density,
                              const std::vector<cplx>& targets, const PipelineOptions& opt);

} // namespace newtpot

#endif
