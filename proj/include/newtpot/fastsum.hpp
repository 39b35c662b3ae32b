#ifndef NEWTPOT_FASTSUM_HPP
#define NEWTPOT_FASTSUM_HPP

#include <memory>
#include <string>
#include <vector>

#include "newtpot/element.hpp"

namespace newtpot {

// A far-field point carrying up to two owners; two owners appear only after
// shared-edge merging, each keeping its own strengths so that exclusion of
// one owner leaves the other intact.
struct PointSource {
    cplx pos;
    int owner[2] = {-1, -1};
    double charge[2] = {0.0, 0.0};
    cplx dipole[2];
};

std::vector<PointSource> toPointSources(const std::vector<FarFieldSource>& src);

// Collapses coincident sources on shared mesh edges (same edgeKey and node).
std::vector<PointSource> mergeEdgeSources(const std::vector<FarFieldSource>& src);

// exclusion[t]: sorted element ids whose sources target t must not see;
// may be empty (no exclusion for anyone) or one list per target.
using ExclusionLists = std::vector<std::vector<int>>;

std::vector<double> directSum(const std::vector<PointSource>& src, const std::vector<cplx>& targets,
                              const ExclusionLists& exclusion, int threads = 1);

struct TreeOptions {
    int order = 30;      // multipole terms
    int leafCapacity = 32;
    double theta = 0.35; // accept a box when its radius / distance <= theta
    int threads = 1;
};

std::vector<double> treeSum(const std::vector<PointSource>& src, const std::vector<cplx>& targets,
                            const ExclusionLists& exclusion, const TreeOptions& opt = {});

// Plug-in point for other far-field engines.
class FarFieldBackend {
public:
    virtual ~FarFieldBackend() = default;
    virtual std::string name() const = 0;
    virtual std::vector<double> evaluate(const std::vector<PointSource>& src,
                                         const std::vector<cplx>& targets,
                                         const ExclusionLists& exclusion) const = 0;
};

// "direct" or "tree"
std::unique_ptr<FarFieldBackend> makeBackend(const std::string& name, const TreeOptions& opt = {});

} // namespace newtpot

#endif
