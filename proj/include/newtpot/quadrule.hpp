#ifndef NEWTPOT_QUADRULE_HPP
#define NEWTPOT_QUADRULE_HPP

#include <array>
#include <functional>
#include <vector>

#include "newtpot/common.hpp"

namespace newtpot {

struct Rule1D {
    std::vector<double> x; // ascending, on [-1,1]
    std::vector<double> w;
    int size() const { return int(x.size()); }
};

// n-point Gauss-Legendre rule on [-1,1], 1 <= n <= 200. Cached; the returned
// reference stays valid for the life of the process.
const Rule1D& gaussLegendre(int n);

// Interpolation nodes on the reference simplex {xi, eta >= 0, xi + eta <= 1}.
struct TriNodeSet {
    int order = 0;
    std::vector<std::array<double, 2>> nodes;
    bool fromTable = false; // true only when a Vioreanu-Rokhlin table was loaded
    std::string source;     // file the nodes came from, or "computed"
    int quadratureDegree = 0; // > 0: the nodes carry a rule exact to this degree
};

// (N+1)(N+2)/2 nodes, 0 <= N <= 20, all strictly inside the simplex.
const TriNodeSet& triNodes(int N);

// Used when no node table is present: approximate Fekete points, then moved
// so that they also carry a positive quadrature rule of as high a degree as
// the search finds. Exposed for the asset generator and the tests.
TriNodeSet computeFallbackTriNodes(int N);

// Directory searched for node tables; NEWTPOT_DATA_DIR env var overrides the
// build-time default.
std::string dataDirectory();

// Collapsed (Duffy) Gauss-Legendre rule on the reference simplex; exact for
// total degree 2n-2.
struct TriRule {
    std::vector<std::array<double, 2>> p;
    std::vector<double> w; // sums to 1/2
};
const TriRule& triQuadrature(int n);

// Maps reference simplex coordinates to the physical plane; jac receives
// |det dx/dxi|.
using SimplexMap = std::function<cplx(double xi, double eta, double& jac)>;

struct AdaptiveOptions {
    double tol = 1e-14;        // absolute
    int baseRule = 8;          // collapsed G-L points per direction
    int maxDepth = 40;
    long maxEvaluations = 200000000;
    bool hasSingularPoint = false;
    cplx singularPoint{};      // target location for distance grading
};

struct AdaptiveResult {
    double value = 0.0;
    double errorEstimate = 0.0;
    long evaluations = 0;
    int maxDepthReached = 0;
    bool depthCapped = false;
};

// Integrates f over the image of the reference simplex under map, splitting
// triangles 4 ways until the parent/children difference drops below the
// local share of tol. Throws NumericalError when maxEvaluations is exceeded.
AdaptiveResult adaptiveTriangleIntegrate(const std::function<double(cplx)>& f,
                                         const SimplexMap& map,
                                         const AdaptiveOptions& opt = {});

// Affine map of the reference simplex onto triangle (a, b, c).
SimplexMap affineSimplexMap(cplx a, cplx b, cplx c);

} // namespace newtpot

#endif
