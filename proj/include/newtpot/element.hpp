#ifndef NEWTPOT_ELEMENT_HPP
#define NEWTPOT_ELEMENT_HPP

#include <functional>
#include <vector>

#include "newtpot/antilap.hpp"
#include "newtpot/approx.hpp"
#include "newtpot/geom.hpp"
#include "newtpot/layerpot.hpp"

namespace newtpot {

struct ElementOptions {
    int order = 12;
    SolverKind solver = SolverKind::PollutedLU;
    std::uint64_t seed = 1;
    BaseConvention base = BaseConvention::XFirst;
    BoundingRule bounding = BoundingRule::Centroid;
    int straightExtra = 2; // trace order N+2 on straight sides
    int curvedExtra = 5;   // N+5 on curved sides
    int maxCurvedSplits = 6;
};

// One boundary piece in the standardized frame x~ = (x - C)/R, with the
// traces of phi and of (d phi/dn)(dl/dtau) as monomials in tau.
struct PanelTrace {
    Panel panel;
    cplx start, end; // panel ends in physical coordinates
    int edge = 0;
    double t1 = 1.0; // end parameter on the edge curve
    int K = 0;
    std::vector<cplx> c; // phi
    std::vector<cplx> e; // d phi/dn * dl/dtau
    // far rule, standardized coordinates
    std::vector<cplx> farZ;
    std::vector<cplx> farDz;      // weight * dz/ds
    std::vector<double> farPhi;
    std::vector<double> farSigma; // weight * d phi/dn * |dz/ds|
};

struct ElementTables {
    int id = 0;
    MeshElement element;
    Circle frame; // (C, R)
    int N = 0;
    std::vector<double> a;   // density, degree N
    std::vector<double> phi; // anti-Laplacian, degree N+2
    std::vector<PanelTrace> panels;
    double mass = 0.0;       // sum of farSigma, the boundary flux of phi
    SolveReport fit;
    int traceSolves = 0;
    int traceContractViolations = 0;

    cplx toFrame(cplx x) const { return (x - frame.center) / frame.radius; }
    int farSourceCount() const;
};

using Density = std::function<double(cplx)>;

// Physical positions of the interpolation nodes used for the fit.
std::vector<cplx> elementSamplePoints(const MeshElement& e, int N);

ElementTables precomputeElement(const MeshElement& e, const Density& f,
                                const ElementOptions& opt = {}, int id = 0);
// same, from density values at elementSamplePoints(e, N)
ElementTables precomputeElement(const MeshElement& e, const std::vector<double>& samples,
                                const ElementOptions& opt = {}, int id = 0);

enum class PathUsed { Far, Close };

struct PotentialResult {
    double value = 0.0;
    PathUsed path = PathUsed::Far; // Close when any panel took the recurrence path
    bool inside = false;
};

// Throws ValidationError for targets on the element boundary and
// NumericalError when the winding number cannot be classified.
PotentialResult evaluateElement(const ElementTables& t, cplx x);
// forcing every panel onto one path (for cross-validation)
PotentialResult evaluateElement(const ElementTables& t, cplx x, PathUsed forced);

// Monopole + dipole point sources reproducing the far path:
// value(x) = q log|x - s| / 2pi + Re[d / (2pi (x - s))].
struct FarFieldSource {
    cplx pos;
    double charge = 0.0;
    cplx dipole;
    int owner = 0;
    int edgeKey = -1; // global mesh edge index, -1 if unknown
    int edgeNode = 0; // node index along that mesh edge in its stored direction
    int edgeNodes = 0;
};

std::vector<FarFieldSource> elementFarSources(const ElementTables& t);

double sourceKernel(const FarFieldSource& s, cplx x);

} // namespace newtpot

#endif
