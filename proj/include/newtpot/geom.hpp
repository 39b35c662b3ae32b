#ifndef NEWTPOT_GEOM_HPP
#define NEWTPOT_GEOM_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "newtpot/common.hpp"
#include "newtpot/quadrule.hpp"

namespace newtpot {

// Complex Chebyshev series gamma(t) = sum c_k T_k(2t - 1), t in [0,1].
class ChebCurve {
public:
    ChebCurve() = default;
    explicit ChebCurve(std::vector<cplx> coeffs);
    // interpolates f at the degree+1 Chebyshev-Lobatto points (ends included)
    static ChebCurve fit(const std::function<cplx(double)>& f, int degree);
    // circular arc about center, radius r, angles th0 -> th1
    static ChebCurve arc(cplx center, double r, double th0, double th1, int degree = 16);

    cplx operator()(double t) const;
    cplx derivative(double t) const;
    ChebCurve reversed() const;
    ChebCurve derivativeCurve() const { return ChebCurve(d_); }
    int degree() const { return int(c_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }
    bool empty() const { return c_.empty(); }

private:
    std::vector<cplx> c_;
    std::vector<cplx> d_; // coefficients of d gamma / dt
};

// One side of an element, traversed counterclockwise with respect to the element.
struct ElementEdge {
    cplx a, b;
    bool curved = false;
    ChebCurve curve; // a = curve(0), b = curve(1) when curved

    cplx point(double t) const { return curved ? curve(t) : a + t * (b - a); }
    cplx tangent(double t) const { return curved ? curve.derivative(t) : b - a; }
};

// Triangle with at most one curved side. When curved, edges[0] is the curved one.
struct MeshElement {
    std::array<ElementEdge, 3> edges;

    bool curved() const { return edges[0].curved; }
    cplx vertex(int i) const { return edges[i].a; }
    // vertex centroid
    cplx centroid() const { return (edges[0].a + edges[1].a + edges[2].a) / 3.0; }
    double area() const;
};

// Checks orientation, closure, single curved side, and the curvature guard;
// throws ValidationError.
void validateElement(const MeshElement& e);

MeshElement makeTriangle(cplx a, cplx b, cplx c);
// curved side a -> b given by curve, third vertex o (counterclockwise order a, b, o)
MeshElement makeCurvedElement(const ChebCurve& curve, cplx o);

struct Circle {
    cplx center;
    double radius = 0.0;
};

enum class BoundingRule { Centroid, Minimal };

// Element bounding circle. Centroid: vertex centroid, radius = max distance to
// vertices and 33 samples per curved side. Minimal: Welzl over the same points.
Circle boundingCircle(const MeshElement& e, BoundingRule rule = BoundingRule::Centroid);
Circle minimalEnclosingCircle(std::vector<cplx> pts);

// Curved-triangle map from the reference simplex; curve parametrized on [0,1]
// with curve(1) the image of (0,0) and curve(0) the image of (1,0).
cplx blendingMap(double xi, double eta, const ChebCurve& curve, cplx o);
// reference simplex -> element (affine, or blending for curved elements)
SimplexMap elementMap(const MeshElement& e);

// Signed reference to a mesh edge.
struct EdgeRef {
    int edge = 0;
    bool reversed = false;
};

struct MeshEdge {
    int v0 = 0, v1 = 0;
    bool curved = false;
    int hint = -1; // opposite-vertex hint stored in the file, -1 if absent
    ChebCurve curve;
};

struct Mesh {
    std::vector<cplx> vertices;
    std::vector<MeshEdge> edges;
    std::vector<std::array<EdgeRef, 3>> triangles;

    int size() const { return int(triangles.size()); }
    MeshElement element(int i) const;
    std::vector<MeshElement> elements() const;
};

void validateMesh(const Mesh& m);

// NEWTPOT-MESH v1 text format
Mesh readMesh(const std::string& path);
Mesh parseMesh(const std::string& text);
void writeMesh(const Mesh& m, const std::string& path);
std::string formatMesh(const Mesh& m);

// Fixture meshes.
Mesh standardSimplexMesh();
Mesh twoTriangleSquareMesh();
// n x n grid of squares on [x0,x1]x[y0,y1], each split into two triangles
Mesh gridMesh(int n, double x0 = 0.0, double x1 = 1.0, double y0 = 0.0, double y1 = 1.0);
// disk of given radius cut into equal curved sectors (4 = quarter disks)
Mesh diskSectorMesh(int sectors, double radius = 1.0);
// single quarter-disk element {0 <= r <= radius, 0 <= theta <= pi/2}
Mesh quarterDiskMesh(double radius);

} // namespace newtpot

#endif
