#include "newtpot/oracle.hpp"

#include <cmath>

namespace newtpot {

AdaptiveResult oraclePotential(const MeshElement& e, const Density& f, cplx x, double tol)
{
    AdaptiveOptions opt;
    opt.tol = tol;
    opt.hasSingularPoint = true;
    opt.singularPoint = x;
    return adaptiveTriangleIntegrate(
        [&](cplx y) {
            const double r2 = std::norm(x - y);
            return r2 > 0.0 ? std::log(r2) * f(y) / (4.0 * kPi) : 0.0;
        },
        elementMap(e), opt);
}

double oraclePotential(const Mesh& m, const Density& f, cplx x, double tol)
{
    long double s = 0.0L;
    for (int i = 0; i < m.size(); ++i)
        s += oraclePotential(m.element(i), f, x, tol / m.size()).value;
    return double(s);
}

} // namespace newtpot
