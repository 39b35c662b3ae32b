#ifndef NEWTPOT_ORACLE_HPP
#define NEWTPOT_ORACLE_HPP

#include "newtpot/element.hpp"

namespace newtpot {

// Reference potential by adaptive quadrature of log|x - y| f(y) / 2pi over
// the element, refining toward x. Slow; for checking only.
AdaptiveResult oraclePotential(const MeshElement& e, const Density& f, cplx x, double tol = 1e-15);
double oraclePotential(const Mesh& m, const Density& f, cplx x, double tol = 1e-15);

} // namespace newtpot

#endif
