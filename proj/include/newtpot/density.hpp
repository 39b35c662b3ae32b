#ifndef NEWTPOT_DENSITY_HPP
#define NEWTPOT_DENSITY_HPP

#include <map>
#include <string>
#include <vector>

#include "newtpot/element.hpp"

namespace newtpot {

// A density given either as a callable or as values at each element's
// interpolation nodes (file lines "element node value").
struct DensitySource {
    std::string spec;
    Density func;
    std::map<int, std::map<int, double>> samples;

    bool tabulated() const { return !func; }
    // sample vector for one element, checked for completeness
    std::vector<double> elementSamples(int element, int count) const;
};

// gauss | sin56 | const[:c] | samples:<path>
DensitySource parseDensity(const std::string& spec);

double gaussDensity(cplx z);
double sin56Density(cplx z);

} // namespace newtpot

#endif
