#include "newtpot/density.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace newtpot {

double gaussDensity(cplx z)
{
    return std::exp(-std::norm(z));
}

double sin56Density(cplx z)
{
    return std::sin(5.0 * z.real() + 6.0 * z.imag());
}

std::vector<double> DensitySource::elementSamples(int element, int count) const
{
    auto it = samples.find(element);
    if (it == samples.end())
        throw ValidationError("density samples: no values for element " + std::to_string(element));
    std::vector<double> v(count);
    for (int j = 0; j < count; ++j) {
        auto jt = it->second.find(j);
        if (jt == it->second.end())
            throw ValidationError("density samples: element " + std::to_string(element) +
                                  " is missing node " + std::to_string(j));
        v[j] = jt->second;
    }
    if (int(it->second.size()) != count)
        throw ValidationError("density samples: element " + std::to_string(element) + " has " +
                              std::to_string(it->second.size()) + " values, expected " +
                              std::to_string(count));
    return v;
}

DensitySource parseDensity(const std::string& spec)
{
    DensitySource d;
    d.spec = spec;
    if (spec == "gauss") {
        d.func = gaussDensity;
    } else if (spec == "sin56") {
        d.func = sin56Density;
    } else if (spec == "const" || spec.rfind("const:", 0) == 0) {
        double c = 1.0;
        if (spec.size() > 6) {
            try {
                size_t pos = 0;
                c = std::stod(spec.substr(6), &pos);
                if (pos != spec.size() - 6)
                    throw std::invalid_argument("trailing");
            } catch (const std::logic_error&) {
                throw ValidationError("density: bad constant in '" + spec + "'");
            }
        }
        d.func = [c](cplx) { return c; };
    } else if (spec.rfind("samples:", 0) == 0) {
        const std::string path = spec.substr(8);
        std::ifstream in(path);
        if (!in)
            throw ValidationError("density: cannot open samples file '" + path + "'");
        std::string line;
        int lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            int e, n;
            double v;
            if (!(ls >> e))
                continue;
            std::string rest;
            if (!(ls >> n >> v) || (ls >> rest) || e < 0 || n < 0)
                throw ValidationError("density samples line " + std::to_string(lineNo) +
                                      ": expected 'element node value'");
            if (!d.samples[e].emplace(n, v).second)
                throw ValidationError("density samples line " + std::to_string(lineNo) +
                                      ": duplicate entry");
        }
    } else {
        throw ValidationError("unknown density '" + spec +
                              "' (expected gauss, sin56, const[:c] or samples:<path>)");
    }
    return d;
}

} // namespace newtpot
