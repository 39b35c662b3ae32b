// Writes data/tri_nodes_N.txt for N = 0..20 from the computed node family.
#include <cstdio>
#include <string>

#include "newtpot/quadrule.hpp"

int main(int argc, char** argv)
{
    const std::string dir = argc > 1 ? argv[1] : newtpot::dataDirectory();
    int lo = 0, hi = 20;
    if (argc > 2)
        lo = hi = std::stoi(argv[2]);
    for (int N = lo; N <= hi; ++N) {
        const newtpot::TriNodeSet s = newtpot::computeFallbackTriNodes(N);
        const std::string path = dir + "/tri_nodes_" + std::to_string(N) + ".txt";
        std::FILE* f = std::fopen(path.c_str(), "w");
        if (!f) {
            std::fprintf(stderr, "cannot write %s\n", path.c_str());
            return 1;
        }
        std::fprintf(f, "# triangle interpolation nodes, order %d, reference simplex (xi eta)\n", N);
        std::fprintf(f, "# quadrature-degree %d\n", s.quadratureDegree);
        for (const auto& p : s.nodes)
            std::fprintf(f, "%.17g %.17g\n", p[0], p[1]);
        std::fclose(f);
        std::printf("N=%d nodes=%zu degree=%d\n", N, s.nodes.size(), s.quadratureDegree);
    }
    return 0;
}
