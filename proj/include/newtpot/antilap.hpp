#ifndef NEWTPOT_ANTILAP_HPP
#define NEWTPOT_ANTILAP_HPP

#include <utility>
#include <vector>

namespace newtpot {

// Which particular solution is used for the four lowest monomials.
// XFirst: 1 -> x^2/2, x -> x^3/6, y -> y^3/6, xy -> x^3 y/6.
// YFirst: 1 -> y^2/2, x -> x y^2/2, y -> x^2 y/2, xy -> x y^3/6.
enum class BaseConvention { XFirst, YFirst };

// Sparse linear map from degree-N monomial coefficients to degree-(N+2)
// coefficients of a particular solution of Laplace(phi) = f.
class AntiLaplacian {
public:
    AntiLaplacian(int N, BaseConvention conv);
    int order() const { return N_; }
    std::vector<double> apply(const std::vector<double>& a) const;
    long nonzeros() const;
    // column of input monomial idx: (output index, weight) pairs
    const std::vector<std::pair<int, double>>& column(int idx) const { return cols_[idx]; }

private:
    int N_;
    std::vector<std::vector<std::pair<int, double>>> cols_;
};

const AntiLaplacian& antiLaplacian(int N, BaseConvention conv = BaseConvention::XFirst);

// Exact Laplacian of a degree-N expansion, returned at degree max(N-2, 0).
std::vector<double> laplacianOf(const std::vector<double>& c, int N);

} // namespace newtpot

#endif
