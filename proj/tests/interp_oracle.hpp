#ifndef NEWTPOT_TESTS_INTERP_ORACLE_HPP
#define NEWTPOT_TESTS_INTERP_ORACLE_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <vector>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

// Interpolating monomial coefficients through real nodes, solved by
// Gaussian elimination with partial pivoting in 50 digits.
inline std::vector<double> exactInterpolant(const std::vector<double>& x, const std::vector<double>& f)
{
    const int n = int(x.size());
    std::vector<std::vector<big>> A(n, std::vector<big>(n + 1));
    for (int i = 0; i < n; ++i) {
        big p = 1;
        for (int k = 0; k < n; ++k, p *= big(x[i]))
            A[i][k] = p;
        A[i][n] = big(f[i]);
    }
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (abs(A[r][c]) > abs(A[piv][c]))
                piv = r;
        std::swap(A[c], A[piv]);
        for (int r = c + 1; r < n; ++r) {
            const big m = A[r][c] / A[c][c];
            for (int k = c; k <= n; ++k)
                A[r][k] -= m * A[c][k];
        }
    }
    std::vector<big> s(n);
    for (int r = n - 1; r >= 0; --r) {
        big v = A[r][n];
        for (int k = r + 1; k < n; ++k)
            v -= A[r][k] * s[k];
        s[r] = v / A[r][r];
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = static_cast<double>(s[i]);
    return out;
}

} // namespace oracle

#endif
