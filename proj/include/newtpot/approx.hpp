#ifndef NEWTPOT_APPROX_HPP
#define NEWTPOT_APPROX_HPP

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "newtpot/common.hpp"

namespace newtpot {

// Monomial ordering: coefficient a[monoIndex(m, n)] multiplies x^(m-n) y^n,
// m ascending (total degree), n ascending within m.
inline int monoIndex(int m, int n) { return m * (m + 1) / 2 + n; }
inline int monoCount(int N) { return (N + 1) * (N + 2) / 2; }

double evalMonomial2D(const std::vector<double>& a, int N, cplx p);
// value and gradient (d/dx, d/dy)
double evalMonomial2D(const std::vector<double>& a, int N, cplx p, double& dx, double& dy);

Eigen::MatrixXd vandermonde2D(const std::vector<cplx>& pts, int N);

enum class SolverKind { TruncatedSVD, PollutedLU };

const char* solverName(SolverKind k);
SolverKind parseSolver(const std::string& s);

struct SolveReport {
    double matrixNorm = 0.0;   // ||A||_2 from power iteration
    double solutionNorm = 0.0;
    double residualNorm = 0.0; // ||A x - b||_2 against the unperturbed A
    int rank = 0;              // kept singular values (TSVD) or full size (LU)
    bool residualContractHolds = false;
    std::uint64_t seed = 0;
};

// Solver contract bookkeeping across the whole process.
struct SolverStats {
    long solves = 0;
    long violations = 0;
    double worstRatio = 0.0; // max over solves of residual / (eps ||A|| ||x||)
};
SolverStats solverStats();
void resetSolverStats();

double spectralNormEstimate(const Eigen::MatrixXd& A, int iterations = 20);
double spectralNormEstimate(const Eigen::MatrixXcd& A, int iterations = 20);

// Square solves. PollutedLU adds a seeded uniform perturbation with
// spectral norm eps ||A||_2 and factors with partial pivoting; TSVD drops
// singular values <= 3 eps ||A||_2.
Eigen::VectorXd solveSquare(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, SolverKind kind,
                            std::uint64_t seed, SolveReport* report = nullptr);
Eigen::VectorXcd solveSquare(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                             SolverKind kind, std::uint64_t seed, SolveReport* report = nullptr);

// Factor once, solve many right-hand sides; used for the shared straight-edge
// Vandermonde matrix and for curved edges.
class SquareSolver {
public:
    SquareSolver(const Eigen::MatrixXcd& A, SolverKind kind, std::uint64_t seed);
    Eigen::VectorXcd solve(const Eigen::VectorXcd& b, SolveReport* report = nullptr) const;
    int size() const { return int(A_.rows()); }
    double matrixNorm() const { return norm_; }

private:
    Eigen::MatrixXcd A_;
    SolverKind kind_;
    std::uint64_t seed_;
    double norm_;
    int rank_ = 0;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    Eigen::MatrixXcd U_, V_;
    Eigen::VectorXd s_;
};

// Shared solver for straight-edge traces of order K (K+1 Gauss-Legendre nodes).
const SquareSolver& straightTraceSolver(int K, SolverKind kind, std::uint64_t seed);

// Standardized 2-D fit: pts are already mapped into the element's unit frame.
std::vector<double> fitMonomial2D(const std::vector<cplx>& pts, const std::vector<double>& values,
                                  int N, SolverKind kind, std::uint64_t seed,
                                  SolveReport* report = nullptr);

// 1-D complex monomial fit sum c_k tau^k through (tau_j, v_j), K = size-1.
std::vector<cplx> fitMonomial1D(const std::vector<cplx>& tau, const std::vector<cplx>& values,
                                SolverKind kind, std::uint64_t seed,
                                SolveReport* report = nullptr);

inline cplx evalMonomial1D(const std::vector<cplx>& c, cplx t)
{
    cplx s = 0.0;
    for (size_t k = c.size(); k-- > 0;)
        s = s * t + c[k];
    return s;
}

// Orthonormal Koornwinder (Dubiner) basis on the reference simplex, same
// (m, n) ordering as the monomials.
Eigen::VectorXd koornwinderBasis(int N, double xi, double eta);
Eigen::MatrixXd koornwinderVandermonde(const std::vector<std::array<double, 2>>& pts, int N);

enum class NodeFamily { Chebyshev, GaussLegendre, Triangle };

// A posteriori bound on the floating-point part of the fit error.
// Chebyshev: eps ||a|| 6 (1 + log(N+1)/pi) sqrt(N+1).
// Others: eps (Lambda + 1) ||S||_2 ||a||, Lambda and ||S|| supplied.
double errorEstimate(NodeFamily family, int N, double coeffNorm, double lebesgue = 0.0,
                     double vandermondeNorm = 0.0);

// Chebyshev-node Lebesgue bound (2/pi) log(N+1) + 1.
double chebyshevLebesgueBound(int N);

// Numerical Lebesgue constants, maximized over a dense sample set.
double lebesgueConstant1D(const std::vector<double>& nodes, int samples = 4000);
double lebesgueConstantTri(const std::vector<std::array<double, 2>>& nodes, int N,
                           int lattice = 150);

} // namespace newtpot

#endif
