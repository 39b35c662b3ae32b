#include "newtpot/approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "newtpot/quadrule.hpp"

namespace newtpot {

double evalMonomial2D(const std::vector<double>& a, int N, cplx p)
{
    double xp[64], yp[64];
    xp[0] = yp[0] = 1.0;
    for (int k = 1; k <= N; ++k) {
        xp[k] = xp[k - 1] * p.real();
        yp[k] = yp[k - 1] * p.imag();
    }
    double s = 0.0;
    int idx = 0;
    for (int m = 0; m <= N; ++m)
        for (int n = 0; n <= m; ++n)
            s += a[idx++] * xp[m - n] * yp[n];
    return s;
}

double evalMonomial2D(const std::vector<double>& a, int N, cplx p, double& dx, double& dy)
{
    double xp[64], yp[64];
    xp[0] = yp[0] = 1.0;
    for (int k = 1; k <= N; ++k) {
        xp[k] = xp[k - 1] * p.real();
        yp[k] = yp[k - 1] * p.imag();
    }
    double s = 0.0;
    dx = dy = 0.0;
    int idx = 0;
    for (int m = 0; m <= N; ++m)
        for (int n = 0; n <= m; ++n, ++idx) {
            const int i = m - n;
            s += a[idx] * xp[i] * yp[n];
            if (i > 0)
                dx += a[idx] * i * xp[i - 1] * yp[n];
            if (n > 0)
                dy += a[idx] * n * xp[i] * yp[n - 1];
        }
    return s;
}

Eigen::MatrixXd vandermonde2D(const std::vector<cplx>& pts, int N)
{
    const int M = monoCount(N);
    Eigen::MatrixXd A(pts.size(), M);
    for (size_t r = 0; r < pts.size(); ++r) {
        const double x = pts[r].real(), y = pts[r].imag();
        int idx = 0;
        for (int m = 0; m <= N; ++m)
            for (int n = 0; n <= m; ++n)
                A(r, idx++) = std::pow(x, m - n) * std::pow(y, n);
    }
    return A;
}

const char* solverName(SolverKind k)
{
    return k == SolverKind::TruncatedSVD ? "tsvd" : "plu";
}

SolverKind parseSolver(const std::string& s)
{
    if (s == "tsvd")
        return SolverKind::TruncatedSVD;
    if (s == "plu")
        return SolverKind::PollutedLU;
    throw ValidationError("unknown solver '" + s + "' (expected tsvd or plu)");
}

namespace {

std::mutex statsMu;
SolverStats stats;

void recordSolve(const SolveReport& r)
{
    std::lock_guard<std::mutex> lock(statsMu);
    ++stats.solves;
    if (!r.residualContractHolds)
        ++stats.violations;
    const double denom = kEps * r.matrixNorm * r.solutionNorm;
    if (denom > 0.0)
        stats.worstRatio = std::max(stats.worstRatio, r.residualNorm / denom);
}

template <class Mat>
double powerNorm(const Mat& A, int iterations)
{
    using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
    XorShift64 rng(0x5eedull);
    Vec v(A.cols());
    for (int i = 0; i < v.size(); ++i)
        v(i) = 0.5 + rng.uniform();
    v.normalize();
    for (int it = 0; it < iterations; ++it) {
        Vec w = A.adjoint() * (A * v);
        const double nw = w.norm();
        if (nw == 0.0)
            return 0.0;
        v = w / nw;
    }
    return (A * v).norm();
}

template <class Vec, class Mat>
double residualNorm(const Mat& A, const Vec& x, const Vec& b)
{
    long double s = 0.0L;
    for (int i = 0; i < A.rows(); ++i) {
        long double re = 0.0L, im = 0.0L;
        for (int j = 0; j < A.cols(); ++j) {
            const std::complex<double> a = A(i, j), xj = x(j);
            re += (long double)a.real() * xj.real() - (long double)a.imag() * xj.imag();
            im += (long double)a.real() * xj.imag() + (long double)a.imag() * xj.real();
        }
        const std::complex<double> bi = b(i);
        re -= bi.real();
        im -= bi.imag();
        s += re * re + im * im;
    }
    return double(std::sqrt(s));
}

template <class Mat>
Mat pollution(const Mat& A, double normA, std::uint64_t seed)
{
    XorShift64 rng(seed);
    Mat E(A.rows(), A.cols());
    for (int j = 0; j < E.cols(); ++j)
        for (int i = 0; i < E.rows(); ++i) {
            if constexpr (std::is_same_v<typename Mat::Scalar, double>)
                E(i, j) = rng.uniform(-1.0, 1.0);
            else
                E(i, j) = typename Mat::Scalar(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        }
    const double nE = powerNorm(E, 20);
    if (nE > 0.0)
        E *= kEps * normA / nE;
    return E;
}

template <class Mat, class Vec>
Vec solveImpl(const Mat& A, const Vec& b, SolverKind kind, std::uint64_t seed, SolveReport* report)
{
    if (A.rows() != A.cols() || A.rows() != b.size())
        throw ValidationError("solveSquare: system must be square and match the right-hand side");
    SolveReport r;
    r.seed = seed;
    r.matrixNorm = powerNorm(A, 20);
    Vec x;
    if (kind == SolverKind::PollutedLU) {
        Mat Ap = A + pollution(A, r.matrixNorm, seed);
        x = Eigen::PartialPivLU<Mat>(Ap).solve(b);
        r.rank = int(A.rows());
    } else {
        Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        const double cut = 3.0 * kEps * (s.size() ? s(0) : 0.0);
        int keep = 0;
        while (keep < s.size() && s(keep) > cut)
            ++keep;
        Vec c = svd.matrixU().leftCols(keep).adjoint() * b;
        for (int i = 0; i < keep; ++i)
            c(i) /= s(i);
        x = svd.matrixV().leftCols(keep) * c;
        r.rank = keep;
    }
    r.solutionNorm = x.norm();
    r.residualNorm = residualNorm(A, x, b);
    r.residualContractHolds = r.residualNorm <= 10.0 * kEps * r.matrixNorm * r.solutionNorm;
    recordSolve(r);
    if (report)
        *report = r;
    return x;
}

} // namespace

SolverStats solverStats()
{
    std::lock_guard<std::mutex> lock(statsMu);
    return stats;
}

void resetSolverStats()
{
    std::lock_guard<std::mutex> lock(statsMu);
    stats = SolverStats{};
}

double spectralNormEstimate(const Eigen::MatrixXd& A, int iterations)
{
    return powerNorm(A, iterations);
}

double spectralNormEstimate(const Eigen::MatrixXcd& A, int iterations)
{
    return powerNorm(A, iterations);
}

Eigen::VectorXd solveSquare(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, SolverKind kind,
                            std::uint64_t seed, SolveReport* report)
{
    return solveImpl(A, b, kind, seed, report);
}

Eigen::VectorXcd solveSquare(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                             SolverKind kind, std::uint64_t seed, SolveReport* report)
{
    return solveImpl(A, b, kind, seed, report);
}

SquareSolver::SquareSolver(const Eigen::MatrixXcd& A, SolverKind kind, std::uint64_t seed)
    : A_(A), kind_(kind), seed_(seed)
{
    if (A.rows() != A.cols())
        throw ValidationError("SquareSolver: matrix must be square");
    norm_ = powerNorm(A_, 20);
    if (kind == SolverKind::PollutedLU) {
        lu_.compute(A_ + pollution(A_, norm_, seed));
        rank_ = int(A.rows());
    } else {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(A_, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        const double cut = 3.0 * kEps * (s.size() ? s(0) : 0.0);
        int keep = 0;
        while (keep < s.size() && s(keep) > cut)
            ++keep;
        U_ = svd.matrixU().leftCols(keep);
        V_ = svd.matrixV().leftCols(keep);
        s_ = s.head(keep);
        rank_ = keep;
    }
}

Eigen::VectorXcd SquareSolver::solve(const Eigen::VectorXcd& b, SolveReport* report) const
{
    Eigen::VectorXcd x;
    if (kind_ == SolverKind::PollutedLU) {
        x = lu_.solve(b);
    } else {
        Eigen::VectorXcd c = U_.adjoint() * b;
        for (int i = 0; i < c.size(); ++i)
            c(i) /= s_(i);
        x = V_ * c;
    }
    SolveReport r;
    r.seed = seed_;
    r.matrixNorm = norm_;
    r.rank = rank_;
    r.solutionNorm = x.norm();
    r.residualNorm = residualNorm(A_, x, b);
    r.residualContractHolds = r.residualNorm <= 10.0 * kEps * r.matrixNorm * r.solutionNorm;
    recordSolve(r);
    if (report)
        *report = r;
    return x;
}

const SquareSolver& straightTraceSolver(int K, SolverKind kind, std::uint64_t seed)
{
    static std::map<std::tuple<int, int, std::uint64_t>, std::unique_ptr<SquareSolver>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(K, int(kind), seed);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const Rule1D& g = gaussLegendre(K + 1);
        Eigen::MatrixXcd A(K + 1, K + 1);
        for (int j = 0; j <= K; ++j) {
            double p = 1.0;
            for (int k = 0; k <= K; ++k, p *= g.x[j])
                A(j, k) = p;
        }
        it = cache.emplace(key, std::make_unique<SquareSolver>(A, kind, seed)).first;
    }
    return *it->second;
}

std::vector<double> fitMonomial2D(const std::vector<cplx>& pts, const std::vector<double>& values,
                                  int N, SolverKind kind, std::uint64_t seed, SolveReport* report)
{
    if (int(pts.size()) != monoCount(N) || values.size() != pts.size())
        throw ValidationError("fitMonomial2D: need exactly (N+1)(N+2)/2 samples");
    Eigen::MatrixXd A = vandermonde2D(pts, N);
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
    Eigen::VectorXd x = solveSquare(A, b, kind, seed, report);
    return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<cplx> fitMonomial1D(const std::vector<cplx>& tau, const std::vector<cplx>& values,
                                SolverKind kind, std::uint64_t seed, SolveReport* report)
{
    const int n = int(tau.size());
    if (n == 0 || values.size() != tau.size())
        throw ValidationError("fitMonomial1D: node and value counts differ");
    Eigen::MatrixXcd A(n, n);
    for (int j = 0; j < n; ++j) {
        cplx p = 1.0;
        for (int k = 0; k < n; ++k, p *= tau[j])
            A(j, k) = p;
    }
    Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(values.data(), n);
    Eigen::VectorXcd x = solveSquare(A, b, kind, seed, report);
    return std::vector<cplx>(x.data(), x.data() + n);
}

namespace {

double jacobiP(int n, double alpha, double x)
{
    // beta = 0 throughout
    if (n == 0)
        return 1.0;
    double p0 = 1.0;
    double p1 = (alpha + 1.0) + (alpha + 2.0) * (x - 1.0) / 2.0;
    for (int k = 2; k <= n; ++k) {
        const double ab = alpha;
        const double c = 2.0 * k + ab;
        const double a1 = 2.0 * k * (k + ab) * (c - 2.0);
        const double a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha);
        const double a3 = 2.0 * (k + alpha - 1.0) * (k - 1.0) * c;
        const double p2 = (a2 * p1 - a3 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

} // namespace

Eigen::VectorXd koornwinderBasis(int N, double xi, double eta)
{
    Eigen::VectorXd out(monoCount(N));
    // scaled Legendre t^i P_i(x/t) with x = 2 xi - 1 + eta, t = 1 - eta
    const double x = 2.0 * xi - 1.0 + eta, t = 1.0 - eta;
    std::vector<double> Q(N + 1);
    Q[0] = 1.0;
    if (N >= 1)
        Q[1] = x;
    for (int k = 1; k < N; ++k)
        Q[k + 1] = ((2 * k + 1) * x * Q[k] - k * t * t * Q[k - 1]) / (k + 1);
    const double b = 2.0 * eta - 1.0;
    int idx = 0;
    for (int m = 0; m <= N; ++m)
        for (int n = 0; n <= m; ++n) {
            const int i = m - n, j = n;
            const double c = std::sqrt(2.0 * (2 * i + 1) * (i + j + 1));
            out(idx++) = c * Q[i] * jacobiP(j, 2.0 * i + 1.0, b);
        }
    return out;
}

Eigen::MatrixXd koornwinderVandermonde(const std::vector<std::array<double, 2>>& pts, int N)
{
    Eigen::MatrixXd V(pts.size(), monoCount(N));
    for (size_t r = 0; r < pts.size(); ++r)
        V.row(r) = koornwinderBasis(N, pts[r][0], pts[r][1]).transpose();
    return V;
}

double chebyshevLebesgueBound(int N)
{
    return 2.0 / kPi * std::log(N + 1.0) + 1.0;
}

double errorEstimate(NodeFamily family, int N, double coeffNorm, double lebesgue,
                     double vandermondeNorm)
{
    if (family == NodeFamily::Chebyshev)
        return kEps * coeffNorm * 6.0 * (1.0 + std::log(N + 1.0) / kPi) * std::sqrt(N + 1.0);
    return kEps * (lebesgue + 1.0) * vandermondeNorm * coeffNorm;
}

double lebesgueConstant1D(const std::vector<double>& nodes, int samples)
{
    const int n = int(nodes.size());
    std::vector<double> wb(n, 1.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (k != j)
                wb[j] /= (nodes[j] - nodes[k]);
    double best = 0.0;
    for (int s = 0; s <= samples; ++s) {
        const double x = -1.0 + 2.0 * s / samples;
        double num = 0.0, den = 0.0;
        bool hit = false;
        for (int j = 0; j < n; ++j) {
            const double d = x - nodes[j];
            if (d == 0.0) {
                hit = true;
                break;
            }
            num += std::abs(wb[j] / d);
            den += wb[j] / d;
        }
        if (!hit)
            best = std::max(best, num / std::abs(den));
        else
            best = std::max(best, 1.0);
    }
    return best;
}

double lebesgueConstantTri(const std::vector<std::array<double, 2>>& nodes, int N, int lattice)
{
    Eigen::MatrixXd V = koornwinderVandermonde(nodes, N);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(V.transpose());
    double best = 0.0;
    for (int i = 0; i <= lattice; ++i)
        for (int j = 0; i + j <= lattice; ++j) {
            Eigen::VectorXd k = koornwinderBasis(N, double(i) / lattice, double(j) / lattice);
            best = std::max(best, lu.solve(k).lpNorm<1>());
        }
    return best;
}

} // namespace newtpot
