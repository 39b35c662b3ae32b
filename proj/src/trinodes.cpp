#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "newtpot/approx.hpp"
#include "newtpot/quadrule.hpp"

namespace newtpot {

std::string dataDirectory()
{
    if (const char* env = std::getenv("NEWTPOT_DATA_DIR"))
        return env;
    return NEWTPOT_DATA_DIR;
}

namespace {

// approximate Fekete points: column-pivoted QR on the transposed Koornwinder
// Vandermonde of a fine lattice pulled slightly toward the centroid
std::vector<std::array<double, 2>> feketeNodes(int N)
{
    const int M = 120;
    const double shrink = 1.0 - 1e-3;
    std::vector<std::array<double, 2>> cand;
    for (int j = 0; j <= M; ++j)
        for (int i = 0; i + j <= M; ++i) {
            const double xi = double(i) / M, eta = double(j) / M;
            cand.push_back({1.0 / 3.0 + (xi - 1.0 / 3.0) * shrink,
                            1.0 / 3.0 + (eta - 1.0 / 3.0) * shrink});
        }
    Eigen::MatrixXd Vt = koornwinderVandermonde(cand, N).transpose();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Vt);
    const auto& perm = qr.colsPermutation().indices();
    std::vector<std::array<double, 2>> nodes;
    for (int k = 0; k < monoCount(N); ++k)
        nodes.push_back(cand[perm(k)]);
    return nodes;
}

void toBary(const std::array<double, 3>& u, double& x, double& y)
{
    const double m = std::max({u[0], u[1], u[2]});
    const double e0 = std::exp(u[0] - m), e1 = std::exp(u[1] - m), e2 = std::exp(u[2] - m);
    const double s = e0 + e1 + e2;
    x = e1 / s;
    y = e2 / s;
}

// Moves the nodes (Gauss-Newton, minimum-norm steps) until the rule they
// carry integrates total degree D exactly. Positions go through a softmax so
// they can never leave the open simplex.
bool quadratureRefine(std::vector<std::array<double, 2>>& nodes, int D,
                      std::vector<double>& weights)
{
    const int M = int(nodes.size()), C = monoCount(D);
    const TriRule& q = triQuadrature(D + 2);
    Eigen::VectorXd mom = Eigen::VectorXd::Zero(C);
    for (size_t j = 0; j < q.w.size(); ++j)
        mom += q.w[j] * koornwinderBasis(D, q.p[j][0], q.p[j][1]);

    Eigen::MatrixXd A(C, M);
    for (int j = 0; j < M; ++j)
        A.col(j) = koornwinderBasis(D, nodes[j][0], nodes[j][1]);
    Eigen::VectorXd w = A.completeOrthogonalDecomposition().solve(mom);
    std::vector<std::array<double, 3>> U(M);
    for (int j = 0; j < M; ++j) {
        const double x = nodes[j][0], y = nodes[j][1], z = 1.0 - x - y;
        U[j] = {0.0, std::log(x / z), std::log(y / z)};
    }
    bool converged = false;
    Eigen::MatrixXd J(C, 3 * M);
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXd r = -mom;
        for (int j = 0; j < M; ++j) {
            double x, y;
            toBary(U[j], x, y);
            const Eigen::VectorXd P = koornwinderBasis(D, x, y);
            r += w[j] * P;
            J.col(3 * j) = P;
            for (int k = 1; k < 3; ++k) {
                const double h = 1e-6;
                auto up = U[j], um = U[j];
                up[k] += h;
                um[k] -= h;
                double xp, yp, xm, ym;
                toBary(up, xp, yp);
                toBary(um, xm, ym);
                J.col(3 * j + k) =
                    w[j] * (koornwinderBasis(D, xp, yp) - koornwinderBasis(D, xm, ym)) / (2 * h);
            }
        }
        if (r.norm() < 1e-13) {
            converged = true;
            break;
        }
        const Eigen::VectorXd dx = J.completeOrthogonalDecomposition().solve(r);
        const double s = std::min(1.0, 0.5 / dx.cwiseAbs().maxCoeff());
        for (int j = 0; j < M; ++j) {
            w[j] -= s * dx[3 * j];
            U[j][1] -= s * dx[3 * j + 1];
            U[j][2] -= s * dx[3 * j + 2];
        }
    }
    if (!converged)
        return false;
    for (int j = 0; j < M; ++j)
        toBary(U[j], nodes[j][0], nodes[j][1]);
    weights.assign(w.data(), w.data() + M);
    return true;
}

} // namespace

TriNodeSet computeFallbackTriNodes(int N)
{
    TriNodeSet s;
    s.order = N;
    s.source = "computed";
    if (N == 0) {
        s.nodes.push_back({1.0 / 3.0, 1.0 / 3.0});
        return s;
    }
    s.nodes = feketeNodes(N);
    // Pull toward a node set that doubles as an interior quadrature rule of
    // the highest degree we can reach without hurting interpolation.
    // Interpolation errors then integrate to almost nothing against smooth
    // kernels, which is what the potential sees.
    const double base = lebesgueConstantTri(s.nodes, N, 60);
    for (int D = (3 * N) / 2; D > N; --D) {
        auto nodes = s.nodes;
        std::vector<double> w;
        if (!quadratureRefine(nodes, D, w))
            continue;
        double absSum = 0.0;
        for (double v : w)
            absSum += std::abs(v);
        if (absSum > 0.75) // area 1/2; keep the rule close to positive
            continue;
        bool interior = true;
        for (const auto& p : nodes)
            interior = interior && std::min({p[0], p[1], 1.0 - p[0] - p[1]}) > 1e-6;
        if (!interior || lebesgueConstantTri(nodes, N, 60) > 1.2 * base)
            continue;
        s.nodes = nodes;
        s.quadratureDegree = D;
        break;
    }
    std::sort(s.nodes.begin(), s.nodes.end(), [](const auto& a, const auto& b) {
        return a[1] != b[1] ? a[1] < b[1] : a[0] < b[0];
    });
    return s;
}

namespace {

bool loadTable(const std::string& path, int N, TriNodeSet& out)
{
    std::ifstream in(path);
    if (!in)
        return false;
    std::string line;
    std::vector<std::array<double, 2>> nodes;
    int degree = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            if (ls >> key && key == "quadrature-degree")
                ls >> degree;
            continue;
        }
        if (line.empty())
            continue;
        std::istringstream ls(line);
        double a, b;
        if (!(ls >> a >> b))
            throw ValidationError("malformed node table " + path);
        nodes.push_back({a, b});
    }
    if (int(nodes.size()) != monoCount(N))
        throw ValidationError("node table " + path + " has the wrong number of nodes");
    for (const auto& p : nodes)
        if (!(p[0] > 0.0 && p[1] > 0.0 && p[0] + p[1] < 1.0))
            throw ValidationError("node table " + path + " has a node outside the open simplex");
    out.order = N;
    out.nodes = std::move(nodes);
    out.source = path;
    out.quadratureDegree = degree;
    return true;
}

TriNodeSet buildTriNodes(int N)
{
    TriNodeSet s;
    const std::string dir = dataDirectory();
    if (loadTable(dir + "/vr_nodes_" + std::to_string(N) + ".txt", N, s)) {
        s.fromTable = true;
        return s;
    }
    if (loadTable(dir + "/tri_nodes_" + std::to_string(N) + ".txt", N, s))
        return s;
    return computeFallbackTriNodes(N);
}

} // namespace

const TriNodeSet& triNodes(int N)
{
    if (N < 0 || N > 20)
        throw ValidationError("triNodes: order must be in 0..20, got " + std::to_string(N));
    static std::map<int, std::unique_ptr<TriNodeSet>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it == cache.end())
        it = cache.emplace(N, std::make_unique<TriNodeSet>(buildTriNodes(N))).first;
    return *it->second;
}

} // namespace newtpot
