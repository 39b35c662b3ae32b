#include "newtpot/antilap.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "newtpot/approx.hpp"
#include "newtpot/common.hpp"

namespace newtpot {

namespace {

using Poly = std::map<std::pair<int, int>, double>; // (x power, y power) -> coefficient

void addScaled(Poly& dst, const Poly& src, double s)
{
    for (const auto& [k, v] : src)
        dst[k] += s * v;
}

// particular solution for x^i y^j
Poly antiMonomial(int i, int j, BaseConvention conv, std::map<std::pair<int, int>, Poly>& memo)
{
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end())
        return it->second;
    Poly out;
    if (conv == BaseConvention::YFirst && i <= 1 && j <= 1) {
        if (i == 0 && j == 0)
            out[{0, 2}] = 0.5;
        else if (i == 1 && j == 0)
            out[{1, 2}] = 0.5;
        else if (i == 0 && j == 1)
            out[{2, 1}] = 0.5;
        else
            out[{1, 3}] = 1.0 / 6.0;
    } else if (i >= j) {
        const double d = double(i + 2) * (i + 1);
        out[{i + 2, j}] = 1.0 / d;
        if (j >= 2)
            addScaled(out, antiMonomial(i + 2, j - 2, conv, memo), -double(j) * (j - 1) / d);
    } else {
        const double d = double(j + 2) * (j + 1);
        out[{i, j + 2}] = 1.0 / d;
        if (i >= 2)
            addScaled(out, antiMonomial(i - 2, j + 2, conv, memo), -double(i) * (i - 1) / d);
    }
    memo[key] = out;
    return out;
}

} // namespace

AntiLaplacian::AntiLaplacian(int N, BaseConvention conv) : N_(N)
{
    if (N < 0 || N > 40)
        throw ValidationError("AntiLaplacian: order out of range");
    cols_.resize(monoCount(N));
    std::map<std::pair<int, int>, Poly> memo;
    for (int m = 0; m <= N; ++m)
        for (int n = 0; n <= m; ++n) {
            const Poly p = antiMonomial(m - n, n, conv, memo);
            auto& col = cols_[monoIndex(m, n)];
            for (const auto& [k, v] : p)
                if (v != 0.0)
                    col.emplace_back(monoIndex(k.first + k.second, k.second), v);
        }
}

std::vector<double> AntiLaplacian::apply(const std::vector<double>& a) const
{
    if (int(a.size()) != monoCount(N_))
        throw ValidationError("AntiLaplacian::apply: coefficient count mismatch");
    std::vector<double> out(monoCount(N_ + 2), 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (const auto& [row, w] : cols_[i])
            out[row] += w * a[i];
    return out;
}

long AntiLaplacian::nonzeros() const
{
    long n = 0;
    for (const auto& c : cols_)
        n += long(c.size());
    return n;
}

const AntiLaplacian& antiLaplacian(int N, BaseConvention conv)
{
    static std::map<std::pair<int, int>, std::unique_ptr<AntiLaplacian>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(N, int(conv));
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<AntiLaplacian>(N, conv)).first;
    return *it->second;
}

std::vector<double> laplacianOf(const std::vector<double>& c, int N)
{
    const int M = std::max(N - 2, 0);
    std::vector<double> out(monoCount(M), 0.0);
    for (int m = 2; m <= N; ++m)
        for (int n = 0; n <= m; ++n) {
            const double v = c[monoIndex(m, n)];
            const int i = m - n, j = n;
            if (i >= 2)
                out[monoIndex(m - 2, j)] += v * i * (i - 1);
            if (j >= 2)
                out[monoIndex(m - 2, j - 2)] += v * j * (j - 1);
        }
    return out;
}

} // namespace newtpot
