#include "newtpot/fastsum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <thread>

namespace newtpot {

std::vector<PointSource> toPointSources(const std::vector<FarFieldSource>& src)
{
    std::vector<PointSource> out(src.size());
    for (size_t i = 0; i < src.size(); ++i) {
        out[i].pos = src[i].pos;
        out[i].owner[0] = src[i].owner;
        out[i].charge[0] = src[i].charge;
        out[i].dipole[0] = src[i].dipole;
    }
    return out;
}

std::vector<PointSource> mergeEdgeSources(const std::vector<FarFieldSource>& src)
{
    std::vector<PointSource> out;
    out.reserve(src.size());
    std::map<std::pair<int, int>, size_t> seen;
    for (const FarFieldSource& s : src) {
        if (s.edgeKey >= 0) {
            auto it = seen.find({s.edgeKey, s.edgeNode});
            if (it != seen.end()) {
                PointSource& p = out[it->second];
                const double tol = 1e-12 * std::max(1.0, std::abs(p.pos));
                if (p.owner[1] < 0 && p.owner[0] != s.owner && std::abs(p.pos - s.pos) <= tol) {
                    p.owner[1] = s.owner;
                    p.charge[1] = s.charge;
                    p.dipole[1] = s.dipole;
                    continue;
                }
            } else {
                seen[{s.edgeKey, s.edgeNode}] = out.size();
            }
        }
        PointSource p;
        p.pos = s.pos;
        p.owner[0] = s.owner;
        p.charge[0] = s.charge;
        p.dipole[0] = s.dipole;
        out.push_back(p);
    }
    return out;
}

namespace {

bool excluded(const std::vector<int>* ex, int owner)
{
    return ex && std::binary_search(ex->begin(), ex->end(), owner);
}

// contribution of one source to target t, times 2 pi
double pointValue(const PointSource& s, cplx t, const std::vector<int>* ex)
{
    double v = 0.0;
    const cplx r = t - s.pos;
    bool any = false;
    double q = 0.0;
    cplx d = 0.0;
    for (int k = 0; k < 2; ++k) {
        if (s.owner[k] < 0 || excluded(ex, s.owner[k]))
            continue;
        any = true;
        q += s.charge[k];
        d += s.dipole[k];
    }
    if (!any)
        return 0.0;
    if (r == cplx(0.0))
        throw ValidationError("target coincides with a far-field source");
    v = 0.5 * q * std::log(std::norm(r)) + (d / r).real();
    return v;
}

template <class F>
void parallelFor(int n, int threads, F&& body)
{
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += threads)
                    body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

const std::vector<int>* exclusionFor(const ExclusionLists& ex, size_t t)
{
    return ex.empty() ? nullptr : &ex[t];
}

void checkExclusion(const ExclusionLists& ex, size_t nt)
{
    if (!ex.empty() && ex.size() != nt)
        throw ValidationError("exclusion lists must be empty or one per target");
}

} // namespace

std::vector<double> directSum(const std::vector<PointSource>& src, const std::vector<cplx>& targets,
                              const ExclusionLists& exclusion, int threads)
{
    checkExclusion(exclusion, targets.size());
    std::vector<double> out(targets.size(), 0.0);
    parallelFor(int(targets.size()), threads, [&](int i) {
        const std::vector<int>* ex = exclusionFor(exclusion, i);
        long double s = 0.0L;
        for (const PointSource& p : src)
            s += pointValue(p, targets[i], ex);
        out[i] = double(s / (2.0L * kPi));
    });
    return out;
}

namespace {

struct Box {
    cplx center;      // expansion center (geometric box center)
    double half = 0;  // half side
    double radius = 0; // max distance from center to a source in the box
    int begin = 0, end = 0;
    int child[4] = {-1, -1, -1, -1};
    bool leaf = true;
};

class QuadTree {
public:
    QuadTree(const std::vector<PointSource>& src, const TreeOptions& opt) : src_(src), opt_(opt)
    {
        order_.resize(src.size());
        for (size_t i = 0; i < src.size(); ++i)
            order_[i] = int(i);
        if (src.empty())
            return;
        double x0 = src[0].pos.real(), x1 = x0, y0 = src[0].pos.imag(), y1 = y0;
        for (const auto& s : src) {
            x0 = std::min(x0, s.pos.real());
            x1 = std::max(x1, s.pos.real());
            y0 = std::min(y0, s.pos.imag());
            y1 = std::max(y1, s.pos.imag());
        }
        Box root;
        root.center = cplx(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        root.half = 0.5 * std::max({x1 - x0, y1 - y0, 1e-300}) * (1.0 + 1e-12);
        root.begin = 0;
        root.end = int(src.size());
        boxes_.push_back(root);
        build(0, 0);
        sorted_.reserve(src.size());
        for (int i : order_)
            sorted_.push_back(src[i]);
        coef_.assign(boxes_.size() * size_t(opt_.order + 1), 0.0);
        upward(0);
        // every owner's sources lie in this disk; used for the exclusion test
        for (const auto& s : src)
            for (int k = 0; k < 2; ++k)
                if (s.owner[k] >= 0)
                    ownerPts_[s.owner[k]].push_back(s.pos);
        for (auto& [o, pts] : ownerPts_) {
            cplx c = 0.0;
            for (cplx p : pts)
                c += p;
            c /= double(pts.size());
            double r = 0.0;
            for (cplx p : pts)
                r = std::max(r, std::abs(p - c));
            ownerDisk_[o] = {c, r};
        }
        ownerPts_.clear();
    }

    // Morton-style visiting order for targets, so that consecutive targets
    // walk the same parts of the tree
    std::vector<int> targetOrder(const std::vector<cplx>& targets) const
    {
        std::vector<std::pair<std::uint64_t, int>> keys(targets.size());
        const Box& r = boxes_.empty() ? Box{} : boxes_[0];
        const double h = std::max(r.half, 1e-300);
        for (size_t i = 0; i < targets.size(); ++i) {
            auto cell = [&](double v, double c) {
                const double u = std::clamp((v - c + 2 * h) / (4 * h), 0.0, 1.0);
                return std::uint32_t(u * 65535.0);
            };
            const std::uint32_t x = cell(targets[i].real(), r.center.real());
            const std::uint32_t y = cell(targets[i].imag(), r.center.imag());
            std::uint64_t key = 0;
            for (int b = 15; b >= 0; --b)
                key = (key << 2) | (((y >> b) & 1u) << 1) | ((x >> b) & 1u);
            keys[i] = {key, int(i)};
        }
        std::sort(keys.begin(), keys.end());
        std::vector<int> out(keys.size());
        for (size_t i = 0; i < keys.size(); ++i)
            out[i] = keys[i].second;
        return out;
    }

    double evaluate(cplx t, const std::vector<int>* ex) const
    {
        if (boxes_.empty())
            return 0.0;
        double rho = -1.0; // exclusion disk radius about t
        if (ex)
            for (int o : *ex) {
                auto it = ownerDisk_.find(o);
                if (it != ownerDisk_.end())
                    rho = std::max(rho, std::abs(t - it->second.center) + it->second.radius);
            }
        long double sum = 0.0L;
        int stack[512];
        int top = 0;
        stack[top++] = 0;
        while (top > 0) {
            const int bi = stack[--top];
            const Box& b = boxes_[bi];
            const double dist = std::abs(t - b.center);
            if (b.radius <= opt_.theta * dist && dist - b.radius > rho) {
                sum += multipole(bi, t);
                continue;
            }
            if (b.leaf) {
                for (int i = b.begin; i < b.end; ++i)
                    sum += pointValue(sorted_[i], t, ex);
                continue;
            }
            for (int c : b.child)
                if (c >= 0)
                    stack[top++] = c;
        }
        return double(sum / (2.0L * kPi));
    }

private:
    void build(int bi, int depth)
    {
        Box& b = boxes_[bi];
        if (b.end - b.begin <= opt_.leafCapacity || depth >= 60)
            return;
        const cplx c = b.center;
        const double h = b.half;
        auto quadrant = [&](int idx) {
            const cplx p = src_[idx].pos;
            return (p.real() >= c.real() ? 1 : 0) + (p.imag() >= c.imag() ? 2 : 0);
        };
        // stable four-way partition by quadrant
        int count[4] = {0, 0, 0, 0};
        for (int i = b.begin; i < b.end; ++i)
            ++count[quadrant(order_[i])];
        int next[4] = {b.begin, 0, 0, 0};
        for (int q = 1; q < 4; ++q)
            next[q] = next[q - 1] + count[q - 1];
        scratch_.resize(size_t(b.end - b.begin));
        for (int i = b.begin; i < b.end; ++i) {
            const int q = quadrant(order_[i]);
            scratch_[size_t(next[q] - b.begin)] = order_[i];
            ++next[q];
        }
        std::copy(scratch_.begin(), scratch_.end(), order_.begin() + b.begin);
        int start = b.begin;
        boxes_[bi].leaf = false;
        for (int q = 0; q < 4; ++q) {
            const int stop = start + count[q];
            if (stop > start) {
                Box child;
                child.half = 0.5 * h;
                child.center = c + cplx((q & 1) ? 0.5 * h : -0.5 * h, (q & 2) ? 0.5 * h : -0.5 * h);
                child.begin = start;
                child.end = stop;
                boxes_.push_back(child);
                const int ci = int(boxes_.size()) - 1;
                boxes_[bi].child[q] = ci;
                build(ci, depth + 1);
            }
            start = stop;
        }
    }

    void upward(int bi)
    {
        const int p = opt_.order;
        Box& b0 = boxes_[bi];
        cplx* a = coefficients(bi);
        double r = 0.0;
        for (int i = b0.begin; i < b0.end; ++i)
            r = std::max(r, std::abs(sorted_[i].pos - b0.center));
        b0.radius = r;
        if (b0.leaf) {
            for (int i = b0.begin; i < b0.end; ++i) {
                const PointSource& s = sorted_[i];
                const double q = s.charge[0] + s.charge[1];
                const cplx d = s.dipole[0] + s.dipole[1];
                const cplx z = s.pos - b0.center;
                a[0] += q;
                cplx zk = 1.0; // z^(k-1)
                for (int k = 1; k <= p; ++k) {
                    a[k] += d * zk;
                    zk *= z;
                    a[k] -= q * zk / double(k);
                }
            }
            return;
        }
        for (int c : b0.child) {
            if (c < 0)
                continue;
            upward(c);
            // shift child expansion to this center
            const Box& b = boxes_[bi];
            const Box& ch = boxes_[c];
            const cplx* ca = coefficients(c);
            const cplx z0 = ch.center - b.center;
            std::vector<cplx> zp(p + 1);
            zp[0] = 1.0;
            for (int k = 1; k <= p; ++k)
                zp[k] = zp[k - 1] * z0;
            a[0] += ca[0];
            for (int l = 1; l <= p; ++l) {
                cplx s = -ca[0] * zp[l] / double(l);
                double binom = 1.0; // C(l-1, k-1) for k = 1
                for (int k = 1; k <= l; ++k) {
                    s += ca[k] * zp[l - k] * binom;
                    binom = binom * double(l - k) / double(k);
                }
                a[l] += s;
            }
        }
    }

    cplx* coefficients(int box) { return coef_.data() + size_t(box) * size_t(opt_.order + 1); }
    const cplx* coefficients(int box) const
    {
        return coef_.data() + size_t(box) * size_t(opt_.order + 1);
    }

    double multipole(int box, cplx t) const
    {
        const cplx* a = coefficients(box);
        const cplx w = t - boxes_[box].center;
        const cplx inv = 1.0 / w;
        cplx s = 0.0;
        for (int k = opt_.order; k >= 1; --k)
            s = (s + a[k]) * inv;
        return (a[0] * std::log(w) + s).real();
    }

    struct Disk {
        cplx center;
        double radius;
    };

    const std::vector<PointSource>& src_;
    TreeOptions opt_;
    std::vector<int> order_, scratch_;
    std::vector<PointSource> sorted_; // sources in tree order
    std::vector<Box> boxes_;
    std::vector<cplx> coef_;          // a_0 .. a_p of each box
    std::map<int, std::vector<cplx>> ownerPts_;
    std::map<int, Disk> ownerDisk_;
};

} // namespace

std::vector<double> treeSum(const std::vector<PointSource>& src, const std::vector<cplx>& targets,
                            const ExclusionLists& exclusion, const TreeOptions& opt)
{
    if (opt.order < 10 || opt.order > 200)
        throw ValidationError("multipole order must be in 10..200");
    if (opt.leafCapacity < 1 || !(opt.theta > 0.0 && opt.theta < 1.0))
        throw ValidationError("tree: leaf capacity >= 1 and 0 < theta < 1 required");
    checkExclusion(exclusion, targets.size());
    std::vector<double> out(targets.size(), 0.0);
    if (src.empty() || targets.empty())
        return out;
    const QuadTree tree(src, opt);
    const std::vector<int> visit = tree.targetOrder(targets);
    parallelFor(int(targets.size()), opt.threads, [&](int k) {
        const int i = visit[k];
        out[i] = tree.evaluate(targets[i], exclusionFor(exclusion, i));
    });
    return out;
}

namespace {

class DirectBackend : public FarFieldBackend {
public:
    explicit DirectBackend(int threads) : threads_(threads) {}
    std::string name() const override { return "direct"; }
    std::vector<double> evaluate(const std::vector<PointSource>& src,
                                 const std::vector<cplx>& targets,
                                 const ExclusionLists& exclusion) const override
    {
        return directSum(src, targets, exclusion, threads_);
    }

private:
    int threads_;
};

class TreeBackend : public FarFieldBackend {
public:
    explicit TreeBackend(const TreeOptions& opt) : opt_(opt) {}
    std::string name() const override { return "tree"; }
    std::vector<double> evaluate(const std::vector<PointSource>& src,
                                 const std::vector<cplx>& targets,
                                 const ExclusionLists& exclusion) const override
    {
        return treeSum(src, targets, exclusion, opt_);
    }

private:
    TreeOptions opt_;
};

} // namespace

std::unique_ptr<FarFieldBackend> makeBackend(const std::string& name, const TreeOptions& opt)
{
    if (name == "direct")
        return std::make_unique<DirectBackend>(opt.threads);
    if (name == "tree")
        return std::make_unique<TreeBackend>(opt);
    throw ValidationError("unknown backend '" + name + "' (expected direct or tree)");
}

} // namespace newtpot
