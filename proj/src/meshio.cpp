#include <cstdio>
#include <fstream>
#include <sstream>

#include "newtpot/geom.hpp"

namespace newtpot {

namespace {

class LineReader {
public:
    explicit LineReader(const std::string& text) : in_(text) {}

    // next non-empty, non-comment line split into tokens
    std::vector<std::string> next(const char* what)
    {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineNo_;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            std::vector<std::string> tok;
            std::string t;
            while (ls >> t)
                tok.push_back(t);
            if (!tok.empty())
                return tok;
        }
        throw ValidationError(std::string("mesh: unexpected end of file while reading ") + what);
    }
    int line() const { return lineNo_; }
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ValidationError("mesh line " + std::to_string(lineNo_) + ": " + msg);
    }

private:
    std::istringstream in_;
    int lineNo_ = 0;
};

double toDouble(const LineReader& r, const std::string& s)
{
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            r.fail("bad number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        r.fail("bad number '" + s + "'");
    }
}

long toInt(const LineReader& r, const std::string& s)
{
    try {
        size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size())
            r.fail("bad integer '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        r.fail("bad integer '" + s + "'");
    }
}

int section(LineReader& r, const char* tag)
{
    auto tok = r.next(tag);
    if (tok.size() != 2 || tok[0] != tag)
        r.fail(std::string("expected '") + tag + " <count>'");
    const long n = toInt(r, tok[1]);
    if (n < 0)
        r.fail("negative count");
    return int(n);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Mesh parseMesh(const std::string& text)
{
    LineReader r(text);
    auto head = r.next("header");
    if (head.size() != 2 || head[0] != "NEWTPOT-MESH" || head[1] != "v1")
        r.fail("expected header 'NEWTPOT-MESH v1'");
    Mesh m;
    const int nv = section(r, "V");
    for (int i = 0; i < nv; ++i) {
        auto t = r.next("vertex");
        if (t.size() != 2)
            r.fail("vertex line needs 'x y'");
        m.vertices.emplace_back(toDouble(r, t[0]), toDouble(r, t[1]));
    }
    const int ne = section(r, "E");
    for (int i = 0; i < ne; ++i) {
        auto t = r.next("edge");
        MeshEdge e;
        if (t[0] == "straight") {
            if (t.size() != 3)
                r.fail("straight edge needs 'straight i j'");
            e.v0 = int(toInt(r, t[1]));
            e.v1 = int(toInt(r, t[2]));
        } else if (t[0] == "curved") {
            if (t.size() < 5)
                r.fail("curved edge needs 'curved i j k deg re im ...'");
            e.curved = true;
            e.v0 = int(toInt(r, t[1]));
            e.v1 = int(toInt(r, t[2]));
            e.hint = int(toInt(r, t[3]));
            const long deg = toInt(r, t[4]);
            if (deg < 1 || deg > 256)
                r.fail("curved edge degree out of range");
            if (long(t.size()) != 5 + 2 * (deg + 1))
                r.fail("curved edge has the wrong number of coefficients");
            std::vector<cplx> c;
            for (long k = 0; k <= deg; ++k)
                c.emplace_back(toDouble(r, t[5 + 2 * k]), toDouble(r, t[6 + 2 * k]));
            e.curve = ChebCurve(std::move(c));
        } else {
            r.fail("unknown edge kind '" + t[0] + "'");
        }
        m.edges.push_back(std::move(e));
    }
    const int nt = section(r, "T");
    for (int i = 0; i < nt; ++i) {
        auto t = r.next("triangle");
        if (t.size() != 3)
            r.fail("triangle line needs three signed edge indices");
        std::array<EdgeRef, 3> tri;
        for (int k = 0; k < 3; ++k) {
            std::string s = t[k];
            bool rev = false;
            if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
                rev = s[0] == '-';
                s.erase(0, 1);
            }
            const long idx = toInt(r, s);
            if (idx < 0)
                r.fail("edge index must be non-negative");
            tri[k] = EdgeRef{int(idx), rev};
        }
        m.triangles.push_back(tri);
    }
    validateMesh(m);
    return m;
}

Mesh readMesh(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open mesh file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parseMesh(ss.str());
}

std::string formatMesh(const Mesh& m)
{
    std::ostringstream o;
    o << "NEWTPOT-MESH v1\n";
    o << "V " << m.vertices.size() << "\n";
    for (cplx v : m.vertices)
        o << fmt(v.real()) << " " << fmt(v.imag()) << "\n";
    o << "E " << m.edges.size() << "\n";
    for (const MeshEdge& e : m.edges) {
        if (!e.curved) {
            o << "straight " << e.v0 << " " << e.v1 << "\n";
            continue;
        }
        o << "curved " << e.v0 << " " << e.v1 << " " << e.hint << " " << e.curve.degree();
        for (cplx c : e.curve.coeffs())
            o << " " << fmt(c.real()) << " " << fmt(c.imag());
        o << "\n";
    }
    o << "T " << m.triangles.size() << "\n";
    for (const auto& t : m.triangles) {
        for (int k = 0; k < 3; ++k)
            o << (k ? " " : "") << (t[k].reversed ? '-' : '+') << t[k].edge;
        o << "\n";
    }
    return o.str();
}

void writeMesh(const Mesh& m, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write mesh file '" + path + "'");
    out << formatMesh(m);
}

} // namespace newtpot
