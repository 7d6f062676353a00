#include "superint/levelset.hpp"

#include <array>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "superint/errors.hpp"

namespace superint {

namespace {

using Point = std::array<double, 3>;

struct Sampler {
    const LevelsetProblem& p;
    double t;

    double phase(const Point& x) const { return p.g(x.data()) - t; }

    // f / |grad g| with the constraint indicator
    double weight(const Point& x) const {
        for (const auto& c : p.constraints)
            if (c(x.data()) > 0) return 0;
        double n2 = 0;
        for (const auto& d : p.grad) {
            const double v = d(x.data());
            n2 += v * v;
        }
        if (n2 < 1e-24) throw DomainError("vanishing gradient on the level set");
        return p.f(x.data()) / std::sqrt(n2);
    }

    // level-set point on the segment a-b, given phase values of opposite sign
    Point crossing(const Point& a, const Point& b, double va, double vb) const {
        if (va == 0) return a;
        if (vb == 0) return b;
        auto along = [&](double s) {
            Point x;
            for (int i = 0; i < 3; ++i) x[i] = a[i] + s * (b[i] - a[i]);
            return x;
        };
        std::uintmax_t iters = 40;
        auto r = boost::math::tools::toms748_solve([&](double s) { return phase(along(s)); }, 0.0, 1.0, va, vb,
                                                   boost::math::tools::eps_tolerance<double>(45), iters);
        return along(0.5 * (r.first + r.second));
    }
};

double dist(const Point& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double triangleArea(const Point& a, const Point& b, const Point& c) {
    const Point u{b[0] - a[0], b[1] - a[1], b[2] - a[2]}, v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const Point w{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    return 0.5 * std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
}

double marchingSquares(const Sampler& s, int N) {
    const Box& box = s.p.box;
    const double hx = (box.hi[0] - box.lo[0]) / N, hy = (box.hi[1] - box.lo[1]) / N;
    auto node = [&](int i, int j) { return Point{box.lo[0] + i * hx, box.lo[1] + j * hy, 0}; };
    std::vector<double> v((N + 1) * (N + 1));
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) v[i * (N + 1) + j] = s.phase(node(i, j));
    auto val = [&](int i, int j) { return v[i * (N + 1) + j]; };
    double total = 0;
    auto segment = [&](const Point& a, const Point& b) { total += dist(a, b) * 0.5 * (s.weight(a) + s.weight(b)); };
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const std::array<Point, 4> P{node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
            const std::array<double, 4> V{val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)};
            int mask = 0;
            for (int k = 0; k < 4; ++k) mask |= (V[k] >= 0) << k;
            if (mask == 0 || mask == 15) continue;
            std::array<Point, 4> X;
            std::array<bool, 4> cut{};
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                if ((V[a] >= 0) != (V[b] >= 0)) {
                    cut[e] = true;
                    X[e] = s.crossing(P[a], P[b], V[a], V[b]);
                }
            }
            if (mask == 5 || mask == 10) {
                // saddle: the centre value decides which corners are joined
                Point c{0.5 * (P[0][0] + P[2][0]), 0.5 * (P[0][1] + P[2][1]), 0};
                const bool centreLikeP0 = (s.phase(c) >= 0) == (V[0] >= 0);
                if (centreLikeP0) {
                    segment(X[0], X[1]);
                    segment(X[2], X[3]);
                } else {
                    segment(X[3], X[0]);
                    segment(X[1], X[2]);
                }
                continue;
            }
            int first = -1;
            for (int e = 0; e < 4; ++e)
                if (cut[e]) {
                    if (first < 0) {
                        first = e;
                    } else {
                        segment(X[first], X[e]);
                    }
                }
        }
    return total;
}

double marchingTetrahedra(const Sampler& s, int N) {
    const Box& box = s.p.box;
    const double h[3] = {(box.hi[0] - box.lo[0]) / N, (box.hi[1] - box.lo[1]) / N, (box.hi[2] - box.lo[2]) / N};
    const int S = N + 1;
    auto node = [&](int i, int j, int k) { return Point{box.lo[0] + i * h[0], box.lo[1] + j * h[1], box.lo[2] + k * h[2]}; };
    std::vector<double> v(static_cast<std::size_t>(S) * S * S);
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            for (int k = 0; k < S; ++k) v[(static_cast<std::size_t>(i) * S + j) * S + k] = s.phase(node(i, j, k));
    auto val = [&](int i, int j, int k) { return v[(static_cast<std::size_t>(i) * S + j) * S + k]; };
    // Freudenthal split: one tetrahedron per axis permutation
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    double total = 0;
    auto tri = [&](const Point& a, const Point& b, const Point& c) {
        total += triangleArea(a, b, c) * (s.weight(a) + s.weight(b) + s.weight(c)) / 3;
    };
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                bool pos = false, neg = false;
                for (int c = 0; c < 8; ++c) {
                    const double x = val(i + (c & 1), j + (c >> 1 & 1), k + (c >> 2 & 1));
                    (x >= 0 ? pos : neg) = true;
                }
                if (!(pos && neg)) continue;
                for (const auto& pm : perms) {
                    std::array<int, 3> off{0, 0, 0};
                    std::array<Point, 4> P;
                    std::array<double, 4> V;
                    for (int q = 0; q < 4; ++q) {
                        if (q > 0) off[pm[q - 1]] = 1;
                        P[q] = node(i + off[0], j + off[1], k + off[2]);
                        V[q] = val(i + off[0], j + off[1], k + off[2]);
                    }
                    std::vector<int> in, out;
                    for (int q = 0; q < 4; ++q) (V[q] >= 0 ? in : out).push_back(q);
                    if (in.empty() || out.empty()) continue;
                    auto X = [&](int a, int b) { return s.crossing(P[a], P[b], V[a], V[b]); };
                    if (in.size() == 1 || out.size() == 1) {
                        const auto& lone = in.size() == 1 ? in : out;
                        const auto& rest = in.size() == 1 ? out : in;
                        tri(X(lone[0], rest[0]), X(lone[0], rest[1]), X(lone[0], rest[2]));
                    } else {
                        const int a = in[0], b = in[1], c = out[0], d = out[1];
                        const Point ac = X(a, c), ad = X(a, d), bd = X(b, d), bc = X(b, c);
                        tri(ac, ad, bd);
                        tri(ac, bd, bc);
                    }
                }
            }
    return total;
}

}  // namespace

LevelsetProblem LevelsetProblem::make(int m, const ScalarExpr& g, const ScalarExpr& f, const std::vector<ScalarExpr>& constraints,
                                      const Box& box) {
    if (m != 2 && m != 3) throw UnsupportedError("level-set contouring supports m = 2 and m = 3");
    if (box.dim() != m) throw ParameterError("box dimension does not match m");
    LevelsetProblem p;
    p.m = m;
    p.g = CompiledExpr(g);
    for (int i = 1; i <= m; ++i) p.grad.emplace_back(diff(g, i));
    p.f = CompiledExpr(f);
    for (const auto& c : constraints) p.constraints.emplace_back(c);
    p.box = box;
    return p;
}

double layerFunction(const LevelsetProblem& p, double t, int cells) {
    Sampler s{p, t};
    return p.m == 2 ? marchingSquares(s, cells) : marchingTetrahedra(s, cells);
}

double layerFunctionRichardson(const LevelsetProblem& p, double t, int cells) {
    return (4 * layerFunction(p, t, 2 * cells) - layerFunction(p, t, cells)) / 3;
}

QuadResult levelsetDelta(const LevelsetProblem& p, int order, int cells) {
    if (order < 0 || order > 2) throw UnsupportedError("level-set backend supports delta orders up to 2");
    auto L = [&](double t) { return layerFunctionRichardson(p, t, cells); };
    if (order == 0) {
        const double a = L(0), b = layerFunction(p, 0, 2 * cells);
        return {a, std::abs(a - b)};
    }
    double width = 0;
    for (int i = 0; i < p.m; ++i) width = std::max(width, p.box.hi[i] - p.box.lo[i]);
    // step from the surface resolution, as h^(1/(j+2)) scaled to the box
    const double res = 1.0 / cells;
    const double dt = width * std::pow(res, 1.0 / (order + 2)) * 0.1;
    auto D = [&](double s) {
        if (order == 1) return (L(s) - L(-s)) / (2 * s);
        return (L(s) - 2 * L(0) + L(-s)) / (s * s);
    };
    const double coarse = D(dt), fine = D(dt / 2);
    const double v = (4 * fine - coarse) / 3;
    return {order % 2 ? -v : v, std::abs(fine - coarse)};
}

}  // namespace superint
