#include "superint/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "superint/errors.hpp"
#include "superint/jet.hpp"
#include "superint/levelset.hpp"
#include "superint/polynomial.hpp"
#include "superint/quadrature.hpp"
#include "superint/special.hpp"

namespace superint {

namespace {

constexpr int kRaySamples = 48;
constexpr int kAxisSamples = 64;
constexpr int kLineSamples = 32;
constexpr int kSupportSamples = 24;
constexpr double kGradientFloor = 1e-8;
constexpr double kProbeTol = 1e-9;
constexpr int kMaxAngularNodes = 200000;

double toleranceFor(const IntegrateOptions& opt, bool generic) {
    if (opt.tolerance > 0) return opt.tolerance;
    return generic ? kGenericTolerance : kRadialTolerance;
}

std::vector<double> findRoots(const std::function<double(double)>& fn, double a, double b, int samples) {
    std::vector<double> roots;
    double xa = a, fa = fn(a);
    if (fa == 0) roots.push_back(a);
    for (int i = 1; i <= samples; ++i) {
        const double xb = a + (b - a) * i / samples, fb = fn(xb);
        if (fb == 0) {
            roots.push_back(xb);
        } else if (fa != 0 && (fa < 0) != (fb < 0)) {
            std::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(fn, xa, xb, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
            roots.push_back(0.5 * (r.first + r.second));
        }
        xa = xb;
        fa = fb;
    }
    return roots;
}

struct Compiled {
    const BosonicIntegralTask* task = nullptr;
    int m = 1;
    CompiledExpr f, g;
    std::vector<CompiledExpr> cons;
    int polyDegree = -1;  // -1 when the integrand is not a polynomial
    double tol = kRadialTolerance;

    Compiled(const BosonicIntegralTask& t, double tolerance) : task(&t), m(t.m), f(t.integrand), g(t.phaseBody), tol(tolerance) {
        for (const auto& c : t.constraints) cons.emplace_back(c);
        if (auto p = toPolynomial(t.integrand)) polyDegree = p->degree();
    }

    bool admissible(const double* x) const {
        for (const auto& c : cons)
            if (c(x) > 0) return false;
        return true;
    }
};

std::vector<JetSeries> linePath(const std::vector<double>& o, const std::vector<double>& d, double t0, int order) {
    std::vector<JetSeries> path;
    path.reserve(o.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
        std::vector<double> c(order + 1, 0.0);
        c[0] = o[i] + t0 * d[i];
        if (order >= 1) c[1] = d[i];
        path.emplace_back(t0, std::move(c));
    }
    return path;
}

// int t^p f(o + t d) delta^(j)(g0(o + t d)) dt near the simple root t*:
// (-1)^j d^j/du^j [F(t(u)) |t'(u)|] at u = 0 with u = g0 along the line
double deltaAtRoot(const Compiled& cc, const std::vector<double>& o, const std::vector<double>& d, double t, int p) {
    const int j = cc.task->order;
    for (int it = 0; it < 3; ++it) {
        const JetSeries G1 = jetEval(cc.g, linePath(o, d, t, 1));
        if (G1.c[1] == 0) break;
        const double dt = -G1.c[0] / G1.c[1];
        t += dt;
        if (std::abs(dt) <= 1e-16 * (1 + std::abs(t))) break;
    }
    const JetSeries G = jetEval(cc.g, linePath(o, d, t, j + 1));
    if (std::abs(G.c[1]) < kGradientFloor) throw DomainError("vanishing gradient of the phase at a root");
    const JetSeries inv = inverseJet(G);
    const JetSeries dtdu = jetDerivative(inv);
    JetSeries F = jetEval(cc.f, linePath(o, d, t, j));
    if (p > 0) F = F * jetIntPow(JetSeries::variable(t, j), p);
    const JetSeries H = composeJet(F, inv) * dtdu;
    const double v = H.derivative(j) * (inv.c[1] > 0 ? 1 : -1);
    return j % 2 ? -v : v;
}

// int_0^T t^p f D(g0) prod H(-c) along x = o + t d
QuadResult rayIntegral(const Compiled& cc, const std::vector<double>& o, const std::vector<double>& d, double T, int p,
                       const std::vector<double>* knownRoots) {
    const BosonicIntegralTask& task = *cc.task;
    std::vector<double> x(cc.m);
    auto at = [&](double t) {
        for (int i = 0; i < cc.m; ++i) x[i] = o[i] + t * d[i];
        return x.data();
    };
    auto gl = [&](double t) { return cc.g(at(t)); };
    std::vector<double> roots = knownRoots ? *knownRoots : findRoots(gl, 0, T, kRaySamples);
    std::erase_if(roots, [&](double r) { return r <= 0 || r > T; });
    QuadResult out;
    if (task.delta) {
        for (double r : roots) {
            if (!cc.admissible(at(r))) continue;
            out.value += deltaAtRoot(cc, o, d, r, p);
        }
        return out;
    }
    std::vector<double> cuts{0, T};
    cuts.insert(cuts.end(), roots.begin(), roots.end());
    for (const auto& c : cc.cons) {
        auto cr = findRoots([&](double t) { return c(at(t)); }, 0, T, kRaySamples);
        cuts.insert(cuts.end(), cr.begin(), cr.end());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto integrand = [&](double t) {
        const double w = p > 0 ? std::pow(t, p) : 1.0;
        return w * cc.f(at(t));
    };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (b - a <= 0) continue;
        const double mid = 0.5 * (a + b);
        const double* xm = at(mid);
        if (!(task.heavisideSign * cc.g(xm) > 0) || !cc.admissible(xm)) continue;
        if (b == T) throw DomainError("the integration region reaches the domain box");
        if (cc.polyDegree >= 0) {
            out.value += gaussLegendreIntegrate(integrand, a, b, (cc.polyDegree + p) / 2 + 1);
        } else {
            auto r = adaptiveGK(integrand, a, b, 1e-3 * cc.tol, 1e-13);
            out.value += r.value;
            out.error += r.error;
        }
    }
    return out;
}

double boxExit(const Box& box, const std::vector<double>& c, const std::vector<double>& d) {
    double T = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] > 0) T = std::min(T, (box.hi[i] - c[i]) / d[i]);
        if (d[i] < 0) T = std::min(T, (box.lo[i] - c[i]) / d[i]);
    }
    return T;
}

double inscribedRadius(const Box& box, const std::vector<double>& c, const std::vector<int>& dims) {
    double r = std::numeric_limits<double>::infinity();
    for (int i : dims) r = std::min({r, box.hi[i] - c[i], c[i] - box.lo[i]});
    return r;
}

// sum_k w_k value(dir_k) over sphere rules of growing degree until two successive rules agree
template <class Fn>
QuadResult angularSum(int dim, int exactDegree, double tol, int threads, Fn value) {
    auto run = [&](int degree) {
        const SphereRule& rule = sphereRule(dim, degree);
        std::vector<QuadResult> parts(rule.w.size());
        parallelFor(rule.w.size(), threads, [&](std::size_t i) { parts[i] = value(rule.dirs[i]); });
        QuadResult s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            s.value += rule.w[i] * parts[i].value;
            s.error += rule.w[i] * parts[i].error;
        }
        return std::make_pair(s, rule.w.size());
    };
    if (exactDegree >= 0) return run(exactDegree).first;
    auto [prev, n] = run(8);
    for (int degree = 16;; degree *= 2) {
        auto [cur, nodes] = run(degree);
        const double diff = std::abs(cur.value - prev.value);
        if (diff <= tol * (1 + std::abs(cur.value))) {
            cur.error += diff;
            return cur;
        }
        if (nodes * (dim > 1 ? (dim == 2 ? 2 : 4) : 1) > static_cast<std::size_t>(kMaxAngularNodes)) {
            cur.error += diff;
            return cur;
        }
        prev = cur;
    }
}

std::vector<double> embedDirection(const std::vector<double>& w, const std::vector<int>& dims, int m) {
    std::vector<double> d(m, 0.0);
    for (std::size_t i = 0; i < dims.size(); ++i) d[dims[i]] = w[i];
    return d;
}

IntegralResult polarBackend(const BosonicIntegralTask& task, const IntegrateOptions& opt) {
    const int m = task.m;
    std::vector<double> c = opt.center.empty() ? std::vector<double>(m, 0.0) : opt.center;
    if (static_cast<int>(c.size()) != m) throw ParameterError("center dimension does not match m");
    if (!task.box.contains(c)) throw DomainError("the polar center lies outside the domain box");
    Compiled cc(task, toleranceFor(opt, false));
    std::vector<int> all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    const double spread = inscribedRadius(task.box, c, all);
    const bool radialPhase = isRadialAbout(task.phaseBody, m, c, spread);
    bool radialRest = isRadialAbout(task.integrand, m, c, spread);
    for (const auto& con : task.constraints) radialRest = radialRest && isRadialAbout(con, m, c, spread);
    std::vector<double> roots;
    if (radialPhase) {
        std::vector<double> e1(m, 0.0);
        e1[0] = 1;
        roots = findRoots([&](double t) {
                              std::vector<double> x = c;
                              x[0] += t;
                              return cc.g(x.data());
                          },
                          0, spread, kRaySamples);
    }
    const std::vector<double>* known = radialPhase ? &roots : nullptr;
    IntegralResult res;
    res.backend = "radial";
    res.taskCount = 1;
    if (radialPhase && radialRest) {
        std::vector<double> e1(m, 0.0);
        e1[0] = 1;
        const QuadResult r = rayIntegral(cc, c, e1, spread, m - 1, known);
        const double A = sphereArea(m);
        res.value = A * r.value;
        res.errorEstimate = A * r.error;
        return res;
    }
    const int exact = (radialPhase && task.constraints.empty() && cc.polyDegree >= 0) ? cc.polyDegree : -1;
    const QuadResult r = angularSum(m, exact, cc.tol, opt.threads, [&](const std::vector<double>& w) {
        return rayIntegral(cc, c, w, boxExit(task.box, c, w), m - 1, known);
    });
    res.value = r.value;
    res.errorEstimate = r.error;
    return res;
}

IntegralResult axialBackend(const BosonicIntegralTask& task, const IntegrateOptions& opt) {
    const int m = task.m;
    if (m < 2) throw UnsupportedError("the axial backend needs m >= 2");
    const int k = task.axis > 0 ? task.axis - 1 : m - 1;
    std::vector<int> others;
    for (int i = 0; i < m; ++i)
        if (i != k) others.push_back(i);
    for (int i : others)
        if (!(task.box.lo[i] < 0 && task.box.hi[i] > 0)) throw DomainError("the axial backend needs the axis inside the box");
    Compiled cc(task, toleranceFor(opt, false));
    const bool axialIntegrand = isAxialAbout(task.integrand, m, k + 1, inscribedRadius(task.box, std::vector<double>(m, 0.0), others));
    const int exact = cc.polyDegree >= 0 ? cc.polyDegree : -1;
    auto inner = [&](double z) {
        std::vector<double> o(m, 0.0);
        o[k] = z;
        if (axialIntegrand) {
            std::vector<double> d(m, 0.0);
            d[others[0]] = 1;
            const QuadResult r = rayIntegral(cc, o, d, boxExit(task.box, o, d), m - 2, nullptr);
            return QuadResult{sphereArea(m - 1) * r.value, sphereArea(m - 1) * r.error};
        }
        return angularSum(m - 1, exact, cc.tol, 1, [&](const std::vector<double>& w) {
            const std::vector<double> d = embedDirection(w, others, m);
            return rayIntegral(cc, o, d, boxExit(task.box, o, d), m - 2, nullptr);
        });
    };
    // outer breakpoints: where the phase or a constraint changes sign on the axis
    const double lo = task.box.lo[k], hi = task.box.hi[k];
    std::vector<double> cuts{lo, hi};
    auto onAxis = [&](const CompiledExpr& e) {
        return [&e, k, m](double z) {
            std::vector<double> x(m, 0.0);
            x[k] = z;
            return e(x.data());
        };
    };
    auto gr = findRoots(onAxis(cc.g), lo, hi, kAxisSamples);
    cuts.insert(cuts.end(), gr.begin(), gr.end());
    for (const auto& c : cc.cons) {
        auto cr = findRoots(onAxis(c), lo, hi, kAxisSamples);
        cuts.insert(cuts.end(), cr.begin(), cr.end());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<QuadResult> parts(cuts.size() - 1);
    parallelFor(parts.size(), opt.threads, [&](std::size_t i) {
        double innerErr = 0;
        auto r = smoothstepGK(
            [&](double z) {
                const QuadResult q = inner(z);
                innerErr = std::max(innerErr, q.error);
                return q.value;
            },
            cuts[i], cuts[i + 1], 0.1 * cc.tol, 1e-13);
        parts[i] = {r.value, r.error + innerErr * (cuts[i + 1] - cuts[i])};
    });
    IntegralResult res;
    res.backend = "axial";
    res.taskCount = 1;
    for (const auto& p : parts) {
        res.value += p.value;
        res.errorEstimate += p.error;
    }
    return res;
}

IntegralResult levelsetBackend(const BosonicIntegralTask& task, const IntegrateOptions& opt) {
    if (!task.delta) throw UnsupportedError("the level-set backend integrates delta terms only");
    if (task.order > 2) throw UnsupportedError("the level-set backend supports delta orders up to 2");
    const LevelsetProblem p = LevelsetProblem::make(task.m, task.phaseBody, task.integrand, task.constraints, task.box);
    const int cells = opt.levelsetCells > 0 ? opt.levelsetCells : (task.m == 2 ? 256 : 40);
    const QuadResult r = levelsetDelta(p, task.order, cells);
    return {r.value, r.error, "levelset", 1};
}

// moments of all monomials up to a degree over {s g0 > 0, c_i <= 0} inside the box
struct MomentKey {
    std::string region;
    int degree;
    bool operator<(const MomentKey& o) const { return std::tie(region, degree) < std::tie(o.region, o.degree); }
};

std::vector<Monomial> monomialsUpTo(int m, int degree) {
    std::vector<Monomial> out;
    Monomial cur(m, 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
        if (i == m) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[i] = e;
            self(self, i + 1, left - e);
        }
        cur[i] = 0;
    };
    rec(rec, 0, degree);
    return out;
}

// nested adaptive Gauss-Kronrod over the first m-1 coordinates; the last coordinate is cut
// exactly at the sign changes of the phase and the constraints. Each outer level first locates
// the support of its slices, then integrates every support interval with a smoothstep change
// of variables that absorbs the square-root behaviour at the ends.
std::vector<double> gridIntegrate(const Compiled& cc, std::size_t dim,
                                  const std::function<void(const double*, double, std::vector<double>&)>& accumulate,
                                  int lineNodes, double absTol, double* error) {
    const BosonicIntegralTask& task = *cc.task;
    const int m = task.m;
    const std::size_t D = dim + 1;  // the last channel carries the slice measure
    std::vector<double> x(m, 0.0);
    double err = 0;
    std::function<void(int, std::vector<double>&)> level = [&](int i, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        const double lo = task.box.lo[i], hi = task.box.hi[i];
        if (i == m - 1) {
            auto along = [&](const CompiledExpr& e) {
                return [&](double t) {
                    x[i] = t;
                    return e(x.data());
                };
            };
            std::vector<double> cuts{lo, hi};
            auto gr = findRoots(along(cc.g), lo, hi, kLineSamples);
            cuts.insert(cuts.end(), gr.begin(), gr.end());
            for (const auto& c : cc.cons) {
                auto cr = findRoots(along(c), lo, hi, kLineSamples);
                cuts.insert(cuts.end(), cr.begin(), cr.end());
            }
            std::sort(cuts.begin(), cuts.end());
            const Rule1D& rule = gaussLegendre(lineNodes);
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                const double a = cuts[k], b = cuts[k + 1];
                if (b <= a) continue;
                x[i] = 0.5 * (a + b);
                if (!(task.heavisideSign * cc.g(x.data()) > 0) || !cc.admissible(x.data())) continue;
                if (a == lo || b == hi) throw DomainError("the integration region reaches the domain box");
                const double c = 0.5 * (a + b), h = 0.5 * (b - a);
                for (std::size_t q = 0; q < rule.x.size(); ++q) {
                    x[i] = c + h * rule.x[q];
                    accumulate(x.data(), h * rule.w[q], out);
                    out[dim] += h * rule.w[q];
                }
            }
            return;
        }
        std::vector<double> buf(D);
        auto live = [&](double t) {
            x[i] = t;
            level(i + 1, buf);
            return buf[dim] > 0;
        };
        std::vector<char> alive(kSupportSamples + 1);
        for (int k = 0; k <= kSupportSamples; ++k) alive[k] = live(lo + (hi - lo) * k / kSupportSamples);
        if (alive.front() || alive.back()) throw DomainError("the integration region reaches the domain box");
        auto edge = [&](double dead, double in) {
            for (int it = 0; it < 60 && std::abs(in - dead) > 1e-14 * (hi - lo); ++it) {
                const double mid = 0.5 * (dead + in);
                (live(mid) ? in : dead) = mid;
            }
            return 0.5 * (dead + in);
        };
        for (int k = 1; k <= kSupportSamples; ++k) {
            if (!alive[k] || alive[k - 1]) continue;
            int e = k;
            while (alive[e + 1]) ++e;
            const double a = edge(lo + (hi - lo) * (k - 1) / kSupportSamples, lo + (hi - lo) * k / kSupportSamples);
            const double b = edge(lo + (hi - lo) * (e + 1) / kSupportSamples, lo + (hi - lo) * e / kSupportSamples);
            const double L = b - a;
            double pe = 0;
            auto v = adaptiveGKVec(
                [&](double u, std::vector<double>& o) {
                    x[i] = a + L * u * u * (3 - 2 * u);
                    level(i + 1, o);
                    const double jac = 6 * L * u * (1 - u);
                    for (double& z : o) z *= jac;
                },
                D, 0, 1, absTol, 1e-12, 24, &pe);
            for (std::size_t d = 0; d < D; ++d) out[d] += v[d];
            if (i == 0) err += pe;
            k = e;
        }
    };
    std::vector<double> out(D, 0.0);
    level(0, out);
    if (error) *error = err;
    out.pop_back();
    return out;
}

std::string regionKey(const BosonicIntegralTask& t) {
    std::ostringstream os;
    os.precision(17);
    os << t.m << '|' << print(t.phaseBody) << '|' << t.heavisideSign;
    for (const auto& c : t.constraints) os << '|' << print(c);
    for (int i = 0; i < t.box.dim(); ++i) os << '|' << t.box.lo[i] << ',' << t.box.hi[i];
    return os.str();
}

IntegralResult gridBackend(const BosonicIntegralTask& task, const IntegrateOptions& opt) {
    if (task.delta) throw UnsupportedError("the grid backend integrates Heaviside terms only");
    Compiled cc(task, toleranceFor(opt, true));
    const double absTol = 1e-3 * cc.tol;
    IntegralResult res;
    res.backend = "grid";
    res.taskCount = 1;
    if (cc.polyDegree < 0) {
        double err = 0;
        auto v = gridIntegrate(
            cc, 1, [&](const double* x, double w, std::vector<double>& out) { out[0] += w * cc.f(x); }, 12, absTol, &err);
        res.value = v[0];
        res.errorEstimate = err;
        return res;
    }
    // polynomial integrands reuse cached monomial moments of the region
    static std::mutex mu;
    static std::map<MomentKey, std::pair<std::vector<double>, double>> cache;
    // degrees are bucketed so that related integrands share one moment table
    const int degree = 4 * ((std::max(cc.polyDegree, 1) + 3) / 4);
    const MomentKey key{regionKey(task), degree};
    const std::vector<Monomial> monos = monomialsUpTo(task.m, degree);
    std::pair<std::vector<double>, double> moments;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) moments = it->second;
    }
    if (moments.first.empty()) {
        double err = 0;
        auto v = gridIntegrate(
            cc, monos.size(),
            [&](const double* x, double w, std::vector<double>& out) {
                for (std::size_t k = 0; k < monos.size(); ++k) {
                    double p = w;
                    for (int i = 0; i < task.m; ++i)
                        for (int e = 0; e < monos[k][i]; ++e) p *= x[i];
                    out[k] += p;
                }
            },
            degree / 2 + 2, absTol, &err);
        moments = {v, err};
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(key, moments);
    }
    const Polynomial poly = *toPolynomial(task.integrand);
    for (auto& [mono, c] : poly.terms()) {
        Monomial full(task.m, 0);
        for (std::size_t i = 0; i < mono.size(); ++i) full[i] = mono[i];
        const auto pos = std::find(monos.begin(), monos.end(), full);
        res.value += static_cast<double>(c) * moments.first[pos - monos.begin()];
        res.errorEstimate += std::abs(static_cast<double>(c)) * moments.second;
    }
    return res;
}

bool sameValue(double a, double b) { return std::abs(a - b) <= kProbeTol * (1 + std::abs(a) + std::abs(b)); }

std::vector<ScalarExpr> constraintsOf(const std::vector<SuperFunction>& cs) {
    std::vector<ScalarExpr> out;
    for (const auto& c : cs) out.push_back(bosonicConstraint(c));
    return out;
}

const Box& requireBox(const IntegrateOptions& opt, int m) {
    if (!opt.box) throw ParameterError("a domain box is required");
    if (opt.box->dim() != m) throw ParameterError("box dimension does not match m");
    return *opt.box;
}

}  // namespace

std::string backendName(Backend b) {
    switch (b) {
        case Backend::Auto: return "auto";
        case Backend::Radial: return "radial";
        case Backend::Axial: return "axial";
        case Backend::Levelset: return "levelset";
        case Backend::Grid: return "grid";
    }
    return "?";
}

Backend parseBackend(std::string_view s) {
    for (Backend b : {Backend::Auto, Backend::Radial, Backend::Axial, Backend::Levelset, Backend::Grid})
        if (backendName(b) == s) return b;
    throw ParameterError("unknown backend '" + std::string(s) + "'");
}

std::string symmetryName(Symmetry s) {
    switch (s) {
        case Symmetry::Radial: return "RADIAL";
        case Symmetry::Axial: return "AXIAL";
        case Symmetry::Generic: return "GENERIC";
    }
    return "?";
}

bool isRadialAbout(const ScalarExpr& e, int m, const std::vector<double>& center, double spread) {
    if (e.isConst()) return true;
    std::mt19937 rng(12345);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.1, 0.9);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> dir(m);
        double n2 = 0;
        for (double& v : dir) {
            v = nd(rng);
            n2 += v * v;
        }
        const double r = ud(rng) * spread, s = std::sqrt(n2);
        std::vector<double> x(center), y(center);
        for (int i = 0; i < m; ++i) x[i] += r * dir[i] / s;
        y[0] += r;
        double a, b;
        try {
            a = e.evalAt(x);
            b = e.evalAt(y);
        } catch (const Error&) {
            return false;
        }
        if (!std::isfinite(a) || !std::isfinite(b) || !sameValue(a, b)) return false;
    }
    return true;
}

bool isAxialAbout(const ScalarExpr& e, int m, int axis, double spread) {
    if (e.isConst()) return true;
    if (m < 2) return false;
    const int k = axis - 1, j = k == 0 ? 1 : 0;
    std::mt19937 rng(54321);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.1, 0.9), uz(-1, 1);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> x(m), y(m, 0.0);
        double n2 = 0;
        for (int i = 0; i < m; ++i)
            if (i != k) {
                x[i] = nd(rng);
                n2 += x[i] * x[i];
            }
        const double s = ud(rng) * spread, scale = s / std::sqrt(n2), z = uz(rng) * spread;
        for (int i = 0; i < m; ++i) x[i] *= scale;
        x[k] = y[k] = z;
        y[j] = s;
        double a, b;
        try {
            a = e.evalAt(x);
            b = e.evalAt(y);
        } catch (const Error&) {
            return false;
        }
        if (!std::isfinite(a) || !std::isfinite(b) || !sameValue(a, b)) return false;
    }
    return true;
}

void classify(BosonicIntegralTask& t, int preferredAxis) {
    const std::vector<double> origin(t.m, 0.0);
    std::vector<int> all(t.m);
    for (int i = 0; i < t.m; ++i) all[i] = i;
    const double spread = std::max(1e-3, inscribedRadius(t.box, origin, all));
    bool radial = isRadialAbout(t.phaseBody, t.m, origin, spread);
    for (const auto& c : t.constraints) radial = radial && isRadialAbout(c, t.m, origin, spread);
    if (radial) {
        t.symmetry = Symmetry::Radial;
        t.axis = 0;
        return;
    }
    std::vector<int> axes;
    if (preferredAxis > 0) axes.push_back(preferredAxis);
    for (int k = t.m; k >= 1; --k)
        if (k != preferredAxis) axes.push_back(k);
    for (int k : axes) {
        if (t.m < 2) break;
        bool axial = isAxialAbout(t.phaseBody, t.m, k, spread);
        for (const auto& c : t.constraints) axial = axial && isAxialAbout(c, t.m, k, spread);
        if (axial) {
            t.symmetry = Symmetry::Axial;
            t.axis = k;
            return;
        }
    }
    t.symmetry = Symmetry::Generic;
    t.axis = 0;
}

std::vector<BosonicIntegralTask> berezinReduce(const DistributionExpansion& d0, const SuperFunction& F,
                                               const std::vector<ScalarExpr>& constraints, const Box& box) {
    const DistributionExpansion d = multiplySF(d0, F);
    const SuperContext& ctx = d.ctx;
    const Blade top = ctx.topBlade();
    const double scale = std::pow(std::numbers::pi, -ctx.n);
    std::vector<BosonicIntegralTask> out;
    auto push = [&](const SuperFunction& c, bool delta, int order) {
        ScalarExpr e = canonical(c.component(top));
        if (e.isZero()) return;
        BosonicIntegralTask t;
        t.m = ctx.m;
        t.integrand = e;
        t.scale = scale;
        t.phaseBody = d.phaseBody;
        t.delta = delta;
        t.order = order;
        t.heavisideSign = d.phaseSign;
        t.constraints = constraints;
        t.box = box;
        classify(t);
        out.push_back(std::move(t));
    };
    if (d.heaviside) push(*d.heaviside, false, 0);
    for (auto& [j, c] : d.deltaTerms) push(c, true, j);
    return out;
}

std::map<CliffordKey, std::vector<BosonicIntegralTask>> berezinReduce(const CliffordExpansion& d,
                                                                      const std::vector<ScalarExpr>& constraints, const Box& box) {
    std::set<CliffordKey> keys;
    if (d.heaviside)
        for (auto& [k, c] : d.heaviside->terms()) keys.insert(k);
    for (auto& [j, c] : d.deltaTerms)
        for (auto& [k, cc] : c.terms()) keys.insert(k);
    std::map<CliffordKey, std::vector<BosonicIntegralTask>> out;
    const SuperFunction one(d.ctx, ScalarExpr(1));
    for (const CliffordKey& k : keys) {
        DistributionExpansion part{d.ctx, d.phaseBody, d.phaseSign, std::nullopt, {}};
        if (d.heaviside) part.heaviside = d.heaviside->component(k.first, k.second);
        for (auto& [j, c] : d.deltaTerms) part.deltaTerms.emplace(j, c.component(k.first, k.second));
        auto tasks = berezinReduce(part, one, constraints, box);
        if (!tasks.empty()) out.emplace(k, std::move(tasks));
    }
    return out;
}

IntegralResult evaluate(const BosonicIntegralTask& t, const IntegrateOptions& opt) {
    if (t.integrand.isZero()) return {0, 0, "none", 1};
    if (t.box.dim() != t.m) throw ParameterError("task box dimension does not match m");
    Backend b = opt.backend;
    if (b == Backend::Auto) {
        if (!opt.center.empty()) {
            b = Backend::Radial;
        } else if (t.symmetry == Symmetry::Radial) {
            b = Backend::Radial;
        } else if (t.symmetry == Symmetry::Axial) {
            b = Backend::Axial;
        } else if (t.delta) {
            b = Backend::Levelset;
        } else {
            b = Backend::Grid;
        }
    }
    // delta terms have no grid rule; they go to the best layer backend
    if (b == Backend::Grid && t.delta)
        b = t.symmetry == Symmetry::Radial ? Backend::Radial : t.symmetry == Symmetry::Axial ? Backend::Axial : Backend::Levelset;
    IntegralResult r;
    switch (b) {
        case Backend::Radial: r = polarBackend(t, opt); break;
        case Backend::Axial: {
            BosonicIntegralTask a = t;
            if (opt.axis > 0) a.axis = opt.axis;
            r = axialBackend(a, opt);
            break;
        }
        case Backend::Levelset: r = levelsetBackend(t, opt); break;
        case Backend::Grid: r = gridBackend(t, opt); break;
        case Backend::Auto: break;
    }
    r.value *= t.scale;
    r.errorEstimate *= std::abs(t.scale);
    if (!std::isfinite(r.value)) throw QuadratureError("non-finite integral value");
    return r;
}

IntegralResult evaluateAll(const std::vector<BosonicIntegralTask>& ts, const IntegrateOptions& opt) {
    IntegralResult out;
    std::set<std::string> names;
    for (const auto& t : ts) {
        const IntegralResult r = evaluate(t, opt);
        out.value += r.value;
        out.errorEstimate += r.errorEstimate;
        out.taskCount += 1;
        names.insert(r.backend);
    }
    for (const auto& n : names) out.backend += (out.backend.empty() ? "" : "+") + n;
    if (out.backend.empty()) out.backend = "none";
    return out;
}

ScalarExpr bosonicConstraint(const SuperFunction& c) {
    if (!c.nilpotent().isZero()) throw ParityError("constraints must be purely bosonic");
    return c.body();
}

IntegralResult domainIntegral(const SuperFunction& g, const SuperFunction& F, const std::vector<SuperFunction>& constraints,
                              const IntegrateOptions& opt) {
    const Box& box = requireBox(opt, g.context().m);
    const auto tasks = berezinReduce(expandHeaviside(g, -1), F, constraintsOf(constraints), box);
    return evaluateAll(tasks, opt);
}

namespace {

// W with x_k replaced by the even superfunction S of the reduced context, by Taylor expansion
// in the nilpotent part of S; the remaining bosonic coordinates shift down past k
SuperFunction substituteCoordinate(const SuperFunction& W, int k, const SuperFunction& S) {
    const SuperContext& target = S.context();
    const int m = W.context().m;
    std::vector<ScalarExpr> subs;
    for (int j = 1; j <= m; ++j) subs.push_back(j < k ? ScalarExpr::var(j) : j == k ? S.body() : ScalarExpr::var(j - 1));
    const SuperFunction nil = S.nilpotent();
    SuperFunction out(target);
    for (auto& [blade, e] : W.terms()) {
        SuperFunction sum(target), power(target, ScalarExpr(1));
        ScalarExpr d = e;
        double fact = 1;
        for (int j = 0; !power.isZero(); ++j) {
            if (j > 0) {
                d = diff(d, k);
                fact *= j;
                power = power * nil;
            }
            if (d.isZero()) break;
            sum = sum + SuperFunction(target, substitute(d, subs)).scaled(ScalarExpr(1 / fact)) * power;
        }
        out = out + sum * SuperFunction::monomial(target, blade, ScalarExpr(1));
    }
    return out;
}

// a coordinate in which g = a x_k + G with a constant a != 0 and G free of x_k
std::optional<std::pair<int, double>> linearCoordinate(const SuperFunction& g) {
    for (int k = g.context().m; k >= 1; --k) {
        const SuperFunction d = bosPartial(g, k);
        if (d.terms().size() != 1 || !d.nilpotent().isZero()) continue;
        const auto p = toPolynomial(d.body());
        if (!p || p->degree() != 0) continue;
        const double a = evalAt(d.body(), std::vector<double>(g.context().m, 0.0));
        if (a != 0) return std::make_pair(k, a);
    }
    return std::nullopt;
}

}  // namespace

IntegralResult surfaceIntegral(const SuperFunction& g, const SuperFunction& F, const std::vector<SuperFunction>& constraints,
                               const IntegrateOptions& opt) {
    const Box& box = requireBox(opt, g.context().m);
    const SuperContext& ctx = g.context();
    // A phase linear in x_k is eliminated exactly: int dx_k delta(a x_k + G) W = W(x_k = -G/a) / |a|.
    // The constraints then carry the Grassmann dependence and bound a domain one dimension lower,
    // which keeps rim and apex contributions that a layered evaluation would split ambiguously.
    if (ctx.m >= 2 && !constraints.empty())
        if (auto lin = linearCoordinate(g)) {
            const auto [k, a] = *lin;
            for (const auto& c : constraints) bosonicConstraint(c);
            const SuperContext low(ctx.m - 1, ctx.n);
            const SuperFunction xk = SuperFunction::coordinate(ctx, k);
            const SuperFunction G = g - xk.scaled(ScalarExpr(a));
            // G is free of x_k, so substituting anything for x_k only renames coordinates
            const SuperFunction S = substituteCoordinate(G, k, SuperFunction(low)).scaled(ScalarExpr(-1 / a));
            const SuperFunction W = substituteCoordinate(modulusSF(superGradient(g)) * F, k, S);
            std::vector<SuperFunction> cs;
            for (const auto& c : constraints) cs.push_back(substituteCoordinate(c, k, S));
            // the first constraint with Grassmann terms bounds the domain; the others must stay bosonic
            auto phase = std::find_if(cs.begin(), cs.end(), [](const SuperFunction& c) { return !c.nilpotent().isZero(); });
            if (phase == cs.end()) phase = cs.begin();
            const SuperFunction lowPhase = *phase;
            cs.erase(phase);
            IntegrateOptions o = opt;
            Box b;
            for (int j = 0; j < ctx.m; ++j)
                if (j != k - 1) {
                    b.lo.push_back(box.lo[j]);
                    b.hi.push_back(box.hi[j]);
                }
            o.box = b;
            if (!o.center.empty()) o.center.erase(o.center.begin() + (k - 1));
            o.axis = opt.axis == k ? 0 : opt.axis > k ? opt.axis - 1 : opt.axis;
            IntegralResult r = domainIntegral(lowPhase, W, cs, o);
            r.value /= std::abs(a);
            r.errorEstimate /= std::abs(a);
            return r;
        }
    const SuperFunction weight = modulusSF(superGradient(g));
    const auto tasks = berezinReduce(multiplySF(expandDelta(g, 0), weight), F, constraintsOf(constraints), box);
    return evaluateAll(tasks, opt);
}

std::map<CliffordKey, IntegralResult> orientedSurfaceIntegral(const SuperFunction& g, const SuperFunction& F,
                                                              const std::vector<SuperFunction>& constraints,
                                                              const IntegrateOptions& opt) {
    const Box& box = requireBox(opt, g.context().m);
    const MixedCliffordElement weight = -(embed(superGradient(g)) * MixedCliffordElement::scalar(F));
    const CliffordExpansion ce = expandDelta(g, 0) * weight;
    std::map<CliffordKey, IntegralResult> out;
    for (auto& [k, tasks] : berezinReduce(ce, constraintsOf(constraints), box)) out.emplace(k, evaluateAll(tasks, opt));
    return out;
}

std::pair<double, double> pizzettiCompare(const SuperFunction& p) {
    const SuperContext& ctx = p.context();
    const SuperFunction g = -superSquare(ctx) - SuperFunction(ctx, ScalarExpr(1));
    IntegrateOptions opt;
    opt.box = Box::cube(ctx.m, 1.5);
    return {pizzetti(p), surfaceIntegral(g, p, {}, opt).value};
}

ShapeProblem shapeProblem(Shape s, int m, int n, double param) {
    if (m < 1 || n < 0) throw ParameterError("invalid (m, n)");
    if (!(param > 0)) throw ParameterError("shape parameter must be positive");
    const SuperContext ctx(m, n);
    const SuperFunction one(ctx, ScalarExpr(1));
    const SuperFunction X2 = superSquare(ctx);
    ShapeProblem p;
    if (s == Shape::Superball || s == Shape::Supersphere) {
        p.g = -X2 - SuperFunction(ctx, ScalarExpr(param * param));
        p.box = Box::cube(m, 1.25 * param + 0.25);
        return p;
    }
    if (m < 2) throw ParameterError("paraboloid and hyperboloid need m >= 2");
    const SuperFunction xm(ctx, ScalarExpr::var(m));
    // x^^2 = x^2 + x_m^2
    const SuperFunction hat2 = X2 + xm * xm;
    p.box.lo.assign(m, 0.0);
    p.box.hi.assign(m, 0.0);
    double radius, zlo, zhi;
    if (s == Shape::Paraboloid) {
        p.g = -hat2 - xm;
        p.constraints.push_back(xm - SuperFunction(ctx, ScalarExpr(param)));
        radius = std::sqrt(param);
        zlo = -0.25 * (1 + param);
        zhi = 1.25 * param + 0.25;
    } else {
        p.g = -hat2 - xm * xm - one;
        p.constraints.push_back(xm * xm - SuperFunction(ctx, ScalarExpr(param * param)));
        radius = std::sqrt(1 + param * param);
        zhi = 1.25 * param + 0.25;
        zlo = -zhi;
    }
    for (int i = 0; i < m - 1; ++i) {
        p.box.lo[i] = -(1.25 * radius + 0.25);
        p.box.hi[i] = 1.25 * radius + 0.25;
    }
    p.box.lo[m - 1] = zlo;
    p.box.hi[m - 1] = zhi;
    return p;
}

IntegralResult shapeIntegral(Shape s, Kind k, int m, int n, double param, IntegrateOptions opt) {
    const ShapeProblem p = shapeProblem(s, m, n, param);
    if (!opt.box) opt.box = p.box;
    const SuperFunction one(p.g.context(), ScalarExpr(1));
    return k == Kind::Volume ? domainIntegral(p.g, one, p.constraints, opt) : surfaceIntegral(p.g, one, p.constraints, opt);
}

}  // namespace superint
