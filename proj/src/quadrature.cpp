#include "superint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "superint/errors.hpp"

namespace superint {

namespace {

std::mutex& ruleMutex() {
    static std::mutex m;
    return m;
}

Rule1D golubWelsch(int n, double alpha, double beta) {
    if (n < 1) throw ParameterError("quadrature rule needs at least one node");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double s = 2 * k + ab;
        J(k, k) = (k == 0 || s == 0) ? (beta - alpha) / (ab + 2) : (beta * beta - alpha * alpha) / (s * (s + 2));
        if (k + 1 < n) {
            const double j = k + 1, t = 2 * j + ab;
            const double b2 = 4 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1) * (t - 1));
            J(k, k + 1) = J(k + 1, k) = std::sqrt(b2);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::pow(2.0, ab + 1) * boost::math::tgamma(alpha + 1) * boost::math::tgamma(beta + 1) /
                       boost::math::tgamma(ab + 2);
    Rule1D r;
    for (int k = 0; k < n; ++k) {
        r.x.push_back(es.eigenvalues()(k));
        const double v = es.eigenvectors()(0, k);
        r.w.push_back(mu0 * v * v);
    }
    return r;
}

struct Interval {
    double a, b;
    std::vector<double> value;
    double error;
};

void gk15(const std::function<void(double, std::vector<double>&)>& f, std::size_t dim, Interval& iv) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    static const auto& xk = GK::abscissa();
    static const auto& wk = GK::weights();
    static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
    const double c = 0.5 * (iv.a + iv.b), h = 0.5 * (iv.b - iv.a);
    std::vector<double> k(dim, 0.0), g(dim, 0.0), buf(dim);
    for (std::size_t i = 0; i < xk.size(); ++i) {
        const int signs = xk[i] == 0 ? 1 : 2;
        for (int s = 0; s < signs; ++s) {
            const double x = c + (s ? -h : h) * xk[i];
            std::fill(buf.begin(), buf.end(), 0.0);
            f(x, buf);
            for (std::size_t d = 0; d < dim; ++d) {
                k[d] += wk[i] * buf[d];
                // the Gauss nodes sit at even Kronrod indices
                if (i % 2 == 0) g[d] += wg[i / 2] * buf[d];
            }
        }
    }
    iv.value.assign(dim, 0.0);
    iv.error = 0;
    for (std::size_t d = 0; d < dim; ++d) {
        iv.value[d] = h * k[d];
        iv.error = std::max(iv.error, std::abs(h * (k[d] - g[d])));
    }
}

}  // namespace

const Rule1D& gaussJacobi(int n, double alpha, double beta) {
    static std::map<std::tuple<int, double, double>, Rule1D> cache;
    std::lock_guard<std::mutex> lock(ruleMutex());
    auto key = std::make_tuple(n, alpha, beta);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, golubWelsch(n, alpha, beta)).first;
    return it->second;
}

const Rule1D& gaussLegendre(int n) { return gaussJacobi(n, 0, 0); }

const SphereRule& sphereRule(int m, int degree) {
    static std::map<std::pair<int, int>, SphereRule> cache;
    {
        std::lock_guard<std::mutex> lock(ruleMutex());
        auto it = cache.find({m, degree});
        if (it != cache.end()) return it->second;
    }
    if (m < 1) throw ParameterError("sphere rule needs m >= 1");
    SphereRule r;
    r.m = m;
    if (m == 1) {
        r.dirs = {{1.0}, {-1.0}};
        r.w = {1.0, 1.0};
    } else {
        int nc = degree + 2;
        if (nc % 2) ++nc;
        const int ng = degree / 2 + 1;
        // polar angles t_k = cos(theta_k) with weight (1-t^2)^((m-2-k)/2), then the circle
        std::vector<const Rule1D*> polar;
        for (int k = 1; k <= m - 2; ++k) {
            const double a = (m - 2 - k) / 2.0;
            polar.push_back(&gaussJacobi(ng, a, a));
        }
        std::vector<std::size_t> idx(polar.size(), 0);
        while (true) {
            std::vector<double> x(m, 0.0);
            double w = 1, rad = 1;
            for (std::size_t k = 0; k < polar.size(); ++k) {
                const double t = polar[k]->x[idx[k]];
                x[k] = rad * t;
                w *= polar[k]->w[idx[k]];
                rad *= std::sqrt(std::max(0.0, 1 - t * t));
            }
            for (int p = 0; p < nc; ++p) {
                const double phi = 2 * std::numbers::pi * (p + 0.5) / nc;
                x[m - 2] = rad * std::cos(phi);
                x[m - 1] = rad * std::sin(phi);
                r.dirs.push_back(x);
                r.w.push_back(w * 2 * std::numbers::pi / nc);
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == polar[k]->x.size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    std::lock_guard<std::mutex> lock(ruleMutex());
    return cache.emplace(std::make_pair(m, degree), std::move(r)).first->second;
}

std::vector<double> adaptiveGKVec(const std::function<void(double, std::vector<double>&)>& f, std::size_t dim, double a, double b,
                                  double absTol, double relTol, int maxDepth, double* error) {
    std::vector<double> total(dim, 0.0);
    double totalErr = 0;
    if (a == b) {
        if (error) *error = 0;
        return total;
    }
    // depth-first with a per-interval share of the tolerance
    struct Item {
        Interval iv;
        int depth;
    };
    Interval root{a, b, {}, 0};
    gk15(f, dim, root);
    double scale = 0;
    for (double v : root.value) scale = std::max(scale, std::abs(v));
    const double tol = std::max(absTol, relTol * scale);
    std::vector<Item> stack{{root, 0}};
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        const double share = tol * (it.iv.b - it.iv.a) / (b - a);
        if (it.iv.error <= share || it.depth >= maxDepth) {
            for (std::size_t d = 0; d < dim; ++d) total[d] += it.iv.value[d];
            totalErr += it.iv.error;
            continue;
        }
        const double mid = 0.5 * (it.iv.a + it.iv.b);
        Interval l{it.iv.a, mid, {}, 0}, r{mid, it.iv.b, {}, 0};
        gk15(f, dim, l);
        gk15(f, dim, r);
        stack.push_back({std::move(r), it.depth + 1});
        stack.push_back({std::move(l), it.depth + 1});
    }
    if (error) *error = totalErr;
    return total;
}

QuadResult adaptiveGK(const std::function<double(double)>& f, double a, double b, double absTol, double relTol, int maxDepth) {
    double err = 0;
    auto v = adaptiveGKVec([&](double x, std::vector<double>& out) { out[0] = f(x); }, 1, a, b, absTol, relTol, maxDepth, &err);
    return {v[0], err};
}

double gaussLegendreIntegrate(const std::function<double(double)>& f, double a, double b, int n) {
    const Rule1D& r = gaussLegendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    return h * s;
}

QuadResult smoothstepGK(const std::function<double(double)>& f, double a, double b, double absTol, double relTol) {
    const double L = b - a;
    return adaptiveGK([&](double u) { return f(a + L * u * u * (3 - 2 * u)) * 6 * L * u * (1 - u); }, 0, 1, absTol, relTol);
}

void parallelFor(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t t = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(count, 1));
    if (t == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(t);
    for (std::size_t k = 0; k < t; ++k)
        pool.emplace_back([&, k] {
            try {
                for (std::size_t i = k * count / t; i < (k + 1) * count / t; ++i) body(i);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace superint
