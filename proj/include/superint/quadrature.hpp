#pragma once

#include <functional>
#include <vector>

namespace superint {

struct Rule1D {
    std::vector<double> x, w;
};

// Gauss-Jacobi on [-1, 1] for the weight (1-t)^alpha (1+t)^beta, by Golub-Welsch. Cached.
const Rule1D& gaussJacobi(int n, double alpha, double beta);
const Rule1D& gaussLegendre(int n);

// Product rule on S^(m-1) exact for polynomials of total degree <= degree; weights sum to A_m. Cached.
struct SphereRule {
    int m = 0;
    std::vector<std::vector<double>> dirs;
    std::vector<double> w;
};
const SphereRule& sphereRule(int m, int degree);

struct QuadResult {
    double value = 0;
    double error = 0;
};

// adaptive Gauss-Kronrod 7/15
QuadResult adaptiveGK(const std::function<double(double)>& f, double a, double b, double absTol, double relTol = 1e-12,
                      int maxDepth = 30);
// vector-valued variant: f writes dim values; the error is the max-norm over components
std::vector<double> adaptiveGKVec(const std::function<void(double, std::vector<double>&)>& f, std::size_t dim, double a, double b,
                                  double absTol, double relTol = 1e-12, int maxDepth = 30, double* error = nullptr);
// Gauss-Legendre with n nodes on [a, b]
double gaussLegendreIntegrate(const std::function<double(double)>& f, double a, double b, int n);

// x = a + (b-a)(3u^2 - 2u^3): removes square-root endpoint behaviour at both ends
QuadResult smoothstepGK(const std::function<double(double)>& f, double a, double b, double absTol, double relTol = 1e-12);

// deterministic fan-out: body(i) for i in [0, count), static partition, results by index
void parallelFor(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace superint
