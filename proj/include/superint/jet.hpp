#pragma once

#include <vector>

#include "superint/expr.hpp"

namespace superint {

inline constexpr int kMaxJetOrder = 32;

// Truncated Taylor series f(center + t) = sum_k c[k] t^k, k = 0..order.
struct JetSeries {
    double center = 0;
    std::vector<double> c;

    JetSeries() = default;
    JetSeries(double center, std::vector<double> coeffs);
    static JetSeries constant(double v, int order, double center = 0);
    static JetSeries variable(double center, int order);  // t -> center + t

    int order() const { return static_cast<int>(c.size()) - 1; }
    double operator[](int k) const { return c[k]; }
    double derivative(int k) const;  // k! c[k]
};

JetSeries operator+(const JetSeries& a, const JetSeries& b);
JetSeries operator-(const JetSeries& a, const JetSeries& b);
JetSeries operator*(const JetSeries& a, const JetSeries& b);
JetSeries operator/(const JetSeries& a, const JetSeries& b);
JetSeries operator-(const JetSeries& a);
JetSeries scale(const JetSeries& a, double s);
JetSeries jetPow(const JetSeries& a, double p);
JetSeries jetIntPow(const JetSeries& a, long long k);
JetSeries jetExp(const JetSeries& a);
JetSeries jetLog(const JetSeries& a);
JetSeries jetSqrt(const JetSeries& a);
JetSeries jetSin(const JetSeries& a);
JetSeries jetCos(const JetSeries& a);
JetSeries jetAsinh(const JetSeries& a);
JetSeries jetAbs(const JetSeries& a);
// d/dt, order drops by one
JetSeries jetDerivative(const JetSeries& a);

// Taylor coefficients of t -> e(path(t)); all path jets share center and order.
JetSeries jetEval(const ScalarExpr& e, const std::vector<JetSeries>& path);
// same, running the flat program of a compiled expression
JetSeries jetEval(const CompiledExpr& e, const std::vector<JetSeries>& path);
// path[i] is an expression in the single parameter t, written as x1.
JetSeries jetEval(const ScalarExpr& e, const std::vector<ScalarExpr>& path, double t0, int order);

// Local inverse: for u(center + t) = c0 + c1 t + ..., returns the jet of
// t(u) around u = c0, with value the original center. Requires c1 != 0.
JetSeries inverseJet(const JetSeries& j);
// (outer o inner): inner[0] must equal outer.center
JetSeries composeJet(const JetSeries& outer, const JetSeries& inner);

}  // namespace superint
