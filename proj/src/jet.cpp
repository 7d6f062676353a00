#include "superint/jet.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "superint/errors.hpp"

namespace superint {

namespace {

int commonOrder(const JetSeries& a, const JetSeries& b) { return std::min(a.order(), b.order()); }

JetSeries sized(const JetSeries& like, int order) { return JetSeries(like.center, std::vector<double>(order + 1, 0.0)); }

}  // namespace

JetSeries::JetSeries(double center_, std::vector<double> coeffs) : center(center_), c(std::move(coeffs)) {
    if (c.empty()) throw ParameterError("jet needs at least one coefficient");
    if (order() > kMaxJetOrder) throw ParameterError("jet order above 32");
}

JetSeries JetSeries::constant(double v, int order, double center) {
    std::vector<double> c(order + 1, 0.0);
    c[0] = v;
    return JetSeries(center, std::move(c));
}

JetSeries JetSeries::variable(double center, int order) {
    std::vector<double> c(order + 1, 0.0);
    c[0] = center;
    if (order >= 1) c[1] = 1.0;
    return JetSeries(center, std::move(c));
}

double JetSeries::derivative(int k) const {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * c[k];
}

JetSeries operator+(const JetSeries& a, const JetSeries& b) {
    JetSeries r = sized(a, commonOrder(a, b));
    for (int k = 0; k <= r.order(); ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}

JetSeries operator-(const JetSeries& a, const JetSeries& b) {
    JetSeries r = sized(a, commonOrder(a, b));
    for (int k = 0; k <= r.order(); ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}

JetSeries operator-(const JetSeries& a) { return scale(a, -1.0); }

JetSeries scale(const JetSeries& a, double s) {
    JetSeries r = a;
    for (double& v : r.c) v *= s;
    return r;
}

JetSeries operator*(const JetSeries& a, const JetSeries& b) {
    JetSeries r = sized(a, commonOrder(a, b));
    for (int k = 0; k <= r.order(); ++k) {
        double s = 0;
        for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
        r.c[k] = s;
    }
    return r;
}

JetSeries operator/(const JetSeries& a, const JetSeries& b) {
    if (b.c[0] == 0.0) throw DomainError("jet division by a series vanishing at the center");
    JetSeries r = sized(a, commonOrder(a, b));
    for (int k = 0; k <= r.order(); ++k) {
        double s = a.c[k];
        for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
        r.c[k] = s / b.c[0];
    }
    return r;
}

JetSeries jetIntPow(const JetSeries& a, long long k) {
    if (k < 0) return JetSeries::constant(1.0, a.order(), a.center) / jetIntPow(a, -k);
    JetSeries r = JetSeries::constant(1.0, a.order(), a.center), base = a;
    while (k) {
        if (k & 1) r = r * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return r;
}

JetSeries jetPow(const JetSeries& a, double p) {
    if (p == std::floor(p) && std::fabs(p) <= 64) return jetIntPow(a, static_cast<long long>(p));
    double a0 = a.c[0];
    if (a0 <= 0) throw DomainError("non-integer power of a series with nonpositive value");
    JetSeries w = sized(a, a.order());
    w.c[0] = std::pow(a0, p);
    // a w' = p a' w
    for (int k = 1; k <= w.order(); ++k) {
        double s = 0;
        for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * a.c[j] * w.c[k - j];
        w.c[k] = s / (k * a0);
    }
    return w;
}

JetSeries jetExp(const JetSeries& a) {
    JetSeries e = sized(a, a.order());
    e.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= e.order(); ++k) {
        double s = 0;
        for (int j = 1; j <= k; ++j) s += j * a.c[j] * e.c[k - j];
        e.c[k] = s / k;
    }
    return e;
}

JetSeries jetLog(const JetSeries& a) {
    double a0 = a.c[0];
    if (a0 <= 0) throw DomainError("log of a nonpositive number");
    JetSeries l = sized(a, a.order());
    l.c[0] = std::log(a0);
    for (int k = 1; k <= l.order(); ++k) {
        double s = 0;
        for (int j = 1; j < k; ++j) s += j * l.c[j] * a.c[k - j];
        l.c[k] = (a.c[k] - s / k) / a0;
    }
    return l;
}

JetSeries jetSqrt(const JetSeries& a) {
    if (a.c[0] < 0) throw DomainError("sqrt of a negative number");
    if (a.c[0] == 0) {
        if (a.order() == 0) return sized(a, 0);
        throw DomainError("sqrt series at a zero value");
    }
    return jetPow(a, 0.5);
}

namespace {

void sinCos(const JetSeries& a, JetSeries& s, JetSeries& c) {
    s = sized(a, a.order());
    c = sized(a, a.order());
    s.c[0] = std::sin(a.c[0]);
    c.c[0] = std::cos(a.c[0]);
    for (int k = 1; k <= a.order(); ++k) {
        double ss = 0, cc = 0;
        for (int j = 1; j <= k; ++j) {
            ss += j * a.c[j] * c.c[k - j];
            cc -= j * a.c[j] * s.c[k - j];
        }
        s.c[k] = ss / k;
        c.c[k] = cc / k;
    }
}

JetSeries integrate(const JetSeries& d, double value0, int order) {
    JetSeries r = sized(d, order);
    r.c[0] = value0;
    for (int k = 1; k <= order; ++k) r.c[k] = d.c[k - 1] / k;
    return r;
}

}  // namespace

JetSeries jetSin(const JetSeries& a) {
    JetSeries s, c;
    sinCos(a, s, c);
    return s;
}

JetSeries jetCos(const JetSeries& a) {
    JetSeries s, c;
    sinCos(a, s, c);
    return c;
}

JetSeries jetAsinh(const JetSeries& a) {
    if (a.order() == 0) return JetSeries::constant(std::asinh(a.c[0]), 0, a.center);
    JetSeries q = jetPow(a * a + JetSeries::constant(1.0, a.order(), a.center), -0.5);
    JetSeries d = jetDerivative(a) * q;
    return integrate(d, std::asinh(a.c[0]), a.order());
}

JetSeries jetAbs(const JetSeries& a) {
    if (a.c[0] == 0) {
        if (a.order() == 0) return a;
        throw DomainError("abs series at zero");
    }
    return a.c[0] > 0 ? a : -a;
}

JetSeries jetDerivative(const JetSeries& a) {
    if (a.order() == 0) return JetSeries::constant(0.0, 0, a.center);
    std::vector<double> d(a.order());
    for (int k = 1; k <= a.order(); ++k) d[k - 1] = k * a.c[k];
    return JetSeries(a.center, std::move(d));
}

JetSeries jetEval(const ScalarExpr& e, const std::vector<JetSeries>& path) {
    if (path.empty()) throw ParameterError("empty path");
    const int order = path.front().order();
    const double center = path.front().center;
    std::unordered_map<const ExprNode*, JetSeries> memo;
    auto go = [&](auto&& self, const ScalarExpr& x) -> JetSeries {
        auto it = memo.find(x.node());
        if (it != memo.end()) return it->second;
        JetSeries r;
        switch (x.op()) {
            case Op::Const: r = JetSeries::constant(x.value().toDouble(), order, center); break;
            case Op::Var:
                if (static_cast<std::size_t>(x.varIndex()) > path.size()) throw ContextError("path has too few coordinates");
                r = path[x.varIndex() - 1];
                break;
            case Op::Add: r = self(self, x.lhs()) + self(self, x.rhs()); break;
            case Op::Sub: r = self(self, x.lhs()) - self(self, x.rhs()); break;
            case Op::Mul: r = self(self, x.lhs()) * self(self, x.rhs()); break;
            case Op::Div: r = self(self, x.lhs()) / self(self, x.rhs()); break;
            case Op::Neg: r = -self(self, x.lhs()); break;
            case Op::Pow: r = jetPow(self(self, x.lhs()), x.exponent().toDouble()); break;
            case Op::Exp: r = jetExp(self(self, x.lhs())); break;
            case Op::Log: r = jetLog(self(self, x.lhs())); break;
            case Op::Sqrt: r = jetSqrt(self(self, x.lhs())); break;
            case Op::Sin: r = jetSin(self(self, x.lhs())); break;
            case Op::Cos: r = jetCos(self(self, x.lhs())); break;
            case Op::Asinh: r = jetAsinh(self(self, x.lhs())); break;
            case Op::Abs: r = jetAbs(self(self, x.lhs())); break;
        }
        memo.emplace(x.node(), r);
        return r;
    };
    return go(go, e);
}

JetSeries jetEval(const CompiledExpr& e, const std::vector<JetSeries>& path) {
    if (path.empty()) throw ParameterError("empty path");
    const int order = path.front().order();
    const double center = path.front().center;
    std::vector<JetSeries> st;
    st.reserve(e.depth());
    for (const auto& in : e.code()) {
        switch (in.op) {
            case Op::Const: st.push_back(JetSeries::constant(in.value, order, center)); break;
            case Op::Var:
                if (static_cast<std::size_t>(in.var) >= path.size()) throw ContextError("path has too few coordinates");
                st.push_back(path[in.var]);
                break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div: {
                JetSeries b = std::move(st.back());
                st.pop_back();
                JetSeries& a = st.back();
                if (in.op == Op::Add) a = a + b;
                else if (in.op == Op::Sub) a = a - b;
                else if (in.op == Op::Mul) a = a * b;
                else a = a / b;
                break;
            }
            case Op::Neg: st.back() = -st.back(); break;
            case Op::Pow: st.back() = jetPow(st.back(), in.value); break;
            case Op::Exp: st.back() = jetExp(st.back()); break;
            case Op::Log: st.back() = jetLog(st.back()); break;
            case Op::Sqrt: st.back() = jetSqrt(st.back()); break;
            case Op::Sin: st.back() = jetSin(st.back()); break;
            case Op::Cos: st.back() = jetCos(st.back()); break;
            case Op::Asinh: st.back() = jetAsinh(st.back()); break;
            case Op::Abs: st.back() = jetAbs(st.back()); break;
        }
    }
    return st.empty() ? JetSeries::constant(0, order, center) : st.back();
}

JetSeries jetEval(const ScalarExpr& e, const std::vector<ScalarExpr>& path, double t0, int order) {
    if (order < 0 || order > kMaxJetOrder) throw ParameterError("jet order must be in [0, 32]");
    std::vector<JetSeries> t{JetSeries::variable(t0, order)};
    std::vector<JetSeries> coords;
    coords.reserve(path.size());
    for (const ScalarExpr& p : path) coords.push_back(jetEval(p, t));
    return jetEval(e, coords);
}

JetSeries composeJet(const JetSeries& outer, const JetSeries& inner) {
    const int K = std::min(outer.order(), inner.order());
    JetSeries w = inner;
    w.c.resize(K + 1);
    w.c[0] = 0.0;
    JetSeries r = JetSeries::constant(outer.c[0], K, inner.center);
    JetSeries wp = JetSeries::constant(1.0, K, inner.center);
    for (int k = 1; k <= K; ++k) {
        wp = wp * w;
        for (int i = 0; i <= K; ++i) r.c[i] += outer.c[k] * wp.c[i];
    }
    return r;
}

JetSeries inverseJet(const JetSeries& j) {
    const int K = j.order();
    if (K < 1 || j.c[1] == 0.0) throw NonInvertibleJet("inverse jet needs a nonzero first coefficient");
    const double c1 = j.c[1];
    std::vector<double> d(K + 1, 0.0);
    d[1] = 1.0 / c1;
    // sum_i c_i w^i = v, solved order by order
    for (int k = 2; k <= K; ++k) {
        JetSeries w(0.0, d);
        JetSeries wp = w;
        double s = 0;
        for (int i = 2; i <= k; ++i) {
            wp = wp * w;
            s += j.c[i] * wp.c[k];
        }
        d[k] = -s / c1;
    }
    d[0] = j.center;
    return JetSeries(j.c[0], std::move(d));
}

}  // namespace superint
