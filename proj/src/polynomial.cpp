#include "superint/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "superint/errors.hpp"

namespace superint {

namespace {

void trim(Monomial& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}

Monomial mulMono(const Monomial& a, const Monomial& b) {
    Monomial r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

int totalDegree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

bool divides(const Monomial& d, const Monomial& m) {
    if (d.size() > m.size()) return false;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > m[i]) return false;
    return true;
}

Monomial quotientMono(const Monomial& m, const Monomial& d) {
    Monomial r = m;
    for (std::size_t i = 0; i < d.size(); ++i) r[i] -= d[i];
    trim(r);
    return r;
}

}  // namespace

bool gradedLexLess(const Monomial& a, const Monomial& b) {
    int da = totalDegree(a), db = totalDegree(b);
    if (da != db) return da < db;
    // lex with x_1 largest
    std::size_t k = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < k; ++i) {
        int ai = i < a.size() ? a[i] : 0, bi = i < b.size() ? b[i] : 0;
        if (ai != bi) return ai < bi;
    }
    return false;
}

Polynomial::Polynomial(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::var(int i) {
    Monomial m(i, 0);
    m[i - 1] = 1;
    return monomial(m, Rational(1));
}

Polynomial Polynomial::monomial(const Monomial& mono, const Rational& c) {
    Polynomial p;
    Monomial m = mono;
    trim(m);
    p.add(m, c);
    return p;
}

void Polynomial::add(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

bool Polynomial::isConstant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational Polynomial::constantTerm() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const {
    int d = -1;
    for (auto& [m, c] : terms_) d = std::max(d, totalDegree(m));
    return d;
}

int Polynomial::numVars() const {
    int k = 0;
    for (auto& [m, c] : terms_) k = std::max<int>(k, static_cast<int>(m.size()));
    return k;
}

Polynomial Polynomial::operator-() const { return scaled(Rational(-1)); }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (auto& [m, c] : b.terms_) r.add(m, c);
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (auto& [m, c] : b.terms_) r.add(m, -c);
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (auto& [ma, ca] : a.terms_)
        for (auto& [mb, cb] : b.terms_) r.add(mulMono(ma, mb), ca * cb);
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r;
    if (c == 0) return r;
    for (auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

Polynomial Polynomial::pow(unsigned k) const {
    Polynomial r(Rational(1)), base = *this;
    while (k) {
        if (k & 1u) r = r * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return r;
}

double Polynomial::evalAt(std::span<const double> x) const {
    double s = 0;
    for (auto& [m, c] : terms_) {
        double t = c.convert_to<double>();
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int k = 0; k < m[i]; ++k) t *= x[i];
        s += t;
    }
    return s;
}

ScalarExpr Polynomial::toExpr() const {
    ScalarExpr sum;
    // descending graded order reads naturally
    std::vector<std::pair<Monomial, Rational>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), [](auto& a, auto& b) { return gradedLexLess(b.first, a.first); });
    for (auto& [m, c] : ts) {
        ScalarExpr t{Coeff(c)};
        ScalarExpr mono(1);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) mono = mono * superint::pow(ScalarExpr::var(static_cast<int>(i) + 1), Coeff(m[i]));
        sum = sum + t * mono;
    }
    return sum;
}

Polynomial Polynomial::diff(int i) const {
    Polynomial r;
    for (auto& [m, c] : terms_) {
        if (static_cast<int>(m.size()) < i || m[i - 1] == 0) continue;
        Monomial d = m;
        d[i - 1] -= 1;
        trim(d);
        r.add(d, c * m[i - 1]);
    }
    return r;
}

std::pair<Monomial, Rational> Polynomial::leading() const {
    if (terms_.empty()) throw DomainError("leading term of zero polynomial");
    auto best = terms_.begin();
    for (auto it = terms_.begin(); it != terms_.end(); ++it)
        if (gradedLexLess(best->first, it->first)) best = it;
    return *best;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& g) {
    if (g.isZero()) throw DomainError("division by zero polynomial");
    auto [lm, lc] = g.leading();
    Polynomial q, r, p = a;
    while (!p.isZero()) {
        auto [pm, pc] = p.leading();
        if (divides(lm, pm)) {
            Polynomial t = monomial(quotientMono(pm, lm), pc / lc);
            q = q + t;
            p = p - t * g;
        } else {
            Polynomial t = monomial(pm, pc);
            r = r + t;
            p = p - t;
        }
    }
    return {q, r};
}

std::optional<Polynomial> toPolynomial(const ScalarExpr& root) {
    std::unordered_map<const ExprNode*, std::optional<Polynomial>> memo;
    auto go = [&](auto&& self, const ScalarExpr& e) -> std::optional<Polynomial> {
        auto it = memo.find(e.node());
        if (it != memo.end()) return it->second;
        std::optional<Polynomial> r;
        switch (e.op()) {
            case Op::Const:
                if (e.value().exact()) r = Polynomial(e.value().rational());
                break;
            case Op::Var: r = Polynomial::var(e.varIndex()); break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul: {
                auto a = self(self, e.lhs());
                if (!a) break;
                auto b = self(self, e.rhs());
                if (!b) break;
                r = e.op() == Op::Add ? *a + *b : e.op() == Op::Sub ? *a - *b : *a * *b;
                break;
            }
            case Op::Div: {
                auto b = self(self, e.rhs());
                if (!b || !b->isConstant() || b->isZero()) break;
                auto a = self(self, e.lhs());
                if (a) r = a->scaled(1 / b->constantTerm());
                break;
            }
            case Op::Neg: {
                auto a = self(self, e.lhs());
                if (a) r = -*a;
                break;
            }
            case Op::Pow: {
                const Coeff& p = e.exponent();
                if (!p.exact() || !p.isInteger() || p.sign() < 0 || p.toInteger() > 64) break;
                auto a = self(self, e.lhs());
                if (a) r = a->pow(static_cast<unsigned>(p.toInteger()));
                break;
            }
            default: break;
        }
        memo.emplace(e.node(), r);
        return r;
    };
    return go(go, root);
}

ScalarExpr canonical(const ScalarExpr& e) {
    if (e.isConst() || e.op() == Op::Var) return e;
    if (auto p = toPolynomial(e)) return p->toExpr();
    return e;
}

}  // namespace superint
