#include "superint/grassmann.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "superint/errors.hpp"

namespace superint {

double Coeff::toDouble() const {
    if (exact()) return rational().convert_to<double>();
    return std::get<double>(v_);
}

bool Coeff::isZero() const {
    if (exact()) return rational() == 0;
    return std::get<double>(v_) == 0.0;
}

bool Coeff::isOne() const {
    if (exact()) return rational() == 1;
    return std::get<double>(v_) == 1.0;
}

bool Coeff::isInteger() const {
    if (exact()) return denominator(rational()) == 1;
    double d = std::get<double>(v_);
    return std::isfinite(d) && d == std::floor(d);
}

long long Coeff::toInteger() const {
    if (exact()) return numerator(rational()).convert_to<long long>() / denominator(rational()).convert_to<long long>();
    return static_cast<long long>(std::get<double>(v_));
}

int Coeff::sign() const {
    if (exact()) return rational().sign();
    double d = std::get<double>(v_);
    return (d > 0) - (d < 0);
}

Coeff Coeff::operator-() const {
    if (exact()) return Coeff(Rational(-rational()));
    return Coeff(-std::get<double>(v_));
}

Coeff operator+(const Coeff& a, const Coeff& b) {
    if (a.exact() && b.exact()) return Coeff(Rational(a.rational() + b.rational()));
    return Coeff(a.toDouble() + b.toDouble());
}

Coeff operator-(const Coeff& a, const Coeff& b) {
    if (a.exact() && b.exact()) return Coeff(Rational(a.rational() - b.rational()));
    return Coeff(a.toDouble() - b.toDouble());
}

Coeff operator*(const Coeff& a, const Coeff& b) {
    if (a.exact() && b.exact()) return Coeff(Rational(a.rational() * b.rational()));
    if (a.exact() && a.rational() == 0) return a;
    if (b.exact() && b.rational() == 0) return b;
    return Coeff(a.toDouble() * b.toDouble());
}

Coeff operator/(const Coeff& a, const Coeff& b) {
    if (b.isZero()) throw DomainError("division by zero coefficient");
    if (a.exact() && b.exact()) return Coeff(Rational(a.rational() / b.rational()));
    return Coeff(a.toDouble() / b.toDouble());
}

bool Coeff::approxEqual(const Coeff& o, double tol) const {
    if (exact() && o.exact()) return rational() == o.rational();
    return std::fabs(toDouble() - o.toDouble()) <= tol;
}

bool Coeff::identical(const Coeff& o) const {
    if (exact() != o.exact()) return false;
    if (exact()) return rational() == o.rational();
    return std::get<double>(v_) == std::get<double>(o.v_);
}

std::string Coeff::str() const {
    std::ostringstream os;
    if (exact()) {
        os << numerator(rational());
        if (denominator(rational()) != 1) os << '/' << denominator(rational());
    } else {
        os.precision(17);
        os << std::get<double>(v_);
    }
    return os.str();
}

SuperContext::SuperContext(int m_, int n_) : m(m_), n(n_) {
    if (m < 1) throw ContextError("m must be at least 1");
    if (n < 0 || n > kMaxHalfFermions) throw ContextError("n out of range [0, 8]");
}

int bladeGrade(Blade a) { return std::popcount(a); }

int bladeProductSign(Blade a, Blade b) {
    if (a & b) return 0;
    // each generator of B must pass over the generators of A with a larger index
    int swaps = 0;
    for (Blade rest = b; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        swaps += std::popcount(a >> (j + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

int starSign(Blade a) { return (bladeGrade(a) & 1) ? -1 : 1; }

std::string bladeString(Blade a) {
    if (a == 0) return "1";
    std::string s;
    for (int i = 0; a >> i; ++i)
        if ((a >> i) & 1u) {
            if (!s.empty()) s += '*';
            s += "q" + std::to_string(i + 1);
        }
    return s;
}

GrassmannElement::GrassmannElement(int n) : n_(n) {
    if (n < 0 || n > kMaxHalfFermions) throw ContextError("n out of range [0, 8]");
}

GrassmannElement GrassmannElement::scalar(int n, const Coeff& c) { return monomial(n, 0, c); }

GrassmannElement GrassmannElement::generator(int n, int i) {
    if (i < 1 || i > 2 * n) throw ContextError("generator index out of range");
    return monomial(n, Blade(1) << (i - 1), Coeff(1));
}

GrassmannElement GrassmannElement::monomial(int n, Blade b, const Coeff& c) {
    GrassmannElement e(n);
    if (n * 2 < 32 && (b >> (2 * n)) != 0) throw ContextError("blade outside G_2n");
    e.addTerm(b, c);
    return e;
}

void GrassmannElement::addTerm(Blade b, const Coeff& c) {
    if (c.isZero()) return;
    auto it = terms_.find(b);
    if (it == terms_.end()) {
        terms_.emplace(b, c);
        return;
    }
    it->second += c;
    if (it->second.isZero()) terms_.erase(it);
}

Coeff GrassmannElement::coeff(Blade b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? Coeff(0) : it->second;
}

bool GrassmannElement::isEven() const {
    for (auto& [b, c] : terms_)
        if (bladeGrade(b) & 1) return false;
    return true;
}

bool GrassmannElement::isOdd() const {
    for (auto& [b, c] : terms_)
        if (!(bladeGrade(b) & 1)) return false;
    return true;
}

GrassmannElement GrassmannElement::operator-() const { return scaled(Coeff(-1)); }

GrassmannElement operator+(const GrassmannElement& a, const GrassmannElement& b) {
    if (a.n_ != b.n_) throw ContextError("mismatched Grassmann contexts");
    GrassmannElement r = a;
    for (auto& [bl, c] : b.terms_) r.addTerm(bl, c);
    return r;
}

GrassmannElement operator-(const GrassmannElement& a, const GrassmannElement& b) { return a + (-b); }

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    if (a.n_ != b.n_) throw ContextError("mismatched Grassmann contexts");
    GrassmannElement r(a.n_);
    for (auto& [ba, ca] : a.terms_)
        for (auto& [bb, cb] : b.terms_) {
            int s = bladeProductSign(ba, bb);
            if (s == 0) continue;
            r.addTerm(ba | bb, s > 0 ? ca * cb : -(ca * cb));
        }
    return r;
}

GrassmannElement GrassmannElement::scaled(const Coeff& c) const {
    GrassmannElement r(n_);
    for (auto& [b, v] : terms_) r.addTerm(b, v * c);
    return r;
}

GrassmannElement GrassmannElement::star() const {
    GrassmannElement r(n_);
    for (auto& [b, v] : terms_) r.addTerm(b, starSign(b) > 0 ? v : -v);
    return r;
}

bool GrassmannElement::approxEqual(const GrassmannElement& o, double tol) const {
    if (n_ != o.n_) return false;
    GrassmannElement d = *this - o;
    for (auto& [b, c] : d.terms_)
        if (!c.approxEqual(Coeff(0), tol)) return false;
    return true;
}

std::string GrassmannElement::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto& [b, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + c.str() + ")";
        if (b) s += "*" + bladeString(b);
    }
    return s;
}

GrassmannElement gproduct(const GrassmannElement& a, const GrassmannElement& b) { return a * b; }

std::pair<Coeff, GrassmannElement> bodyNil(const GrassmannElement& a) {
    GrassmannElement nil(a.n());
    Coeff body(0);
    for (auto& [b, c] : a.terms()) {
        if (b == 0)
            body = c;
        else
            nil = nil + GrassmannElement::monomial(a.n(), b, c);
    }
    return {body, nil};
}

Coeff berezinTop(const GrassmannElement& a) {
    // pi^-n d/dx`_2n ... d/dx`_1 hits x`_1...x`_2n with sign +1
    if (a.n() == 0) return a.coeff(0);
    return a.coeff((Blade(1) << (2 * a.n())) - 1u);
}

double berezin(const GrassmannElement& a) {
    return berezinTop(a).toDouble() * std::pow(std::numbers::pi, -a.n());
}

GrassmannElement fermionicSquare(int n) {
    GrassmannElement s(n);
    for (int j = 1; j <= n; ++j)
        s = s + GrassmannElement::generator(n, 2 * j - 1) * GrassmannElement::generator(n, 2 * j);
    return s;
}

GrassmannElement power(const GrassmannElement& a, int k) {
    GrassmannElement r = GrassmannElement::scalar(a.n(), Coeff(1));
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

}  // namespace superint
