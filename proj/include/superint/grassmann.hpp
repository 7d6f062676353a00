#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace superint {

using Rational = boost::multiprecision::cpp_rational;
using Blade = std::uint32_t;

inline constexpr int kMaxHalfFermions = 8;
inline constexpr double kCoeffTol = 1e-12;

// Exact rational unless an irrational value entered, then double.
class Coeff {
public:
    Coeff() : v_(Rational(0)) {}
    Coeff(int v) : v_(Rational(v)) {}
    Coeff(long v) : v_(Rational(v)) {}
    Coeff(long long v) : v_(Rational(v)) {}
    Coeff(const Rational& v) : v_(v) {}
    Coeff(double v) : v_(v) {}
    static Coeff ratio(long long p, long long q) { return Coeff(Rational(p) / Rational(q)); }

    bool exact() const { return std::holds_alternative<Rational>(v_); }
    const Rational& rational() const { return std::get<Rational>(v_); }
    double toDouble() const;
    bool isZero() const;
    bool isOne() const;
    bool isInteger() const;
    long long toInteger() const;
    int sign() const;

    Coeff operator-() const;
    friend Coeff operator+(const Coeff& a, const Coeff& b);
    friend Coeff operator-(const Coeff& a, const Coeff& b);
    friend Coeff operator*(const Coeff& a, const Coeff& b);
    friend Coeff operator/(const Coeff& a, const Coeff& b);
    Coeff& operator+=(const Coeff& b) { return *this = *this + b; }
    Coeff& operator-=(const Coeff& b) { return *this = *this - b; }
    Coeff& operator*=(const Coeff& b) { return *this = *this * b; }

    // exact compare for rationals, absolute kCoeffTol otherwise
    bool approxEqual(const Coeff& o, double tol = kCoeffTol) const;
    bool identical(const Coeff& o) const;
    std::string str() const;

private:
    std::variant<Rational, double> v_;
};

struct SuperContext {
    int m = 1;
    int n = 0;
    SuperContext() = default;
    SuperContext(int m, int n);
    int M() const { return m - 2 * n; }
    int fermions() const { return 2 * n; }
    Blade topBlade() const { return n == 0 ? 0u : (Blade(1) << (2 * n)) - 1u; }
    bool operator==(const SuperContext& o) const { return m == o.m && n == o.n; }
    bool operator!=(const SuperContext& o) const { return !(*this == o); }
};

int bladeGrade(Blade a);
// sign of x`_A x`_B after sorting into x`_{A|B}; 0 if A and B overlap
int bladeProductSign(Blade a, Blade b);
int starSign(Blade a);
std::string bladeString(Blade a);

class GrassmannElement {
public:
    explicit GrassmannElement(int n = 0);
    static GrassmannElement scalar(int n, const Coeff& c);
    static GrassmannElement generator(int n, int i);  // x`_i, 1-based
    static GrassmannElement monomial(int n, Blade b, const Coeff& c);

    int n() const { return n_; }
    const std::map<Blade, Coeff>& terms() const { return terms_; }
    Coeff coeff(Blade b) const;
    bool isZero() const { return terms_.empty(); }
    bool isEven() const;
    bool isOdd() const;

    GrassmannElement operator-() const;
    friend GrassmannElement operator+(const GrassmannElement& a, const GrassmannElement& b);
    friend GrassmannElement operator-(const GrassmannElement& a, const GrassmannElement& b);
    friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);
    GrassmannElement scaled(const Coeff& c) const;
    GrassmannElement star() const;

    bool approxEqual(const GrassmannElement& o, double tol = kCoeffTol) const;
    std::string str() const;

private:
    void addTerm(Blade b, const Coeff& c);
    int n_;
    std::map<Blade, Coeff> terms_;
};

GrassmannElement gproduct(const GrassmannElement& a, const GrassmannElement& b);
std::pair<Coeff, GrassmannElement> bodyNil(const GrassmannElement& a);
// coefficient of x`_1...x`_2n (exact when possible)
Coeff berezinTop(const GrassmannElement& a);
// pi^-n times the top coefficient
double berezin(const GrassmannElement& a);
// x`^2 = sum_j x`_{2j-1} x`_{2j}
GrassmannElement fermionicSquare(int n);
GrassmannElement power(const GrassmannElement& a, int k);

}  // namespace superint
