#pragma once

#include <string>
#include <string_view>

#include "superint/superfun.hpp"

namespace superint {

// exact test: x is a nonpositive integer
bool isGammaPole(double x);
double gammaFn(double x);
// rising factorial by the product form, so it is defined at Gamma poles
double pochhammer(double q, int j);
// surface area of the unit sphere in R^m, 2 pi^(m/2) / Gamma(m/2)
double sphereArea(double m);

double gauss2F1(double a, double b, double c, double z);
double gauss2F1Series(double a, double b, double c, double z);
// Euler integral; needs c > b > 0
double gauss2F1Euler(double a, double b, double c, double z);

double appellF1(double a, double b1, double b2, double c, double z1, double z2);
// integral representation; needs c > a > 0
double appellF1Integral(double a, double b1, double b2, double c, double z1, double z2);

enum class Shape { Superball, Supersphere, Paraboloid, Hyperboloid };
enum class Kind { Volume, Area };

Shape parseShape(std::string_view s);
Kind parseKind(std::string_view s);
std::string shapeName(Shape s);
std::string kindName(Kind k);

struct ClosedFormValue {
    double value = 0;
    std::string formula;
    int m = 0;
    int n = 0;
    double param = 1;
};

// param is R for the superball and supersphere, h otherwise
ClosedFormValue catalog(Shape shape, Kind kind, int m, int n, double param);

// sum_j (-1)^j 2 pi^(M/2) / (4^j j! Gamma(j + M/2)) (Lap^j P)(0); pole terms vanish
double pizzetti(const SuperFunction& p);

}  // namespace superint
