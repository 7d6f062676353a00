#pragma once

#include <map>
#include <vector>

#include "superint/clifford.hpp"
#include "superint/integrate.hpp"

namespace superint {

// c r^a, or c r^a (log r + logShift) with logFlag; times the vector x_ when vector is set
struct RadialKernel {
    bool vector = false;
    double coefficient = 0;
    double radialPower = 0;
    bool logFlag = false;
    double logShift = 0;

    double radial(double r) const;
    ScalarExpr radialExpr(const ScalarExpr& r) const;
    // the kernel at x_ - y_ as a Clifford element over ctx
    MixedCliffordElement element(const SuperContext& ctx, const std::vector<double>& y) const;
};

// phi_1..phi_jmax with d_x_ phi_1 = delta and d_x_ phi_{j+1} = phi_j, d_x_ = sum e_j d_j
std::vector<RadialKernel> phiFamily(int m, int jmax);

struct SuperCauchyKernel {
    struct Term {
        double factor;
        RadialKernel phi;
        int xferPower;  // power of x` to the right of phi
    };
    SuperContext ctx;
    std::vector<Term> terms;

    // nu_1(x - y) with y` = 0
    MixedCliffordElement element(const std::vector<double>& y) const;
};

// fundamental solution of the super Dirac operator; nu_1 = -phi_1 for n = 0
SuperCauchyKernel nu1(int m, int n);

// x` = sum x`_k e`_k and its powers
MixedCliffordElement xferVector(const SuperContext& ctx);
MixedCliffordElement xferPower(const SuperContext& ctx, int p);

// delta(x - y) = delta(x_ - y_) (pi^n / n!) x`^2n with y` = 0: pairing with G gives the body of G at y_
struct SuperDiracDelta {
    SuperContext ctx;
    SuperFunction fermionicFactor() const;  // (pi^n / n!) x`^2n
    double pair(const SuperFunction& G, const std::vector<double>& y) const;
};
SuperDiracDelta superDiracDelta(int m, int n);

struct CliffordResult {
    std::map<CliffordKey, double> components;
    double errorEstimate = 0;

    double component(const CliffordKey& k) const;
};

struct StokesResult {
    CliffordResult lhs, rhs;
    double deviation = 0;
};

// int H(-g)[(F d_x) G + F (d_x G)] against int F delta(g) d_x[g] G
StokesResult stokesCheck(const MixedCliffordElement& F, const MixedCliffordElement& G, const SuperFunction& g,
                         const IntegrateOptions& opt);

struct CauchyPompeiuResult {
    CliffordResult value;
    bool interior = false;
    double expected = 0;  // G(y) inside, 0 outside
    double deviation = 0; // max component distance to the expected scalar
};

// int nu1(x - y) delta(g) d_x[g] G - int nu1(x - y) H(-g) d_x G, with y` = 0.
// Interior points are integrated in polar coordinates about y, exterior ones about the origin.
CauchyPompeiuResult cauchyPompeiu(const SuperFunction& G, const SuperFunction& g, const std::vector<double>& y,
                                  const IntegrateOptions& opt);

}  // namespace superint
