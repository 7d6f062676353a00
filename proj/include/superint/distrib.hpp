#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "superint/clifford.hpp"
#include "superint/superfun.hpp"

namespace superint {

inline constexpr int kExtraDeltaOrders = 8;

// c_H * H(phaseSign * g0) + sum_j c_j * delta^(j)(g0)
template <class Coef>
struct BasicExpansion {
    SuperContext ctx;
    ScalarExpr phaseBody;
    int phaseSign = 1;
    std::optional<Coef> heaviside;
    std::map<int, Coef> deltaTerms;

    int maxOrder() const { return deltaTerms.empty() ? -1 : deltaTerms.rbegin()->first; }
};

using DistributionExpansion = BasicExpansion<SuperFunction>;
using CliffordExpansion = BasicExpansion<MixedCliffordElement>;

// delta^(k)(g) = sum_j g_nil^j / j! delta^(k+j)(g0)
DistributionExpansion expandDelta(const SuperFunction& g, int k);
// H(s g) = H(s g0) + sum_{j>=1} (s g_nil)^j / j! delta^(j-1)(s g0), stored relative to g0
DistributionExpansion expandHeaviside(const SuperFunction& g, int sign);

// coefficient-wise product, then the order-lowering rule g0 delta^(j)(g0) = -j delta^(j-1)(g0)
// wherever the phase and the coefficient are polynomials
DistributionExpansion multiplySF(const DistributionExpansion& d, const SuperFunction& f);
DistributionExpansion multiplySF(const SuperFunction& f, const DistributionExpansion& d);
DistributionExpansion reduce(const DistributionExpansion& d);
CliffordExpansion reduce(const CliffordExpansion& d);

enum class DistKind { Delta, Heaviside };
// Rewrites delta^(k)(h g) or H(s h g) over the phase g. Needs h0 > 1e-9 at every support
// point; a constant h is certified symbolically. Orders k > 0 need a constant h.
DistributionExpansion scaleCancel(const SuperFunction& g, const SuperFunction& h, DistKind kind, int orderOrSign,
                                  const std::vector<std::vector<double>>& supportPoints = {});

// rewrite over the phase -g0
DistributionExpansion negatePhase(const DistributionExpansion& d);

struct Direction {
    bool fermionic = false;
    int index = 1;
    static Direction bos(int j) { return {false, j}; }
    static Direction fer(int j) { return {true, j}; }
};
DistributionExpansion diffExpansion(const DistributionExpansion& d, Direction dir);
// left super Dirac operator applied to a scalar expansion
CliffordExpansion superGradientExpansion(const DistributionExpansion& d);

DistributionExpansion operator+(const DistributionExpansion& a, const DistributionExpansion& b);
DistributionExpansion operator-(const DistributionExpansion& a, const DistributionExpansion& b);
DistributionExpansion scaleExpansion(const DistributionExpansion& d, const ScalarExpr& c);
// left Clifford factor times a scalar expansion
CliffordExpansion operator*(const MixedCliffordElement& a, const DistributionExpansion& d);
// scalar expansion times a right Clifford factor
CliffordExpansion operator*(const DistributionExpansion& d, const MixedCliffordElement& a);

// exact after reduction when everything is polynomial, else by sampling
bool equivalent(const DistributionExpansion& a, const DistributionExpansion& b, double tol = 1e-9);
bool equivalent(const CliffordExpansion& a, const CliffordExpansion& b, double tol = 1e-9);

std::string str(const DistributionExpansion& d);

}  // namespace superint
