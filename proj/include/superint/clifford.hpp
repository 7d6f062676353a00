#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "superint/superfun.hpp"

namespace superint {

inline constexpr int kMaxWordDegree = 16;

// nondecreasing indices into e`_1..e`_2n
using SymWord = std::vector<std::uint8_t>;
// (orthogonal blade over e_1..e_m, normal-ordered symplectic word)
using CliffordKey = std::pair<Blade, SymWord>;

enum class Side { Left, Right };

// Finite sum of coefficient * e_A * e`_W in the mixed algebra with
// e_j e_k + e_k e_j = -2 delta_jk, e_j e`_k = -e`_k e_j and
// e`_j e`_k - e`_k e`_j = g_jk, g_{2j-1,2k} = -g_{2k,2j-1} = delta_jk.
// Superfunction coefficients commute with all generators.
class MixedCliffordElement {
public:
    MixedCliffordElement() = default;
    explicit MixedCliffordElement(const SuperContext& ctx);
    static MixedCliffordElement scalar(const SuperFunction& f);
    static MixedCliffordElement e(const SuperContext& ctx, int j);      // e_j
    static MixedCliffordElement eFer(const SuperContext& ctx, int k);   // e`_k
    static MixedCliffordElement term(const SuperContext& ctx, Blade orth, const SymWord& word, const SuperFunction& c);

    const SuperContext& context() const { return ctx_; }
    const std::map<CliffordKey, SuperFunction>& terms() const { return terms_; }
    SuperFunction component(Blade orth, const SymWord& word = {}) const;
    SuperFunction scalarPart() const { return component(0, {}); }
    bool isZero() const { return terms_.empty(); }

    MixedCliffordElement operator-() const;
    friend MixedCliffordElement operator+(const MixedCliffordElement& a, const MixedCliffordElement& b);
    friend MixedCliffordElement operator-(const MixedCliffordElement& a, const MixedCliffordElement& b);
    friend MixedCliffordElement operator*(const MixedCliffordElement& a, const MixedCliffordElement& b);
    // coefficient-wise product f * c for every term
    MixedCliffordElement scaled(const SuperFunction& f) const;
    // applies fn to every coefficient
    template <class Fn>
    MixedCliffordElement mapCoefficients(Fn fn) const {
        MixedCliffordElement r(ctx_);
        for (auto& [k, c] : terms_) r.add(k, fn(c));
        return r;
    }

    std::string str() const;
    void add(const CliffordKey& k, const SuperFunction& c);

private:
    SuperContext ctx_;
    std::map<CliffordKey, SuperFunction> terms_;
};

MixedCliffordElement cproduct(const MixedCliffordElement& a, const MixedCliffordElement& b);
MixedCliffordElement embed(const SuperVectorField& v);
// normal form of an arbitrary symplectic word as a rational combination of nondecreasing words
const std::map<SymWord, Rational>& normalOrder(const SymWord& w);
// sign of e_A e_B = sign * e_{A xor B}
int orthProductSign(Blade a, Blade b);

MixedCliffordElement diracApply(const MixedCliffordElement& f, Side side);
MixedCliffordElement diracApply(const SuperFunction& f, Side side);
// right fermionic derivative F d/dx`_j = -d/dx`_j [F*]
SuperFunction ferPartialRight(const SuperFunction& f, int j);

bool equivalent(const MixedCliffordElement& a, const MixedCliffordElement& b, double tol = 1e-9);
std::string keyString(const CliffordKey& k);

}  // namespace superint
