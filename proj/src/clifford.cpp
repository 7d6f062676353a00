#include "superint/clifford.hpp"

#include <bit>
#include <mutex>
#include <sstream>

#include "superint/errors.hpp"

namespace superint {

namespace {

// g_{a,b} for a > b
int symplecticForm(int a, int b) {
    if (a % 2 == 0 && b == a - 1) return -1;
    if (b % 2 == 0 && a == b - 1) return 1;
    return 0;
}

std::map<SymWord, std::map<SymWord, Rational>>& orderCache() {
    static std::map<SymWord, std::map<SymWord, Rational>> cache;
    return cache;
}

std::mutex& orderMutex() {
    static std::mutex m;
    return m;
}

std::map<SymWord, Rational> computeNormalOrder(const SymWord& w);

const std::map<SymWord, Rational>& cachedOrder(const SymWord& w) {
    {
        std::lock_guard<std::mutex> lock(orderMutex());
        auto it = orderCache().find(w);
        if (it != orderCache().end()) return it->second;
    }
    auto r = computeNormalOrder(w);
    std::lock_guard<std::mutex> lock(orderMutex());
    return orderCache().emplace(w, std::move(r)).first->second;
}

std::map<SymWord, Rational> computeNormalOrder(const SymWord& w) {
    std::map<SymWord, Rational> out;
    std::size_t i = 0;
    while (i + 1 < w.size() && w[i] <= w[i + 1]) ++i;
    if (i + 1 >= w.size()) {
        out.emplace(w, Rational(1));
        return out;
    }
    // e`_a e`_b = e`_b e`_a + g_ab at the first descent a > b
    SymWord swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    for (auto& [v, c] : cachedOrder(swapped)) out[v] += c;
    int g = symplecticForm(w[i], w[i + 1]);
    if (g != 0) {
        SymWord shorter(w.begin(), w.begin() + i);
        shorter.insert(shorter.end(), w.begin() + i + 2, w.end());
        for (auto& [v, c] : cachedOrder(shorter)) out[v] += c * g;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace

const std::map<SymWord, Rational>& normalOrder(const SymWord& w) {
    if (static_cast<int>(w.size()) > kMaxWordDegree) throw UnsupportedError("symplectic word degree above 16");
    return cachedOrder(w);
}

int orthProductSign(Blade a, Blade b) {
    int swaps = 0;
    for (Blade bb = b; bb; bb &= bb - 1) {
        Blade low = bb & (~bb + 1);
        swaps += std::popcount(a & ~((low << 1) - 1));
    }
    swaps += std::popcount(a & b);  // e_j^2 = -1
    return swaps % 2 ? -1 : 1;
}

MixedCliffordElement::MixedCliffordElement(const SuperContext& ctx) : ctx_(ctx) {}

MixedCliffordElement MixedCliffordElement::scalar(const SuperFunction& f) {
    MixedCliffordElement r(f.context());
    r.add({0, {}}, f);
    return r;
}

MixedCliffordElement MixedCliffordElement::e(const SuperContext& ctx, int j) {
    if (j < 1 || j > ctx.m) throw ContextError("orthogonal generator index out of range");
    return term(ctx, Blade(1) << (j - 1), {}, SuperFunction(ctx, ScalarExpr(1)));
}

MixedCliffordElement MixedCliffordElement::eFer(const SuperContext& ctx, int k) {
    if (k < 1 || k > ctx.fermions()) throw ContextError("symplectic generator index out of range");
    return term(ctx, 0, {static_cast<std::uint8_t>(k)}, SuperFunction(ctx, ScalarExpr(1)));
}

MixedCliffordElement MixedCliffordElement::term(const SuperContext& ctx, Blade orth, const SymWord& word, const SuperFunction& c) {
    MixedCliffordElement r(ctx);
    for (auto& [w, k] : normalOrder(word)) r.add({orth, w}, c.scaled(ScalarExpr(Coeff(k))));
    return r;
}

void MixedCliffordElement::add(const CliffordKey& k, const SuperFunction& c) {
    if (c.isZero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.isZero()) terms_.erase(it);
}

SuperFunction MixedCliffordElement::component(Blade orth, const SymWord& word) const {
    auto it = terms_.find({orth, word});
    return it == terms_.end() ? SuperFunction(ctx_) : it->second;
}

MixedCliffordElement MixedCliffordElement::operator-() const {
    MixedCliffordElement r(ctx_);
    for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

MixedCliffordElement operator+(const MixedCliffordElement& a, const MixedCliffordElement& b) {
    if (a.ctx_ != b.ctx_) throw ContextError("Clifford elements live in different contexts");
    MixedCliffordElement r = a;
    for (auto& [k, c] : b.terms_) r.add(k, c);
    return r;
}

MixedCliffordElement operator-(const MixedCliffordElement& a, const MixedCliffordElement& b) { return a + (-b); }

MixedCliffordElement operator*(const MixedCliffordElement& a, const MixedCliffordElement& b) {
    if (a.ctx_ != b.ctx_) throw ContextError("Clifford elements live in different contexts");
    MixedCliffordElement r(a.ctx_);
    for (auto& [ka, ca] : a.terms_)
        for (auto& [kb, cb] : b.terms_) {
            // (e_A W)(e_B V) = (-1)^{|W||B|} e_A e_B W V
            int sign = orthProductSign(ka.first, kb.first);
            if ((ka.second.size() * std::popcount(kb.first)) % 2) sign = -sign;
            SymWord wv = ka.second;
            wv.insert(wv.end(), kb.second.begin(), kb.second.end());
            const SuperFunction c = ca * cb;
            if (c.isZero()) continue;
            for (auto& [w, k] : normalOrder(wv)) r.add({ka.first ^ kb.first, w}, c.scaled(ScalarExpr(Coeff(Rational(k * sign)))));
        }
    return r;
}

MixedCliffordElement MixedCliffordElement::scaled(const SuperFunction& f) const {
    MixedCliffordElement r(ctx_);
    for (auto& [k, c] : terms_) r.add(k, f * c);
    return r;
}

std::string keyString(const CliffordKey& k) {
    std::string s;
    for (int j = 0; j < 32; ++j)
        if (k.first >> j & 1u) s += (s.empty() ? "" : "*") + std::string("e") + std::to_string(j + 1);
    for (auto i : k.second) s += (s.empty() ? "" : "*") + std::string("f") + std::to_string(i);
    return s.empty() ? "1" : s;
}

std::string MixedCliffordElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '(' << c.str() << ')';
        if (k.first || !k.second.empty()) os << '*' << keyString(k);
    }
    return os.str();
}

MixedCliffordElement cproduct(const MixedCliffordElement& a, const MixedCliffordElement& b) { return a * b; }

MixedCliffordElement embed(const SuperVectorField& v) {
    MixedCliffordElement r(v.ctx);
    for (int j = 1; j <= v.ctx.m; ++j) r.add({Blade(1) << (j - 1), {}}, v.bos[j - 1]);
    for (int k = 1; k <= v.ctx.fermions(); ++k) r.add({0, {static_cast<std::uint8_t>(k)}}, v.fer[k - 1]);
    return r;
}

SuperFunction ferPartialRight(const SuperFunction& f, int j) { return -ferPartial(f.star(), j); }

MixedCliffordElement diracApply(const MixedCliffordElement& f, Side side) {
    const SuperContext& ctx = f.context();
    MixedCliffordElement r(ctx);
    for (auto& [k, c] : f.terms()) {
        const MixedCliffordElement unit = MixedCliffordElement::term(ctx, k.first, k.second, SuperFunction(ctx, ScalarExpr(1)));
        auto place = [&](const MixedCliffordElement& gen, const SuperFunction& coef) {
            if (coef.isZero()) return;
            r = r + (side == Side::Left ? gen * unit : unit * gen).scaled(coef);
        };
        for (int j = 1; j <= ctx.m; ++j) {
            // left: -e_j d_j, right: -d_j e_j
            place(MixedCliffordElement::e(ctx, j), -bosPartial(c, j));
        }
        for (int j = 1; j <= ctx.n; ++j) {
            const auto odd = MixedCliffordElement::eFer(ctx, 2 * j - 1), even = MixedCliffordElement::eFer(ctx, 2 * j);
            if (side == Side::Left) {
                // 2 e`_{2j} d_{2j-1} - 2 e`_{2j-1} d_{2j}
                place(even, ferPartial(c, 2 * j - 1).scaled(ScalarExpr(2)));
                place(odd, ferPartial(c, 2 * j).scaled(ScalarExpr(-2)));
            } else {
                // -(F d_{2j-1}) 2 e`_{2j} + (F d_{2j}) 2 e`_{2j-1}
                place(even, ferPartialRight(c, 2 * j - 1).scaled(ScalarExpr(-2)));
                place(odd, ferPartialRight(c, 2 * j).scaled(ScalarExpr(2)));
            }
        }
    }
    return r;
}

MixedCliffordElement diracApply(const SuperFunction& f, Side side) { return diracApply(MixedCliffordElement::scalar(f), side); }

bool equivalent(const MixedCliffordElement& a, const MixedCliffordElement& b, double tol) {
    MixedCliffordElement d = a - b;
    for (auto& [k, c] : d.terms())
        if (!equivalent(a.component(k.first, k.second), b.component(k.first, k.second), tol)) return false;
    return true;
}

}  // namespace superint
