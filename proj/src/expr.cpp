#include "superint/expr.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "parser_impl.hpp"
#include "superint/errors.hpp"

namespace superint {

namespace mp = boost::multiprecision;

ScalarExpr makeNode(Op op, Coeff value, int var, ScalarExpr a, ScalarExpr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->value = std::move(value);
    n->var = var;
    n->a = std::move(a);
    n->b = std::move(b);
    return ScalarExpr(std::shared_ptr<const ExprNode>(std::move(n)));
}

namespace {

// shared leaf for the zero constant keeps default construction cheap
const std::shared_ptr<const ExprNode>& zeroNode() {
    static const std::shared_ptr<const ExprNode> z = [] {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Const;
        n->value = Coeff(0);
        return std::shared_ptr<const ExprNode>(n);
    }();
    return z;
}

std::optional<mp::cpp_int> exactRoot(const mp::cpp_int& x, long long k) {
    if (x < 0) return std::nullopt;
    if (x == 0 || x == 1) return x;
    double est = std::pow(x.convert_to<double>(), 1.0 / static_cast<double>(k));
    mp::cpp_int r(static_cast<long long>(std::llround(est)));
    for (mp::cpp_int c = r > 1 ? r - 1 : mp::cpp_int(0); c <= r + 1; ++c)
        if (mp::pow(c, static_cast<unsigned>(k)) == x) return c;
    return std::nullopt;
}

std::optional<Rational> exactPow(const Rational& a, const Rational& p) {
    mp::cpp_int pn = numerator(p), pd = denominator(p);
    if (mp::abs(pn) > 64 || pd > 16) return std::nullopt;
    long long num = pn.convert_to<long long>(), den = pd.convert_to<long long>();
    Rational base = a;
    if (den != 1) {
        bool neg = a < 0;
        if (neg && den % 2 == 0) return std::nullopt;
        auto rn = exactRoot(mp::abs(numerator(a)), den);
        auto rd = exactRoot(denominator(a), den);
        if (!rn || !rd) return std::nullopt;
        base = Rational(*rn, *rd);
        if (neg) base = -base;
    }
    if (num < 0) {
        if (base == 0) throw DomainError("zero raised to a negative power");
        base = 1 / base;
        num = -num;
    }
    Rational r(1);
    for (long long i = 0; i < num; ++i) r *= base;
    return r;
}

double powDouble(double a, double p) {
    if (p == std::floor(p)) {
        if (a == 0.0 && p < 0) throw DomainError("zero raised to a negative power");
        return std::pow(a, p);
    }
    if (a < 0) throw DomainError("negative base with non-integer exponent");
    if (a == 0.0 && p < 0) throw DomainError("zero raised to a negative power");
    return std::pow(a, p);
}

double applyFunc(Op f, double x) {
    switch (f) {
        case Op::Exp: return std::exp(x);
        case Op::Log:
            if (x <= 0) throw DomainError("log of a nonpositive number");
            return std::log(x);
        case Op::Sqrt:
            if (x < 0) throw DomainError("sqrt of a negative number");
            return std::sqrt(x);
        case Op::Sin: return std::sin(x);
        case Op::Cos: return std::cos(x);
        case Op::Asinh: return std::asinh(x);
        case Op::Abs: return std::fabs(x);
        default: break;
    }
    throw Error("not a function node");
}

Coeff foldFunc(Op f, const Coeff& c) {
    if (c.exact()) {
        const Rational& v = c.rational();
        switch (f) {
            case Op::Exp:
                if (v == 0) return Coeff(1);
                break;
            case Op::Log:
                if (v <= 0) throw DomainError("log of a nonpositive number");
                if (v == 1) return Coeff(0);
                break;
            case Op::Sqrt:
                if (v < 0) throw DomainError("sqrt of a negative number");
                if (auto r = exactPow(v, Rational(1, 2))) return Coeff(*r);
                break;
            case Op::Sin:
            case Op::Asinh:
                if (v == 0) return Coeff(0);
                break;
            case Op::Cos:
                if (v == 0) return Coeff(1);
                break;
            case Op::Abs: return Coeff(Rational(mp::abs(v)));
            default: break;
        }
    }
    return Coeff(applyFunc(f, c.toDouble()));
}

Coeff foldPow(const Coeff& a, const Coeff& p) {
    if (a.exact() && p.exact())
        if (auto r = exactPow(a.rational(), p.rational())) return Coeff(*r);
    return Coeff(powDouble(a.toDouble(), p.toDouble()));
}

int precedence(const ScalarExpr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        case Op::Const: return e.value().sign() < 0 ? 0 : 5;
        default: return 5;
    }
}

void printTo(std::ostringstream& os, const ScalarExpr& e, int minPrec);

void printWrapped(std::ostringstream& os, const ScalarExpr& e, int minPrec) {
    if (precedence(e) < minPrec) {
        os << '(';
        printTo(os, e, 0);
        os << ')';
    } else {
        printTo(os, e, minPrec);
    }
}

void printTo(std::ostringstream& os, const ScalarExpr& e, int) {
    switch (e.op()) {
        case Op::Const: os << e.value().str(); return;
        case Op::Var: os << 'x' << e.varIndex(); return;
        case Op::Add:
            printWrapped(os, e.lhs(), 1);
            os << " + ";
            printWrapped(os, e.rhs(), 2);
            return;
        case Op::Sub:
            printWrapped(os, e.lhs(), 1);
            os << " - ";
            printWrapped(os, e.rhs(), 2);
            return;
        case Op::Mul:
            printWrapped(os, e.lhs(), 2);
            os << '*';
            printWrapped(os, e.rhs(), 3);
            return;
        case Op::Div:
            printWrapped(os, e.lhs(), 2);
            os << '/';
            printWrapped(os, e.rhs(), 3);
            return;
        case Op::Neg:
            os << '-';
            printWrapped(os, e.lhs(), 4);
            return;
        case Op::Pow: {
            printWrapped(os, e.lhs(), 5);
            os << '^';
            const Coeff& p = e.exponent();
            if (p.isInteger() && p.sign() >= 0 && p.exact())
                os << p.str();
            else
                os << '(' << p.str() << ')';
            return;
        }
        default:
            os << funcName(e.op()) << '(';
            printTo(os, e.lhs(), 0);
            os << ')';
            return;
    }
}

struct ExprBuilder {
    using Value = ScalarExpr;
    int maxVar;

    bool isFunction(const std::string& s) const {
        return s == "exp" || s == "log" || s == "sqrt" || s == "sin" || s == "cos" || s == "asinh" || s == "abs";
    }
    Value number(const Coeff& c, std::size_t) { return ScalarExpr(c); }
    Value ident(const std::string& name, std::size_t off) {
        int k = detail::variableIndex(name);
        if (k < 1 || (maxVar > 0 && k > maxVar))
            throw UnknownIdentifier("unknown identifier '" + name + "' at offset " + std::to_string(off));
        return ScalarExpr::var(k);
    }
    Value call(const std::string& f, const Value& a, std::size_t) {
        static const std::pair<const char*, Op> table[] = {{"exp", Op::Exp},   {"log", Op::Log}, {"sqrt", Op::Sqrt},
                                                           {"sin", Op::Sin},   {"cos", Op::Cos}, {"asinh", Op::Asinh},
                                                           {"abs", Op::Abs}};
        for (auto& [n, op] : table)
            if (f == n) return ScalarExpr::func(op, a);
        throw UnknownIdentifier("unknown function '" + f + "'");
    }
    Value add(const Value& a, const Value& b, std::size_t) { return a + b; }
    Value sub(const Value& a, const Value& b, std::size_t) { return a - b; }
    Value mul(const Value& a, const Value& b, std::size_t) { return a * b; }
    Value div(const Value& a, const Value& b, std::size_t) { return a / b; }
    Value neg(const Value& a, std::size_t) { return -a; }
    Value pow(const Value& a, const Value& e, std::size_t off) {
        if (!e.isConst()) throw SyntaxError("exponent must be a constant", off);
        return superint::pow(a, e.value());
    }
};

}  // namespace

ScalarExpr::ScalarExpr() : p_(zeroNode()) {}

ScalarExpr::ScalarExpr(const Coeff& c) : p_(c.exact() && c.isZero() ? zeroNode() : makeNode(Op::Const, c, 0, {}, {}).p_) {}

ScalarExpr ScalarExpr::var(int i) {
    if (i < 1) throw UnknownIdentifier("variable index must be positive");
    return makeNode(Op::Var, Coeff(0), i, {}, {});
}

ScalarExpr ScalarExpr::func(Op f, const ScalarExpr& a) {
    if (a.isConst()) return ScalarExpr(foldFunc(f, a.value()));
    return makeNode(f, Coeff(0), 0, a, {});
}

Op ScalarExpr::op() const { return p_->op; }
bool ScalarExpr::isZero() const { return isConst() && value().isZero(); }
bool ScalarExpr::isOne() const { return isConst() && value().isOne(); }
const Coeff& ScalarExpr::value() const { return p_->value; }
int ScalarExpr::varIndex() const { return p_->var; }
const Coeff& ScalarExpr::exponent() const { return p_->value; }
const ScalarExpr& ScalarExpr::lhs() const { return p_->a; }
const ScalarExpr& ScalarExpr::rhs() const { return p_->b; }

int ScalarExpr::maxVar() const {
    switch (op()) {
        case Op::Const: return 0;
        case Op::Var: return varIndex();
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: return std::max(lhs().maxVar(), rhs().maxVar());
        default: return lhs().maxVar();
    }
}

std::size_t ScalarExpr::size() const {
    switch (op()) {
        case Op::Const:
        case Op::Var: return 1;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: return 1 + lhs().size() + rhs().size();
        default: return 1 + lhs().size();
    }
}

std::string ScalarExpr::str() const { return print(*this); }

double ScalarExpr::evalAt(std::span<const double> point) const { return superint::evalAt(*this, point); }

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.isConst() && b.isConst()) return ScalarExpr(a.value() + b.value());
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    return makeNode(Op::Add, Coeff(0), 0, a, b);
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.isConst() && b.isConst()) return ScalarExpr(a.value() - b.value());
    if (b.isZero()) return a;
    if (a.isZero()) return -b;
    return makeNode(Op::Sub, Coeff(0), 0, a, b);
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.isConst() && b.isConst()) return ScalarExpr(a.value() * b.value());
    if (a.isZero() || b.isZero()) return ScalarExpr();
    if (a.isOne()) return b;
    if (b.isOne()) return a;
    return makeNode(Op::Mul, Coeff(0), 0, a, b);
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    if (b.isZero()) throw DomainError("division by zero");
    if (a.isConst() && b.isConst()) return ScalarExpr(a.value() / b.value());
    if (a.isZero()) return ScalarExpr();
    if (b.isOne()) return a;
    return makeNode(Op::Div, Coeff(0), 0, a, b);
}

ScalarExpr ScalarExpr::operator-() const {
    if (isConst()) return ScalarExpr(-value());
    if (op() == Op::Neg) return lhs();
    return makeNode(Op::Neg, Coeff(0), 0, *this, {});
}

ScalarExpr pow(const ScalarExpr& a, const Coeff& p) {
    if (a.isConst()) return ScalarExpr(foldPow(a.value(), p));
    if (p.exact() && p.isZero()) return ScalarExpr(1);
    if (p.exact() && p.isOne()) return a;
    return makeNode(Op::Pow, p, 0, a, {});
}

ScalarExpr exp(const ScalarExpr& a) { return ScalarExpr::func(Op::Exp, a); }
ScalarExpr log(const ScalarExpr& a) { return ScalarExpr::func(Op::Log, a); }
ScalarExpr sqrt(const ScalarExpr& a) { return ScalarExpr::func(Op::Sqrt, a); }
ScalarExpr sin(const ScalarExpr& a) { return ScalarExpr::func(Op::Sin, a); }
ScalarExpr cos(const ScalarExpr& a) { return ScalarExpr::func(Op::Cos, a); }
ScalarExpr asinh(const ScalarExpr& a) { return ScalarExpr::func(Op::Asinh, a); }
ScalarExpr abs(const ScalarExpr& a) { return ScalarExpr::func(Op::Abs, a); }

const char* funcName(Op f) {
    switch (f) {
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Asinh: return "asinh";
        case Op::Abs: return "abs";
        default: return "?";
    }
}

ScalarExpr parse(std::string_view text, int maxVar) {
    ExprBuilder b{maxVar};
    detail::Parser<ExprBuilder> p(text, b);
    return p.parseAll();
}

std::string print(const ScalarExpr& e) {
    std::ostringstream os;
    printTo(os, e, 0);
    return os.str();
}

double evalAt(const ScalarExpr& e, std::span<const double> x) {
    switch (e.op()) {
        case Op::Const: return e.value().toDouble();
        case Op::Var:
            if (static_cast<std::size_t>(e.varIndex()) > x.size()) throw ContextError("point has too few coordinates");
            return x[e.varIndex() - 1];
        case Op::Add: return evalAt(e.lhs(), x) + evalAt(e.rhs(), x);
        case Op::Sub: return evalAt(e.lhs(), x) - evalAt(e.rhs(), x);
        case Op::Mul: return evalAt(e.lhs(), x) * evalAt(e.rhs(), x);
        case Op::Div: {
            double d = evalAt(e.rhs(), x);
            if (d == 0.0) throw DomainError("division by zero");
            return evalAt(e.lhs(), x) / d;
        }
        case Op::Neg: return -evalAt(e.lhs(), x);
        case Op::Pow: return powDouble(evalAt(e.lhs(), x), e.exponent().toDouble());
        default: return applyFunc(e.op(), evalAt(e.lhs(), x));
    }
}

ScalarExpr diff(const ScalarExpr& e, int i) {
    const ScalarExpr& a = e.lhs();
    switch (e.op()) {
        case Op::Const: return ScalarExpr();
        case Op::Var: return ScalarExpr(e.varIndex() == i ? 1 : 0);
        case Op::Add: return diff(a, i) + diff(e.rhs(), i);
        case Op::Sub: return diff(a, i) - diff(e.rhs(), i);
        case Op::Mul: return diff(a, i) * e.rhs() + a * diff(e.rhs(), i);
        case Op::Div: {
            const ScalarExpr& b = e.rhs();
            ScalarExpr db = diff(b, i);
            if (db.isZero()) return diff(a, i) / b;
            return (diff(a, i) * b - a * db) / pow(b, Coeff(2));
        }
        case Op::Neg: return -diff(a, i);
        case Op::Pow: return ScalarExpr(e.exponent()) * pow(a, e.exponent() - Coeff(1)) * diff(a, i);
        default: break;
    }
    ScalarExpr da = diff(a, i);
    if (da.isZero()) return ScalarExpr();
    switch (e.op()) {
        case Op::Exp: return e * da;
        case Op::Log: return da / a;
        case Op::Sqrt: return da / (ScalarExpr(2) * e);
        case Op::Sin: return cos(a) * da;
        case Op::Cos: return -(sin(a) * da);
        case Op::Asinh: return da * pow(a * a + ScalarExpr(1), Coeff::ratio(-1, 2));
        case Op::Abs: return a / e * da;  // sign(a); undefined at a = 0
        default: break;
    }
    throw Error("diff: unexpected node");
}

ScalarExpr substitute(const ScalarExpr& e, const std::vector<ScalarExpr>& subs) {
    std::unordered_map<const ExprNode*, ScalarExpr> memo;
    std::function<ScalarExpr(const ScalarExpr&)> go = [&](const ScalarExpr& x) -> ScalarExpr {
        auto it = memo.find(x.node());
        if (it != memo.end()) return it->second;
        ScalarExpr r;
        switch (x.op()) {
            case Op::Const: r = x; break;
            case Op::Var:
                r = static_cast<std::size_t>(x.varIndex()) <= subs.size() ? subs[x.varIndex() - 1] : x;
                break;
            case Op::Add: r = go(x.lhs()) + go(x.rhs()); break;
            case Op::Sub: r = go(x.lhs()) - go(x.rhs()); break;
            case Op::Mul: r = go(x.lhs()) * go(x.rhs()); break;
            case Op::Div: r = go(x.lhs()) / go(x.rhs()); break;
            case Op::Neg: r = -go(x.lhs()); break;
            case Op::Pow: r = pow(go(x.lhs()), x.exponent()); break;
            default: r = ScalarExpr::func(x.op(), go(x.lhs())); break;
        }
        memo.emplace(x.node(), r);
        return r;
    };
    return go(e);
}

bool structurallyEqual(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.node() == b.node()) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
        case Op::Const: return a.value().identical(b.value());
        case Op::Var: return a.varIndex() == b.varIndex();
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: return structurallyEqual(a.lhs(), b.lhs()) && structurallyEqual(a.rhs(), b.rhs());
        case Op::Pow: return a.exponent().identical(b.exponent()) && structurallyEqual(a.lhs(), b.lhs());
        default: return structurallyEqual(a.lhs(), b.lhs());
    }
}

bool dependsOn(const ScalarExpr& e, int i) {
    switch (e.op()) {
        case Op::Const: return false;
        case Op::Var: return e.varIndex() == i;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: return dependsOn(e.lhs(), i) || dependsOn(e.rhs(), i);
        default: return dependsOn(e.lhs(), i);
    }
}

CompiledExpr::CompiledExpr(const ScalarExpr& e) {
    std::size_t depth = 0;
    std::function<void(const ScalarExpr&)> emit = [&](const ScalarExpr& x) {
        switch (x.op()) {
            case Op::Const:
                code_.push_back({Op::Const, 0, x.value().toDouble()});
                depth_ = std::max(depth_, ++depth);
                return;
            case Op::Var:
                code_.push_back({Op::Var, x.varIndex() - 1, 0});
                depth_ = std::max(depth_, ++depth);
                return;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div:
                emit(x.lhs());
                emit(x.rhs());
                code_.push_back({x.op(), 0, 0});
                --depth;
                return;
            case Op::Pow:
                emit(x.lhs());
                code_.push_back({Op::Pow, 0, x.exponent().toDouble()});
                return;
            default:
                emit(x.lhs());
                code_.push_back({x.op(), 0, 0});
                return;
        }
    };
    emit(e);
}

double CompiledExpr::operator()(const double* x) const {
    constexpr std::size_t kLocal = 64;
    double local[kLocal];
    std::vector<double> heap;
    double* st = local;
    if (depth_ > kLocal) {
        heap.resize(depth_);
        st = heap.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::Const: st[sp++] = in.value; break;
            case Op::Var: st[sp++] = x[in.var]; break;
            case Op::Add: --sp; st[sp - 1] += st[sp]; break;
            case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
            case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
            case Op::Div:
                --sp;
                if (st[sp] == 0.0) throw DomainError("division by zero");
                st[sp - 1] /= st[sp];
                break;
            case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
            case Op::Pow: {
                double p = in.value;
                double& v = st[sp - 1];
                if (p == 2.0)
                    v = v * v;
                else
                    v = powDouble(v, p);
                break;
            }
            default: st[sp - 1] = applyFunc(in.op, st[sp - 1]); break;
        }
    }
    return sp ? st[0] : 0.0;
}

}  // namespace superint
