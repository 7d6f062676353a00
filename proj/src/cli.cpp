#include "superint/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "superint/errors.hpp"
#include "superint/greenkernel.hpp"
#include "superint/integrate.hpp"
#include "superint/special.hpp"
#include "superint/verify.hpp"

namespace superint::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kClosedFormTolerance = 1e-6;
constexpr double kStokesTolerance = 1e-4;
constexpr double kCauchyTolerance = 1e-3;
constexpr double kPizzettiTolerance = 1e-7;

struct Flags {
    std::string command;
    std::vector<std::string> args;
    int m = -1;
    int n = 0;
    std::string phase;
    std::vector<std::string> constraints;
    std::string integrand = "1";
    std::string backend = "auto";
    double tol = 0;
    std::string box;
    std::vector<std::string> params;
    std::string format = "json";
    bool pretty = false;
    bool oriented = false;
    int threads = 1;
    unsigned seed = VerifyOptions{}.seed;
    std::string axis;
};

std::vector<double> parseNumbers(const std::string& text) {
    std::vector<double> v;
    std::string s = text;
    for (char& ch : s)
        if (ch == ',' || ch == ';') ch = ' ';
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw ParameterError("not a number: " + tok);
        v.push_back(x);
    }
    return v;
}

std::map<std::string, std::string> parseParams(const std::vector<std::string>& items) {
    std::map<std::string, std::string> p;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ParameterError("--param expects key=value, got " + item);
        p[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return p;
}

double paramNumber(const std::map<std::string, std::string>& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    const auto v = parseNumbers(it->second);
    if (v.size() != 1) throw ParameterError("--param " + key + " expects one number");
    return v[0];
}

std::optional<Box> parseBox(const std::string& text, int m) {
    if (text.empty()) return std::nullopt;
    const auto v = parseNumbers(text);
    if (v.size() == 1) {
        if (!(v[0] > 0)) throw ParameterError("--box half-width must be positive");
        return Box::cube(m, v[0]);
    }
    if (static_cast<int>(v.size()) != 2 * m) throw ParameterError("--box expects a half-width or 2m numbers lo1,hi1,...");
    Box b;
    for (int j = 0; j < m; ++j) {
        if (!(v[2 * j] < v[2 * j + 1])) throw ParameterError("--box bounds must satisfy lo < hi");
        b.lo.push_back(v[2 * j]);
        b.hi.push_back(v[2 * j + 1]);
    }
    return b;
}

int parseAxis(const std::string& text, int m) {
    if (text.empty()) return 0;
    std::string s = text;
    if (s[0] == 'x' || s[0] == 'X') s = s.substr(1);
    const auto v = parseNumbers(s);
    if (v.size() != 1 || v[0] != std::floor(v[0]) || v[0] < 1 || v[0] > m) throw ParameterError("--axis must name x1..xm");
    return static_cast<int>(v[0]);
}

struct Match {
    Shape shape;
    double param;
    Box box;
};

// recognizes the catalog shapes in their standard form, reading R or h off the origin values
std::optional<Match> matchCatalog(const SuperFunction& g, const std::vector<SuperFunction>& cs) {
    const SuperContext& c = g.context();
    const std::vector<double> origin(c.m, 0.0);
    const double g0 = evalAt(g.body(), origin);
    auto same = [&](Shape s, double p) -> std::optional<Match> {
        if (!(p > 0) || !std::isfinite(p)) return std::nullopt;
        try {
            const auto sp = shapeProblem(s, c.m, c.n, p);
            if (sp.constraints.size() != cs.size() || !equivalent(g, sp.g)) return std::nullopt;
            for (std::size_t i = 0; i < cs.size(); ++i)
                if (!equivalent(cs[i], sp.constraints[i])) return std::nullopt;
            return Match{s, p, sp.box};
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    if (cs.empty()) {
        if (auto r = same(Shape::Superball, std::sqrt(-g0))) return r;
        // |x| - R has the same region and surface as -x^2 - R^2
        const double R = -g0;
        if (R > 0 && equivalent(g, superAbs(c) - SuperFunction(c, ScalarExpr(R))))
            return Match{Shape::Superball, R, Box::cube(c.m, 1.25 * R + 0.25)};
        return std::nullopt;
    }
    if (cs.size() != 1) return std::nullopt;
    const double c0 = evalAt(cs[0].body(), origin);
    if (auto r = same(Shape::Paraboloid, -c0)) return r;
    return same(Shape::Hyperboloid, std::sqrt(-c0));
}

class Report {
public:
    explicit Report(const std::string& command) {
        j_["schema"] = 1;
        j_["command"] = command;
    }
    Json& json() { return j_; }

    void write(const Flags& f, std::ostream& out) const {
        if (f.format == "csv") {
            std::vector<std::pair<std::string, std::string>> cells;
            flatten(j_, "", cells);
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csvCell(cells[i].first);
            out << '\n';
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csvCell(cells[i].second);
            out << '\n';
        } else if (f.pretty) {
            std::vector<std::pair<std::string, std::string>> cells;
            flatten(j_, "", cells);
            std::size_t w = 0;
            for (auto& [k, v] : cells) w = std::max(w, k.size());
            for (auto& [k, v] : cells) out << std::left << std::setw(static_cast<int>(w) + 2) << k << v << '\n';
        } else {
            out << j_.dump() << '\n';
        }
    }

private:
    static std::string scalar(const Json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) {
            std::ostringstream s;
            s << std::setprecision(15) << v.get<double>();
            return s.str();
        }
        return v.dump();
    }
    static void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it)
                flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        } else if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
        } else {
            out.emplace_back(prefix, scalar(j));
        }
    }
    static std::string csvCell(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    Json j_;
};

Json components(const CliffordResult& r) {
    Json j = Json::object();
    for (auto& [k, v] : r.components) j[keyString(k)] = v;
    return j;
}

// shared setup of the integration commands
struct Problem {
    SuperContext ctx;
    SuperFunction g, integrand;
    std::vector<SuperFunction> constraints;
    std::optional<Match> match;
    IntegrateOptions opt;
    std::map<std::string, std::string> params;
};

Problem setUp(const Flags& f, bool needPhase) {
    if (f.m < 1) throw ParameterError("--m must be a positive integer");
    if (f.n < 0) throw ParameterError("--n must be nonnegative");
    Problem p{SuperContext(f.m, f.n), {}, {}, {}, std::nullopt, {}, parseParams(f.params)};
    p.integrand = parseSuperFunction(f.integrand, p.ctx);
    if (needPhase) {
        if (f.phase.empty()) throw ParameterError("--phase is required");
        p.g = parseSuperFunction(f.phase, p.ctx);
        for (const auto& c : f.constraints) {
            p.constraints.push_back(parseSuperFunction(c, p.ctx));
            bosonicConstraint(p.constraints.back());
        }
        p.match = matchCatalog(p.g, p.constraints);
    }
    p.opt.backend = parseBackend(f.backend);
    p.opt.tolerance = f.tol;
    p.opt.threads = f.threads;
    p.opt.axis = parseAxis(f.axis, f.m);
    p.opt.box = parseBox(f.box, f.m);
    if (!p.opt.box && p.match) p.opt.box = p.match->box;
    if (needPhase && !p.opt.box) throw ParameterError("--box is required unless the phase is a catalog shape");
    return p;
}

double deviationTolerance(const Problem& p, double fallback) { return paramNumber(p.params, "deviation_tol", fallback); }

void common(Report& r, const Problem& p, const IntegralResult& v) {
    r.json()["value"] = v.value;
    r.json()["error_estimate"] = v.errorEstimate;
    r.json()["backend"] = v.backend;
    r.json()["M"] = p.ctx.M();
}

int integrationCommand(const Flags& f, std::ostream& out) {
    const bool volume = f.command == "volume";
    Problem p = setUp(f, true);
    Report r(f.command);
    IntegralResult v;
    if (!volume && f.oriented) {
        const auto comps = orientedSurfaceIntegral(p.g, p.integrand, p.constraints, p.opt);
        Json cj = Json::object();
        std::string backend;
        for (auto& [k, c] : comps) {
            cj[keyString(k)] = c.value;
            v.errorEstimate += c.errorEstimate;
            if (backend.find(c.backend) == std::string::npos) backend += (backend.empty() ? "" : "+") + c.backend;
            if (k == CliffordKey{0, {}}) v.value = c.value;
        }
        v.backend = backend;
        common(r, p, v);
        r.json()["oriented"] = true;
        r.json()["components"] = cj;
        r.write(f, out);
        return kExitOk;
    }
    v = volume ? domainIntegral(p.g, p.integrand, p.constraints, p.opt) : surfaceIntegral(p.g, p.integrand, p.constraints, p.opt);
    common(r, p, v);
    int code = kExitOk;
    if (p.match && equivalent(p.integrand, SuperFunction(p.ctx, ScalarExpr(1)))) {
        const Shape s = p.match->shape == Shape::Superball && !volume ? Shape::Supersphere : p.match->shape;
        const auto cf = catalog(s, volume ? Kind::Volume : Kind::Area, f.m, f.n, p.match->param);
        const double dev = std::abs(v.value - cf.value);
        r.json()["closed_form"] = cf.value;
        r.json()["formula"] = cf.formula;
        r.json()["shape_parameter"] = cf.param;
        r.json()["deviation"] = dev;
        if (!(dev <= deviationTolerance(p, kClosedFormTolerance) * std::max(1.0, std::abs(cf.value)))) code = kExitTolerance;
    }
    r.write(f, out);
    return code;
}

int pizzettiCommand(const Flags& f, std::ostream& out) {
    Problem p = setUp(f, false);
    const auto [series, engine] = pizzettiCompare(p.integrand);
    Report r(f.command);
    r.json()["value"] = engine;
    r.json()["backend"] = "radial";
    r.json()["M"] = p.ctx.M();
    r.json()["closed_form"] = series;
    const double dev = std::abs(series - engine);
    r.json()["deviation"] = dev;
    r.write(f, out);
    return dev <= deviationTolerance(p, kPizzettiTolerance) * (1 + std::abs(engine)) ? kExitOk : kExitTolerance;
}

int stokesCommand(const Flags& f, std::ostream& out) {
    Problem p = setUp(f, true);
    if (!p.constraints.empty()) throw ParameterError("stokes takes no constraints");
    const SuperFunction F = parseSuperFunction(p.params.count("F") ? p.params.at("F") : "1", p.ctx);
    const auto s = stokesCheck(MixedCliffordElement::scalar(F), MixedCliffordElement::scalar(p.integrand), p.g, p.opt);
    Report r(f.command);
    r.json()["value"] = s.lhs.component({0, {}});
    r.json()["error_estimate"] = s.lhs.errorEstimate + s.rhs.errorEstimate;
    r.json()["backend"] = backendName(p.opt.backend);
    r.json()["M"] = p.ctx.M();
    r.json()["lhs"] = components(s.lhs);
    r.json()["rhs"] = components(s.rhs);
    r.json()["deviation"] = s.deviation;
    r.write(f, out);
    return s.deviation <= deviationTolerance(p, kStokesTolerance) ? kExitOk : kExitTolerance;
}

int cauchyPompeiuCommand(const Flags& f, std::ostream& out) {
    Problem p = setUp(f, true);
    if (!p.constraints.empty()) throw ParameterError("cauchy-pompeiu takes no constraints");
    if (!p.params.count("y")) throw ParameterError("cauchy-pompeiu needs --param y=y1,...,ym");
    const auto y = parseNumbers(p.params.at("y"));
    const auto cp = cauchyPompeiu(p.integrand, p.g, y, p.opt);
    Report r(f.command);
    r.json()["value"] = cp.value.component({0, {}});
    r.json()["error_estimate"] = cp.value.errorEstimate;
    r.json()["backend"] = "radial";
    r.json()["M"] = p.ctx.M();
    r.json()["interior"] = cp.interior;
    r.json()["closed_form"] = cp.expected;
    r.json()["components"] = components(cp.value);
    r.json()["deviation"] = cp.deviation;
    r.write(f, out);
    const double tol = deviationTolerance(p, kCauchyTolerance) * (cp.interior ? 1 + std::abs(cp.expected) : 1.0);
    return cp.deviation <= tol ? kExitOk : kExitTolerance;
}

int catalogCommand(const Flags& f, std::ostream& out) {
    auto params = parseParams(f.params);
    std::string shape = f.args.size() > 0 ? f.args[0] : params.count("shape") ? params.at("shape") : "";
    std::string kind = f.args.size() > 1 ? f.args[1] : params.count("kind") ? params.at("kind") : "volume";
    if (shape.empty()) throw ParameterError("catalog needs a shape");
    if (f.m < 1) throw ParameterError("--m must be a positive integer");
    const Shape s = parseShape(shape);
    const double param =
        paramNumber(params, "R", paramNumber(params, "h", paramNumber(params, "param", f.args.size() > 2 ? parseNumbers(f.args[2]).at(0) : 1.0)));
    const auto cf = catalog(s, parseKind(kind), f.m, f.n, param);
    Report r(f.command);
    r.json()["value"] = cf.value;
    r.json()["M"] = f.m - 2 * f.n;
    r.json()["closed_form"] = cf.value;
    r.json()["formula"] = cf.formula;
    r.json()["shape"] = shapeName(s);
    r.json()["shape_parameter"] = cf.param;
    r.write(f, out);
    return kExitOk;
}

int verifyCommand(const Flags& f, std::ostream& out) {
    std::vector<int> ids;
    const std::string which = f.args.empty() ? "all" : f.args[0];
    if (which == "all") {
        for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
    } else {
        for (double v : parseNumbers(which)) {
            if (v != std::floor(v) || v < 1 || v > kCriterionCount) throw ParameterError("no criterion " + which);
            ids.push_back(static_cast<int>(v));
        }
    }
    VerifyOptions vo;
    vo.seed = f.seed;
    vo.threads = f.threads;
    Json results = Json::array();
    bool all = true;
    for (int id : ids) {
        const auto c = runCriterion(id, vo);
        all = all && c.pass;
        if (f.pretty) out << (c.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << c.name << "): " << c.detail << '\n';
        results.push_back(Json{{"criterion", id},   {"name", c.name},       {"pass", c.pass},
                               {"checks", c.checks}, {"worst_ratio", c.worst}, {"detail", c.detail},
                               {"seconds", c.seconds}});
    }
    if (!f.pretty) {
        Report r(f.command);
        r.json()["pass"] = all;
        r.json()["seed"] = f.seed;
        r.json()["results"] = results;
        r.write(f, out);
    }
    return all ? kExitOk : kExitTolerance;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

// fills every field the command line left unset; repeatable keys accumulate
void applyFile(const CLI::App& app, const std::string& path, Flags& f) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read problem file " + path);
    auto unset = [&](const char* name) { return app.get_option(name)->count() == 0; };
    std::vector<std::string> constraints, params;
    std::string line;
    for (int lineNo = 1; std::getline(in, line); ++lineNo) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError(path + ":" + std::to_string(lineNo) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        auto number = [&] {
            const auto v = parseNumbers(value);
            if (v.size() != 1) throw ParameterError(path + ":" + std::to_string(lineNo) + ": " + key + " expects a number");
            return v[0];
        };
        if (key == "command") {
            if (f.command.empty()) f.command = value;
        } else if (key == "m") {
            if (unset("--m")) f.m = static_cast<int>(number());
        } else if (key == "n") {
            if (unset("--n")) f.n = static_cast<int>(number());
        } else if (key == "phase") {
            if (unset("--phase")) f.phase = value;
        } else if (key == "constraint") {
            constraints.push_back(value);
        } else if (key == "integrand") {
            if (unset("--integrand")) f.integrand = value;
        } else if (key == "backend") {
            if (unset("--backend")) f.backend = value;
        } else if (key == "tol") {
            if (unset("--tol")) f.tol = number();
        } else if (key == "box") {
            if (unset("--box")) f.box = value;
        } else if (key == "axis") {
            if (unset("--axis")) f.axis = value;
        } else if (key == "param") {
            params.push_back(value);
        } else {
            // any other key is a parameter such as R, h, y or F
            params.push_back(key + "=" + value);
        }
    }
    if (unset("--constraint")) f.constraints = constraints;
    // command-line parameters come last and so take precedence
    params.insert(params.end(), f.params.begin(), f.params.end());
    f.params = params;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Integration over superdomains and supersurfaces", "superint"};
    app.add_option("command", f.command, "volume | surface | pizzetti | stokes | cauchy-pompeiu | catalog | verify")
        ->check(CLI::IsMember({"volume", "surface", "pizzetti", "stokes", "cauchy-pompeiu", "catalog", "verify"}));
    app.add_option("args", f.args, "catalog: shape kind [param]; verify: all or a list such as 1,3");
    app.add_option("--m", f.m, "bosonic dimension");
    app.add_option("--n", f.n, "half the number of Grassmann generators q1..q2n");
    app.add_option("--phase", f.phase, "even phase g, region g <= 0");
    app.add_option("--constraint", f.constraints, "bosonic constraint c <= 0, repeatable");
    app.add_option("--integrand", f.integrand, "superfunction integrand; G for stokes and cauchy-pompeiu");
    app.add_option("--backend", f.backend, "auto | radial | axial | levelset | grid");
    app.add_option("--tol", f.tol, "integration tolerance");
    app.add_option("--box", f.box, "half-width, or lo1,hi1,...,lom,him");
    app.add_option("--param", f.params, "key=value: R, h, y, F, deviation_tol, shape, kind");
    app.add_option("--format", f.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--pretty", f.pretty, "human-readable table");
    app.add_flag("--oriented", f.oriented, "oriented surface integral, one value per Clifford component");
    app.add_option("--threads", f.threads, "worker threads")->envname("SUPERINT_THREADS")->check(CLI::PositiveNumber);
    app.add_option("--seed", f.seed, "seed of the verify suites");
    app.add_option("--axis", f.axis, "preferred axis for the axial backend, x3 or 3");
    std::string file;
    app.add_option("--file", file, "key=value problem file; flags override it");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInvalid;
    }
    try {
        if (!file.empty()) applyFile(app, file, f);
        if (f.command.empty()) throw ParameterError("a command is required");
        if (f.command == "volume" || f.command == "surface") return integrationCommand(f, out);
        if (f.command == "pizzetti") return pizzettiCommand(f, out);
        if (f.command == "stokes") return stokesCommand(f, out);
        if (f.command == "cauchy-pompeiu") return cauchyPompeiuCommand(f, out);
        if (f.command == "catalog") return catalogCommand(f, out);
        return verifyCommand(f, out);
    } catch (const Error& e) {
        err << "superint: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::out_of_range& e) {
        err << "superint: missing value\n";
        return kExitInvalid;
    }
}

}  // namespace superint::cli
