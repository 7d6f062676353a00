#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "superint/box.hpp"
#include "superint/distrib.hpp"
#include "superint/special.hpp"

namespace superint {

enum class Symmetry { Radial, Axial, Generic };
enum class Backend { Auto, Radial, Axial, Levelset, Grid };

std::string backendName(Backend b);
Backend parseBackend(std::string_view s);
std::string symmetryName(Symmetry s);

// scale * int integrand * D(g0) * prod H(-c_i) dV, D = delta^(order) or H(heavisideSign * g0)
struct BosonicIntegralTask {
    int m = 1;
    ScalarExpr integrand;
    double scale = 1;
    ScalarExpr phaseBody;
    bool delta = false;
    int order = 0;
    int heavisideSign = -1;
    std::vector<ScalarExpr> constraints;  // each c means c <= 0
    Symmetry symmetry = Symmetry::Generic;
    int axis = 0;
    Box box;
};

struct IntegralResult {
    double value = 0;
    double errorEstimate = 0;
    std::string backend;
    int taskCount = 0;
};

struct IntegrateOptions {
    Backend backend = Backend::Auto;
    std::optional<Box> box;
    int axis = 0;                // preferred axial coordinate; 0 tries them all
    double tolerance = 0;        // 0 selects the backend default
    int threads = 1;
    std::vector<double> center;  // pole of the polar (radial) backend; empty means the origin
    int levelsetCells = 0;       // 0 selects the default resolution
};

inline constexpr double kRadialTolerance = 1e-8;
inline constexpr double kGenericTolerance = 1e-4;

// probes e(x) against e at the same distance from center, resp. the same (|x^|, x_axis)
bool isRadialAbout(const ScalarExpr& e, int m, const std::vector<double>& center, double spread);
bool isAxialAbout(const ScalarExpr& e, int m, int axis, double spread);
// fills symmetry and axis from the phase, constraints and integrand
void classify(BosonicIntegralTask& t, int preferredAxis = 0);

std::vector<BosonicIntegralTask> berezinReduce(const DistributionExpansion& d, const SuperFunction& F,
                                               const std::vector<ScalarExpr>& constraints, const Box& box);
std::map<CliffordKey, std::vector<BosonicIntegralTask>> berezinReduce(const CliffordExpansion& d,
                                                                      const std::vector<ScalarExpr>& constraints, const Box& box);

IntegralResult evaluate(const BosonicIntegralTask& t, const IntegrateOptions& opt = {});
IntegralResult evaluateAll(const std::vector<BosonicIntegralTask>& ts, const IntegrateOptions& opt = {});

// int H(-g) prod H(-c_i) F; constraints must be purely bosonic
IntegralResult domainIntegral(const SuperFunction& g, const SuperFunction& F, const std::vector<SuperFunction>& constraints,
                              const IntegrateOptions& opt);
// int delta(g) |d_x[g]| prod H(-c_i) F
IntegralResult surfaceIntegral(const SuperFunction& g, const SuperFunction& F, const std::vector<SuperFunction>& constraints,
                               const IntegrateOptions& opt);
// -int delta(g) d_x[g] F prod H(-c_i), one result per Clifford component
std::map<CliffordKey, IntegralResult> orientedSurfaceIntegral(const SuperFunction& g, const SuperFunction& F,
                                                              const std::vector<SuperFunction>& constraints,
                                                              const IntegrateOptions& opt);

// (Pizzetti series, engine value of 2 int delta(x^2 + 1)|x| P), both on the unit supersphere
std::pair<double, double> pizzettiCompare(const SuperFunction& p);

// phase g (region g <= 0), constraints and a default box for a catalog shape:
// superball/supersphere -x^2 - R^2; paraboloid -x^^2 - x_m with x_m <= h;
// hyperboloid -x^^2 - x_m^2 - 1 with x_m^2 <= h^2, where x^ drops the last bosonic coordinate
struct ShapeProblem {
    SuperFunction g;
    std::vector<SuperFunction> constraints;
    Box box;
};
ShapeProblem shapeProblem(Shape s, int m, int n, double param);
// volume = domainIntegral(g, 1), area = surfaceIntegral(g, 1); the shape's box is used if opt has none
IntegralResult shapeIntegral(Shape s, Kind k, int m, int n, double param, IntegrateOptions opt = {});

// the bosonic body of a constraint; throws ParityError if it carries Grassmann terms
ScalarExpr bosonicConstraint(const SuperFunction& c);

}  // namespace superint
