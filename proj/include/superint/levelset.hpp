#pragma once

#include <vector>

#include "superint/box.hpp"
#include "superint/expr.hpp"
#include "superint/quadrature.hpp"

namespace superint {

struct LevelsetProblem {
    int m = 2;
    CompiledExpr g;
    std::vector<CompiledExpr> grad;
    CompiledExpr f;
    // each c <= 0; applied as an indicator at the contour vertices
    std::vector<CompiledExpr> constraints;
    Box box;

    static LevelsetProblem make(int m, const ScalarExpr& g, const ScalarExpr& f, const std::vector<ScalarExpr>& constraints,
                                const Box& box);
};

// L(t) = int_{g = t} f / |grad g| dS by marching squares (m = 2) or marching tetrahedra (m = 3),
// with contour vertices placed on the exact level set along grid edges
double layerFunction(const LevelsetProblem& p, double t, int cells);
// (4 L_2N - L_N) / 3
double layerFunctionRichardson(const LevelsetProblem& p, double t, int cells);
// int f delta^(j)(g) = (-1)^j L^(j)(0), central differences with one Richardson step; j <= 2
QuadResult levelsetDelta(const LevelsetProblem& p, int order, int cells);

}  // namespace superint
