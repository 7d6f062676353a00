#pragma once

#include <vector>

namespace superint {

// axis-aligned integration box
struct Box {
    std::vector<double> lo, hi;

    static Box cube(int m, double half) { return {std::vector<double>(m, -half), std::vector<double>(m, half)}; }
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const std::vector<double>& x) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] <= lo[i] || x[i] >= hi[i]) return false;
        return true;
    }
};

}  // namespace superint
