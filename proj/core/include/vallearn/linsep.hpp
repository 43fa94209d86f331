#pragma once

#include <cstddef>
#include <vector>

namespace vallearn {

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpConstraint {
    std::vector<double> coeffs;  // coeffs · x <= bound
    double bound = 0.0;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    std::vector<double> duals;  // one multiplier per constraint (Optimal only)
};

// Maximize objective · x subject to the constraints and, when nonneg is
// set, x >= 0 (free variables are split internally otherwise).  Dense
// two-phase tableau simplex with Bland's entering rule, so it terminates
// on every input; answers are exact up to ~1e-9 on rational-friendly data.
LpResult lp_maximize(const std::vector<double>& objective,
                     const std::vector<LpConstraint>& constraints, bool nonneg);

// One training constraint for the separator: x holds dim feature values
// followed by one value coordinate; label is +1 or -1.
struct LabeledPoint {
    std::vector<double> x;
    int label = +1;
};

struct SeparatorProblem {
    std::size_t dim = 0;                    // feature coordinates per point
    std::vector<LabeledPoint> points;       // each x has dim + 1 entries
    std::vector<std::size_t> zero_coords;   // feature coords forced to w = 0
};

struct SeparatorSolution {
    bool feasible = false;
    std::vector<double> w;  // nonnegative, zero on zero_coords
    double z = 1.0;         // >= 1
};

// Finds w >= 0, z >= 1 with label * (w · features - z * value) >= 1 for
// every point, or reports infeasibility.  Among consistent separators the
// one minimizing total weight is returned (ties resolved by the simplex
// pivot order); weight merged across identical feature columns is spread
// evenly over them.  Margins are re-checked to 1e-7 after the solve.
SeparatorSolution solve_consistent_separator(const SeparatorProblem& problem);

}  // namespace vallearn
