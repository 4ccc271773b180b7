#pragma once

#include <cstddef>
#include <vector>

namespace hyperqif::detail {

/// Minimize objective . x  subject to  constraints x = rhs, x >= 0.
/// Every rhs entry must be non-negative (negate a row before building the
/// program if needed).
struct LinearProgram {
    std::vector<std::vector<double>> constraints;
    std::vector<double> rhs;
    std::vector<double> objective;
};

struct SimplexResult {
    bool feasible = false;
    /// Best solution found. On infeasible programs this is the phase-1
    /// terminal point: non-negative, but violating some constraints.
    std::vector<double> solution;
    double objective = 0.0;
};

/// Dense two-phase simplex with Bland's rule. Desk-scale only: no scaling,
/// no sparsity, no revised form.
SimplexResult solve_equality_form(const LinearProgram& lp);

}  // namespace hyperqif::detail
