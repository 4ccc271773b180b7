#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyperqif::detail {

namespace {

// Pivot elements smaller than this are ineligible: a pivot near zero
// rescales its row by a huge factor and the roundoff it drags in wrecks
// the rest of the tableau.
constexpr double kPivotEligibility = 1e-7;
// Two ratios within this of each other count as tied.
constexpr double kRatioTie = 1e-9;
// Reduced costs above this are treated as non-negative.
constexpr double kReducedCostTolerance = 1e-9;
constexpr double kPhase1Tolerance = 1e-9;

/// Minimum-ratio row for an entering column, or m when none is eligible.
/// Two-pass Harris-style test: find the minimum ratio (rhs clamped at
/// zero), then among near-tied rows prefer the largest pivot element for
/// stability, then the smallest basic index.
std::size_t pick_leaving_row(const std::vector<std::vector<double>>& T,
                             const std::vector<std::size_t>& basis,
                             std::size_t entering, std::size_t rhs) {
    const std::size_t m = T.size();
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        if (T[i][entering] <= kPivotEligibility) continue;
        min_ratio = std::min(min_ratio, std::max(T[i][rhs], 0.0) / T[i][entering]);
    }
    std::size_t leaving = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (T[i][entering] <= kPivotEligibility) continue;
        const double ratio = std::max(T[i][rhs], 0.0) / T[i][entering];
        if (ratio > min_ratio + kRatioTie) continue;
        if (leaving == m || T[i][entering] > T[leaving][entering] * (1.0 + 1e-12) ||
            (T[i][entering] > T[leaving][entering] * (1.0 - 1e-12) &&
             basis[i] < basis[leaving])) {
            leaving = i;
        }
    }
    return leaving;
}

/// Tableau rows T (m x (cols+1), last column = rhs) with basis[i] naming
/// the column basic in row i. Pivots until no improving column has an
/// eligible pivot row. Entering: first column with negative reduced cost
/// that admits a pivot.
void run_simplex(std::vector<std::vector<double>>& T, std::vector<std::size_t>& basis,
                 const std::vector<double>& cost, std::size_t cols) {
    const std::size_t m = T.size();
    const std::size_t rhs = cols;
    const std::size_t max_iterations = 1000 + 200 * (m + cols);

    for (std::size_t iteration = 0; iteration < max_iterations; ++iteration) {
        std::size_t entering = cols;
        std::size_t leaving = m;
        for (std::size_t j = 0; j < cols; ++j) {
            double reduced = cost[j];
            for (std::size_t i = 0; i < m; ++i) reduced -= cost[basis[i]] * T[i][j];
            if (reduced >= -kReducedCostTolerance) continue;
            const std::size_t row = pick_leaving_row(T, basis, j, rhs);
            if (row == m) continue;  // no stable pivot in this column
            entering = j;
            leaving = row;
            break;
        }
        if (entering == cols) return;

        const double pivot = T[leaving][entering];
        for (std::size_t j = 0; j <= cols; ++j) T[leaving][j] /= pivot;
        T[leaving][rhs] = std::max(T[leaving][rhs], 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leaving) continue;
            const double factor = T[i][entering];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) {
                T[i][j] -= factor * T[leaving][j];
            }
            T[i][entering] = 0.0;
            if (T[i][rhs] < 0.0 && T[i][rhs] > -kPhase1Tolerance) T[i][rhs] = 0.0;
        }
        basis[leaving] = entering;
    }
    throw std::runtime_error("simplex: iteration limit reached");
}

}  // namespace

SimplexResult solve_equality_form(const LinearProgram& lp) {
    const std::size_t m = lp.constraints.size();
    const std::size_t n = lp.objective.size();
    for (double b : lp.rhs) {
        if (b < 0.0) throw std::invalid_argument("simplex: rhs must be non-negative");
    }

    // Phase 1 tableau: original columns, then one artificial per row.
    const std::size_t cols = n + m;
    std::vector<std::vector<double>> T(m, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T[i][j] = lp.constraints[i][j];
        T[i][n + i] = 1.0;
        T[i][cols] = lp.rhs[i];
        basis[i] = n + i;
    }

    std::vector<double> phase1_cost(cols, 0.0);
    for (std::size_t j = n; j < cols; ++j) phase1_cost[j] = 1.0;
    run_simplex(T, basis, phase1_cost, cols);

    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n) infeasibility += std::max(T[i][cols], 0.0);
    }

    SimplexResult result;
    result.solution.assign(n, 0.0);

    if (infeasibility > kPhase1Tolerance) {
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n) result.solution[basis[i]] = std::max(T[i][cols], 0.0);
        }
        result.feasible = false;
        result.objective = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            result.objective += lp.objective[j] * result.solution[j];
        }
        return result;
    }

    // Drive leftover zero-level artificials out of the basis, pivoting on
    // the largest-magnitude original entry of the row. Rows with none are
    // redundant and get dropped below.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        std::size_t best_col = n;
        double best_mag = kPivotEligibility;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(T[i][j]) > best_mag) {
                best_mag = std::abs(T[i][j]);
                best_col = j;
            }
        }
        if (best_col == n) continue;
        const double pivot = T[i][best_col];
        for (std::size_t k = 0; k <= cols; ++k) T[i][k] /= pivot;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == i) continue;
            const double factor = T[r][best_col];
            if (factor == 0.0) continue;
            for (std::size_t k = 0; k <= cols; ++k) T[r][k] -= factor * T[i][k];
            T[r][best_col] = 0.0;
        }
        basis[i] = best_col;
    }

    // Phase 2 tableau: original columns only, redundant rows removed,
    // roundoff negatives in the basic values snapped back to zero.
    std::vector<std::vector<double>> T2;
    std::vector<std::size_t> basis2;
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n) continue;
        std::vector<double> row(n + 1, 0.0);
        for (std::size_t j = 0; j < n; ++j) row[j] = T[i][j];
        row[n] = std::max(T[i][cols], 0.0);
        T2.push_back(std::move(row));
        basis2.push_back(basis[i]);
    }
    run_simplex(T2, basis2, lp.objective, n);

    for (std::size_t i = 0; i < T2.size(); ++i) {
        result.solution[basis2[i]] = std::max(T2[i][n], 0.0);
    }
    result.feasible = true;
    result.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        result.objective += lp.objective[j] * result.solution[j];
    }
    return result;
}

}  // namespace hyperqif::detail
