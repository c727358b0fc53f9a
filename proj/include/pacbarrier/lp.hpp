// Dense linear programming: bounded-variable primal simplex with a
// working-set outer loop for programs with many rows and few variables.
#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace pacb {

enum class RowSense { Le, Ge };

// Minimize objective . x subject to rows and variable bounds. Bounds may be
// infinite. Rows are dense; width equals num_vars.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<RowSense> senses;
    std::vector<double> var_lo;
    std::vector<double> var_hi;

    static constexpr double kInf = std::numeric_limits<double>::infinity();

    explicit LinearProgram(int nv = 0)
        : num_vars(nv),
          objective(nv, 0.0),
          var_lo(nv, -kInf),
          var_hi(nv, kInf) {}

    void add_row(std::vector<double> coefs, RowSense sense, double b) {
        rows.push_back(std::move(coefs));
        senses.push_back(sense);
        rhs.push_back(b);
    }
    std::size_t num_rows() const { return rows.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Failure };

struct LpResult {
    LpStatus status = LpStatus::Failure;
    std::vector<double> values;
    double objective = 0.0;
    std::size_t iterations = 0;
    std::size_t outer_rounds = 1;
    double max_residual = 0.0;  // worst row violation at the returned point
};

// Solves the program. Optimal results are re-checked against every row; a
// residual above `tolerance` downgrades the result to Failure rather than
// returning a wrong Optimal.
LpResult solve_lp(const LinearProgram& lp, double tolerance = 1e-7);

}  // namespace pacb
