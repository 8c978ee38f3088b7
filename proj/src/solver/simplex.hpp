#pragma once

// Self-contained LP core used by the builtin backend: a bounded-variable
// revised primal simplex over a sparse column-wise matrix, with a
// Gilbert-Peierls sparse LU basis factorization and product-form eta updates.
// Not part of the public surface; everything external goes through solver.hpp.

#include <cstdint>
#include <vector>

namespace microplan::lpcore {

constexpr double kInf = 1e100;

struct LpProblem {
    int num_cols = 0;
    int num_rows = 0;
    std::vector<double> obj;                  // per column
    std::vector<double> col_lb, col_ub;
    std::vector<double> row_lb, row_ub;       // bounds on row activity
    // column-major sparse matrix
    std::vector<int> col_start;               // size num_cols + 1
    std::vector<int> row_index;
    std::vector<double> value;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numeric_error };

enum class VStat : uint8_t { basic, at_lower, at_upper, nonbasic_free };

struct LpResult {
    LpStatus status = LpStatus::numeric_error;
    double objective = 0.0;
    std::vector<double> col_value;
    std::vector<double> row_value;
    long iterations = 0;
};

class SimplexSolver {
  public:
    explicit SimplexSolver(const LpProblem& p);

    /// Temporary column-bound overrides (branch-and-bound); original units.
    void set_col_bounds(int col, double lb, double ub);
    void reset_col_bounds();

    /// Solves from the logical basis, or from `warm` when provided.
    LpResult solve(const std::vector<VStat>* warm = nullptr);

    const std::vector<VStat>& basis_status() const { return vstat_; }

  private:
    // ---- problem data, scaled ----
    int m_ = 0;                      // rows
    int ncols_ = 0;                  // structural columns
    int ntot_ = 0;                   // structural + logical
    std::vector<int> col_start_, row_index_;
    std::vector<double> value_;
    std::vector<double> obj_;        // length ntot_, logical part zero
    std::vector<double> lb_, ub_;    // length ntot_
    std::vector<double> lb0_, ub0_;  // pristine copies for reset
    std::vector<double> row_scale_, col_scale_;

    // ---- simplex state ----
    std::vector<VStat> vstat_;
    std::vector<int> basic_var_;     // variable at each basis position
    std::vector<double> xval_;       // current value per variable
    long iters_ = 0;

    // ---- LU factorization of the basis (PB = LU) ----
    struct Factor {
        std::vector<int> l_start, l_row;     // L columns, original row index
        std::vector<double> l_val;
        std::vector<int> u_start, u_pos;     // U columns, entry at step < k
        std::vector<double> u_val;
        std::vector<double> u_diag;
        std::vector<int> pivot_row;          // step -> original row
        std::vector<int> pinv;               // original row -> step
        bool ok = false;
    } f_;
    struct Eta {
        int pos;                              // basis position replaced
        double pivot;                         // w[pos]
        std::vector<std::pair<int, double>> col;  // other nonzeros of w
    };
    std::vector<Eta> etas_;

    mutable std::vector<double> scratch1_, scratch2_;

    bool factorize();
    void ftran(std::vector<double>& work) const;  // work: dense, row-indexed in, position-indexed out
    void btran(std::vector<double>& work) const;  // position-indexed in, row-indexed out
    void column_of(int var, std::vector<double>& dense, std::vector<int>& pattern) const;
    void compute_basics();
    double infeasibility(std::vector<double>& grad) const;

    LpStatus iterate();
    bool price(const std::vector<double>& y, bool phase1, int& enter, int& dir, bool bland) const;
};

}  // namespace microplan::lpcore
