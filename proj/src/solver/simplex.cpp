#include "simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <cstdio>

namespace microplan::lpcore {

namespace {

constexpr double kFeasTol = 1e-9;    // primal feasibility, scaled units
constexpr double kDualTol = 1e-7;    // reduced-cost threshold, times the dual scale
constexpr double kPivotTol = 1e-9;   // smallest acceptable pivot
constexpr double kInfeasDeclare = 1e-7;
constexpr int kRefactorEvery = 100;
constexpr long kStallLimit = 400;

double pow2_round(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
    int e = 0;
    std::frexp(s, &e);
    return std::ldexp(1.0, e - 1);
}

}  // namespace

SimplexSolver::SimplexSolver(const LpProblem& p) {
    m_ = p.num_rows;
    ncols_ = p.num_cols;
    ntot_ = ncols_ + m_;
    col_start_ = p.col_start;
    row_index_ = p.row_index;
    value_ = p.value;

    // Geometric-mean equilibration, two passes, rounded to powers of two so
    // scaling is exactly invertible. Integer columns keep scale 1 (bound
    // changes from branching must stay integral).
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(ncols_, 1.0);
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
        for (int j = 0; j < ncols_; ++j)
            for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                const double a = std::abs(value_[k] * row_scale_[row_index_[k]] * col_scale_[j]);
                if (a > 0) {
                    rmin[row_index_[k]] = std::min(rmin[row_index_[k]], a);
                    rmax[row_index_[k]] = std::max(rmax[row_index_[k]], a);
                }
            }
        for (int r = 0; r < m_; ++r)
            if (rmax[r] > 0) row_scale_[r] = pow2_round(row_scale_[r] / std::sqrt(rmin[r] * rmax[r]));
        for (int j = 0; j < ncols_; ++j) {
            double cmin = kInf, cmax = 0.0;
            for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                const double a = std::abs(value_[k] * row_scale_[row_index_[k]] * col_scale_[j]);
                if (a > 0) {
                    cmin = std::min(cmin, a);
                    cmax = std::max(cmax, a);
                }
            }
            if (cmax > 0) col_scale_[j] = pow2_round(col_scale_[j] / std::sqrt(cmin * cmax));
        }
    }
    for (int j = 0; j < ncols_; ++j)
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
            value_[k] *= row_scale_[row_index_[k]] * col_scale_[j];

    auto scale_bound = [](double b, double s) { return std::isfinite(b) ? b * s : b; };
    obj_.assign(ntot_, 0.0);
    lb_.assign(ntot_, 0.0);
    ub_.assign(ntot_, 0.0);
    for (int j = 0; j < ncols_; ++j) {
        obj_[j] = p.obj[j] * col_scale_[j];
        lb_[j] = scale_bound(p.col_lb[j], 1.0 / col_scale_[j]);
        ub_[j] = scale_bound(p.col_ub[j], 1.0 / col_scale_[j]);
    }
    for (int r = 0; r < m_; ++r) {
        lb_[ncols_ + r] = scale_bound(p.row_lb[r], row_scale_[r]);
        ub_[ncols_ + r] = scale_bound(p.row_ub[r], row_scale_[r]);
    }
    lb0_ = lb_;
    ub0_ = ub_;
}

void SimplexSolver::set_col_bounds(int col, double lb, double ub) {
    lb_[col] = std::isfinite(lb) ? lb / col_scale_[col] : lb;
    ub_[col] = std::isfinite(ub) ? ub / col_scale_[col] : ub;
}

void SimplexSolver::reset_col_bounds() {
    lb_ = lb0_;
    ub_ = ub0_;
}

void SimplexSolver::column_of(int var, std::vector<double>& dense, std::vector<int>& pattern) const {
    pattern.clear();
    if (var < ncols_) {
        for (int k = col_start_[var]; k < col_start_[var + 1]; ++k) {
            dense[row_index_[k]] = value_[k];
            pattern.push_back(row_index_[k]);
        }
    } else {
        dense[var - ncols_] = -1.0;
        pattern.push_back(var - ncols_);
    }
}

// ---------------------------------------------------------------------------
// Basis factorization: PB = LU via Gilbert-Peierls left-looking columns with
// partial pivoting. L columns store original row indices; U columns store
// earlier step indices. Steps coincide with basis positions.
// ---------------------------------------------------------------------------

bool SimplexSolver::factorize() {
    const bool debug_fact = std::getenv("MICROPLAN_LP_DEBUG") != nullptr;
    (void)debug_fact;
    int repairs = 0;
    etas_.clear();
    f_ = Factor{};
    f_.pivot_row.assign(m_, -1);
    f_.pinv.assign(m_, -1);
    f_.l_start.assign(1, 0);
    f_.u_start.assign(1, 0);
    f_.u_diag.assign(m_, 0.0);

    std::vector<double> z(m_, 0.0);
    std::vector<int> visited(m_, -1);
    std::vector<int> order, node_stack, edge_ptr;
    order.reserve(m_);

    std::vector<double> coldense(m_, 0.0);
    std::vector<int> colpat;

    for (int step = 0; step < m_; ++step) {
        colpat.clear();
        column_of(basic_var_[step], coldense, colpat);

        // Reachability DFS: topological order of rows to process.
        order.clear();
        for (int r0 : colpat) {
            if (visited[r0] == step) continue;
            node_stack.assign(1, r0);
            edge_ptr.assign(1, f_.pinv[r0] >= 0 ? f_.l_start[f_.pinv[r0]] : -1);
            visited[r0] = step;
            while (!node_stack.empty()) {
                const int r = node_stack.back();
                const int k = f_.pinv[r];
                bool descended = false;
                if (k >= 0) {
                    int& e = edge_ptr.back();
                    while (e < f_.l_start[k + 1]) {
                        const int child = f_.l_row[e++];
                        if (visited[child] != step) {
                            visited[child] = step;
                            node_stack.push_back(child);
                            edge_ptr.push_back(f_.pinv[child] >= 0 ? f_.l_start[f_.pinv[child]] : -1);
                            descended = true;
                            break;
                        }
                    }
                }
                if (!descended && (k < 0 || edge_ptr.back() >= f_.l_start[k + 1])) {
                    node_stack.pop_back();
                    edge_ptr.pop_back();
                    order.push_back(r);
                }
            }
        }
        std::reverse(order.begin(), order.end());  // topological

        for (int r : colpat) z[r] = coldense[r];
        for (int r : colpat) coldense[r] = 0.0;
        for (int r : order) {
            const int k = f_.pinv[r];
            if (k < 0) continue;
            const double zr = z[r];
            if (zr == 0.0) continue;
            for (int e = f_.l_start[k]; e < f_.l_start[k + 1]; ++e) z[f_.l_row[e]] -= f_.l_val[e] * zr;
        }

        // Choose pivot among not-yet-pivotal rows.
        int pivot = -1;
        double best = 0.0;
        for (int r : order) {
            if (f_.pinv[r] >= 0) continue;
            const double a = std::abs(z[r]);
            if (a > best) {
                best = a;
                pivot = r;
            }
        }
        if (pivot < 0 || best < 1e-11) {
            // Numerically dependent column: repair the basis with the logical
            // variable of an uncovered row. If that logical is itself basic at
            // a later position, swap columns (both stay basic); otherwise kick
            // the dependent variable to its nearest bound. Callers recompute
            // basic values afterwards and phase 1 restores feasibility.
            for (int r : order) z[r] = 0.0;
            if (++repairs > 2 * m_) return false;
            int fresh = -1;
            for (int r = 0; r < m_ && fresh < 0; ++r)
                if (f_.pinv[r] < 0 && vstat_[ncols_ + r] != VStat::basic) fresh = r;
            const int displaced = basic_var_[step];
            if (fresh >= 0) {
                const int logical = ncols_ + fresh;
                if (debug_fact)
                    std::fprintf(stderr, "[lu] repair step %d: kick var %d for logical %d\n", step,
                                 displaced, fresh);
                vstat_[displaced] = std::isfinite(lb_[displaced])
                                        ? VStat::at_lower
                                        : (std::isfinite(ub_[displaced]) ? VStat::at_upper
                                                                         : VStat::nonbasic_free);
                xval_[displaced] = vstat_[displaced] == VStat::at_lower
                                       ? lb_[displaced]
                                       : (vstat_[displaced] == VStat::at_upper ? ub_[displaced]
                                                                               : 0.0);
                vstat_[logical] = VStat::basic;
                basic_var_[step] = logical;
            } else {
                // Every uncovered row's logical is basic at a later position;
                // swap with the first of them.
                int k2 = -1, row = -1;
                for (int r = 0; r < m_ && k2 < 0; ++r) {
                    if (f_.pinv[r] >= 0) continue;
                    for (int kk = step + 1; kk < m_ && k2 < 0; ++kk)
                        if (basic_var_[kk] == ncols_ + r) {
                            k2 = kk;
                            row = r;
                        }
                }
                if (k2 < 0) return false;
                if (debug_fact)
                    std::fprintf(stderr, "[lu] repair step %d: swap with position %d\n", step, k2);
                basic_var_[step] = ncols_ + row;
                basic_var_[k2] = displaced;
            }
            --step;  // reprocess this position with the replacement column
            continue;
        }

        for (int r : order) {
            if (z[r] == 0.0) continue;
            const int k = f_.pinv[r];
            if (k >= 0) {
                f_.u_pos.push_back(k);
                f_.u_val.push_back(z[r]);
            } else if (r != pivot) {
                f_.l_row.push_back(r);
                f_.l_val.push_back(z[r] / z[pivot]);
            }
        }
        f_.u_diag[step] = z[pivot];
        f_.pivot_row[step] = pivot;
        f_.pinv[pivot] = step;
        f_.l_start.push_back(static_cast<int>(f_.l_row.size()));
        f_.u_start.push_back(static_cast<int>(f_.u_val.size()));
        for (int r : order) z[r] = 0.0;
    }
    f_.ok = true;
    return true;
}

void SimplexSolver::ftran(std::vector<double>& work) const {
    // L-solve over original row indices, steps in order.
    for (int k = 0; k < m_; ++k) {
        const double xk = work[f_.pivot_row[k]];
        if (xk == 0.0) continue;
        for (int e = f_.l_start[k]; e < f_.l_start[k + 1]; ++e)
            work[f_.l_row[e]] -= f_.l_val[e] * xk;
    }
    // Gather to step space, then U back-substitution.
    auto& y = scratch1_;
    y.resize(m_);
    for (int k = 0; k < m_; ++k) y[k] = work[f_.pivot_row[k]];
    for (int k = m_ - 1; k >= 0; --k) {
        y[k] /= f_.u_diag[k];
        const double yk = y[k];
        if (yk == 0.0) continue;
        for (int e = f_.u_start[k]; e < f_.u_start[k + 1]; ++e) y[f_.u_pos[e]] -= f_.u_val[e] * yk;
    }
    // Product-form updates, oldest first.
    for (const Eta& eta : etas_) {
        double vp = y[eta.pos] / eta.pivot;
        y[eta.pos] = vp;
        if (vp != 0.0)
            for (const auto& [i, w] : eta.col) y[i] -= w * vp;
    }
    work.swap(y);
}

void SimplexSolver::btran(std::vector<double>& work) const {
    // Eta transposes, newest first.
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double s = 0.0;
        for (const auto& [i, w] : it->col) s += w * work[i];
        work[it->pos] = (work[it->pos] - s) / it->pivot;
    }
    // U^T z = c, forward.
    auto& z = scratch1_;
    z.resize(m_);
    for (int k = 0; k < m_; ++k) {
        double s = work[k];
        for (int e = f_.u_start[k]; e < f_.u_start[k + 1]; ++e) s -= f_.u_val[e] * z[f_.u_pos[e]];
        z[k] = s / f_.u_diag[k];
    }
    // L^T u = z, backward; scatter to original rows. Reading a descendant by
    // its original row is exactly u[pinv[row]].
    auto& out = scratch2_;
    out.assign(m_, 0.0);
    for (int k = m_ - 1; k >= 0; --k) {
        double s = z[k];
        for (int e = f_.l_start[k]; e < f_.l_start[k + 1]; ++e)
            s -= f_.l_val[e] * out[f_.l_row[e]];
        out[f_.pivot_row[k]] = s;
    }
    work.swap(out);
}

void SimplexSolver::compute_basics() {
    std::vector<double> rhs(m_, 0.0);
    for (int j = 0; j < ncols_; ++j) {
        if (vstat_[j] == VStat::basic) continue;
        const double xj = xval_[j];
        if (xj == 0.0) continue;
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
            rhs[row_index_[k]] -= value_[k] * xj;
    }
    for (int r = 0; r < m_; ++r) {
        const int v = ncols_ + r;
        if (vstat_[v] != VStat::basic && xval_[v] != 0.0) rhs[r] += xval_[v];
    }
    ftran(rhs);
    for (int k = 0; k < m_; ++k) xval_[basic_var_[k]] = rhs[k];
}

double SimplexSolver::infeasibility(std::vector<double>& grad) const {
    grad.assign(m_, 0.0);
    double total = 0.0;
    for (int k = 0; k < m_; ++k) {
        const int v = basic_var_[k];
        const double x = xval_[v];
        if (x < lb_[v] - kFeasTol) {
            grad[k] = -1.0;
            total += lb_[v] - x;
        } else if (x > ub_[v] + kFeasTol) {
            grad[k] = 1.0;
            total += x - ub_[v];
        }
    }
    return total;
}

bool SimplexSolver::price(const std::vector<double>& y, bool phase1, int& enter, int& dir,
                          bool bland) const {
    enter = -1;
    dir = 0;
    // Reduced costs carry cancellation noise proportional to the dual scale;
    // an absolute 1e-9 threshold would chase that noise forever on problems
    // with O(100) cost coefficients.
    double yscale = 1.0;
    for (double v : y) yscale = std::max(yscale, std::abs(v));
    const double threshold = kDualTol * yscale;
    double best = threshold;
    for (int v = 0; v < ntot_; ++v) {
        const VStat st = vstat_[v];
        if (st == VStat::basic) continue;
        if (ub_[v] - lb_[v] < 1e-14) continue;  // fixed
        double d = phase1 ? 0.0 : obj_[v];
        if (v < ncols_) {
            for (int k = col_start_[v]; k < col_start_[v + 1]; ++k)
                d -= value_[k] * y[row_index_[k]];
        } else {
            d += y[v - ncols_];
        }
        int cand_dir = 0;
        double viol = 0.0;
        if (st == VStat::at_lower && d < -threshold) {
            cand_dir = +1;
            viol = -d;
        } else if (st == VStat::at_upper && d > threshold) {
            cand_dir = -1;
            viol = d;
        } else if (st == VStat::nonbasic_free && std::abs(d) > threshold) {
            cand_dir = d < 0 ? +1 : -1;
            viol = std::abs(d);
        }
        if (cand_dir == 0) continue;
        if (bland) {
            enter = v;
            dir = cand_dir;
            return true;
        }
        if (viol > best) {
            best = viol;
            enter = v;
            dir = cand_dir;
        }
    }
    return enter >= 0;
}

LpStatus SimplexSolver::iterate() {
    const long cap = 200L * (m_ + ncols_) + 20000;
    long stall = 0;
    bool bland = false;
    std::vector<double> grad, y, w(m_, 0.0);
    std::vector<int> wpat;
    const bool debug = std::getenv("MICROPLAN_LP_DEBUG") != nullptr;
    long local_iters = 0;
    int dbg_enter = -1;
    double dbg_delta = 0.0;

    // Progress watchdog: Harris-tolerance drift can sustain pivot cycles whose
    // objective gains are undone at every refactorization. When neither the
    // infeasibility nor the objective improves over a window, switch to
    // Bland's rule with a zero-slack ratio test until real progress resumes.
    double best_measure = kInf;
    long no_progress = 0;
    bool force_refactor = false;
    // When phase 1 stalls on a residual infeasibility within the advertised
    // feasibility tolerance, accept it rather than churn at the noise floor.
    double accept_infeas = kInfeasDeclare;

    while (true) {
        if (iters_ > cap) return LpStatus::iteration_limit;

        const double infeas = infeasibility(grad);
        const bool phase1 = infeas > accept_infeas;
        {
            double obj = 0.0;
            if (!phase1)
                for (int v = 0; v < ntot_; ++v)
                    if (obj_[v] != 0.0) obj += obj_[v] * xval_[v];
            const double measure = phase1 ? 1e12 + infeas : obj;
            if (measure < best_measure - 1e-10 * (1.0 + std::abs(measure))) {
                best_measure = measure;
                no_progress = 0;
                bland = false;
            } else if (++no_progress > kStallLimit) {
                bland = true;
                if (phase1 && no_progress > 3 * kStallLimit && infeas <= 1e-6)
                    accept_infeas = 1e-6;
                if (no_progress > 20 * kStallLimit)
                    return LpStatus::numeric_error;  // hand back for a reseeded attempt
            }
        }
        if (debug && ++local_iters % 5000 == 0) {
            double obj = 0.0;
            for (int v = 0; v < ntot_; ++v) obj += obj_[v] * xval_[v];
            int worst = -1;
            double wv = 0.0;
            for (int k = 0; k < m_; ++k) {
                const int v = basic_var_[k];
                const double lo = lb_[v] - xval_[v], hi = xval_[v] - ub_[v];
                if (lo > wv) { wv = lo; worst = v; }
                if (hi > wv) { wv = hi; worst = v; }
            }
            std::fprintf(stderr,
                         "[lp] it=%ld phase=%d infeas=%.3e obj=%.10e bland=%d enter=%d "
                         "delta=%.3e etas=%zu worst_var=%d viol=%.3e lb=%.6e ub=%.6e\n",
                         local_iters, phase1 ? 1 : 2, infeas, obj, bland ? 1 : 0, dbg_enter,
                         dbg_delta, etas_.size(), worst, wv,
                         worst >= 0 ? lb_[worst] : 0.0, worst >= 0 ? ub_[worst] : 0.0);
        }

        if (phase1) {
            y = grad;
        } else {
            y.assign(m_, 0.0);
            for (int k = 0; k < m_; ++k) y[k] = obj_[basic_var_[k]];
        }
        btran(y);

        int enter = -1, dirsign = 0;
        if (!price(y, phase1, enter, dirsign, bland)) {
            // Converged for this phase; confirm on a fresh factorization.
            if (!etas_.empty()) {
                if (!factorize()) return LpStatus::numeric_error;
                compute_basics();
                continue;
            }
            if (phase1) return LpStatus::infeasible;
            return LpStatus::optimal;
        }

        // FTRAN of the entering column.
        std::fill(w.begin(), w.end(), 0.0);
        column_of(enter, w, wpat);
        ftran(w);


        const double limit = (std::isfinite(ub_[enter]) && std::isfinite(lb_[enter]))
                                 ? ub_[enter] - lb_[enter]
                                 : kInf;

        // Outcome of the ratio test: either a bound flip of the entering
        // variable or a pivot (leave_pos, step, target bound of the leaver).
        int leave_pos = -1;
        double delta = 0.0;
        bool leave_to_lower = true;
        bool flip = false;

        if (phase1) {
            // Piecewise-linear long step: walk the breakpoints of the
            // infeasibility sum while its slope stays negative. One pivot
            // replaces the chain of micro-steps a blocking test would take.
            struct Breakpoint {
                double step;
                int pos;        // basis position, -1 for the entering bound
                double slope_inc;
                bool to_lower;  // bound the variable reaches
            };
            static thread_local std::vector<Breakpoint> bps;
            bps.clear();
            double slope = 0.0;  // d f / d delta, recomputed from contributions
            for (int k = 0; k < m_; ++k) {
                const int v = basic_var_[k];
                const double rate = -dirsign * w[k];
                if (std::abs(rate) < kPivotTol) continue;
                const double x = xval_[v];
                const bool lo_fin = std::isfinite(lb_[v]), hi_fin = std::isfinite(ub_[v]);
                if (x < lb_[v] - kFeasTol) {
                    slope += (rate > 0 ? -rate : -rate);  // g = -1
                    if (rate > 0) {
                        bps.push_back({(lb_[v] - x) / rate, k, rate, true});
                        if (hi_fin) bps.push_back({(ub_[v] - x) / rate, k, rate, false});
                    }
                } else if (x > ub_[v] + kFeasTol) {
                    slope += rate;  // g = +1
                    if (rate < 0) {
                        bps.push_back({(ub_[v] - x) / rate, k, -rate, false});
                        if (lo_fin) bps.push_back({(lb_[v] - x) / rate, k, -rate, true});
                    }
                } else {
                    if (rate > 0 && hi_fin) bps.push_back({(ub_[v] - x) / rate, k, rate, false});
                    if (rate < 0 && lo_fin) bps.push_back({(lb_[v] - x) / rate, k, -rate, true});
                }
            }
            // Moving the entering variable off its bound changes f only
            // through the basics; slope computed above equals the reduced
            // cost d and must be negative.
            if (limit < kInf) bps.push_back({limit, -1, kInf, dirsign < 0});
            std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) {
                if (a.step != b.step) return a.step < b.step;
                return a.pos < b.pos;
            });
            double run = slope;
            size_t chosen = bps.size();
            for (size_t i = 0; i < bps.size(); ++i) {
                run += bps[i].slope_inc;
                if (run >= -1e-12) {
                    chosen = i;
                    break;
                }
            }
            if (chosen == bps.size()) {
                // Slope stayed negative past every breakpoint; numerically
                // inconsistent with f >= 0. Refresh or give up.
                if (!etas_.empty()) {
                    if (!factorize()) return LpStatus::numeric_error;
                    compute_basics();
                    continue;
                }
                return LpStatus::numeric_error;
            }
            if (bps[chosen].pos < 0) {
                flip = true;
                delta = limit;
            } else {
                // Among breakpoints clustered at the chosen step, take the
                // largest pivot magnitude.
                leave_pos = bps[chosen].pos;
                delta = std::max(0.0, bps[chosen].step);
                leave_to_lower = bps[chosen].to_lower;
                const double window = 1e-9 * (1.0 + delta);
                for (size_t i = 0; i <= chosen; ++i) {
                    if (bps[i].pos < 0 || bps[i].step < delta - window) continue;
                    if (std::abs(w[bps[i].pos]) > std::abs(w[leave_pos])) {
                        leave_pos = bps[i].pos;
                        leave_to_lower = bps[i].to_lower;
                    }
                }
            }
        } else {
            // Phase 2: bounded Harris two-pass ratio test.
            auto step_of = [&](int k, double tol) {
                const int v = basic_var_[k];
                const double rate = -dirsign * w[k];
                if (std::abs(rate) < kPivotTol) return kInf;
                const double x = xval_[v];
                if (rate > 0 && std::isfinite(ub_[v])) return (ub_[v] - x + tol) / rate;
                if (rate < 0 && std::isfinite(lb_[v])) return (lb_[v] - x - tol) / rate;
                return kInf;
            };
            const double harris_tol = bland ? 0.0 : kFeasTol;
            double dmax_tol = limit;
            for (int k = 0; k < m_; ++k) dmax_tol = std::min(dmax_tol, step_of(k, harris_tol));
            if (dmax_tol >= kInf) {
                if (!etas_.empty()) {  // confirm unboundedness on a fresh basis
                    if (!factorize()) return LpStatus::numeric_error;
                    compute_basics();
                    continue;
                }
                if (debug) std::fprintf(stderr, "[lp] UNBOUNDED-DIR enter=%d\n", enter);
                return LpStatus::unbounded;
            }
            if (bland) {
                double wmax2 = 0.0;
                for (int k = 0; k < m_; ++k)
                    if (step_of(k, 0.0) <= dmax_tol + 1e-12) wmax2 = std::max(wmax2, std::abs(w[k]));
                const double floor = std::max(kPivotTol, 0.01 * wmax2);
                for (int pass = 0; pass < 2 && leave_pos < 0; ++pass)
                    for (int k = 0; k < m_; ++k) {
                        if (step_of(k, 0.0) > dmax_tol + 1e-12) continue;
                        if (pass == 0 && std::abs(w[k]) < floor) continue;
                        if (leave_pos < 0 || basic_var_[k] < basic_var_[leave_pos]) leave_pos = k;
                    }
            } else {
                double best_pivot = 0.0;
                for (int k = 0; k < m_; ++k) {
                    if (step_of(k, 0.0) > dmax_tol + 1e-12) continue;
                    if (std::abs(w[k]) > best_pivot) {
                        best_pivot = std::abs(w[k]);
                        leave_pos = k;
                    }
                }
            }
            if (leave_pos < 0 || (limit < kInf && limit <= std::max(0.0, step_of(leave_pos, 0.0)))) {
                flip = true;
                delta = limit;
            } else {
                delta = std::max(0.0, step_of(leave_pos, 0.0));
                leave_to_lower = -dirsign * w[leave_pos] < 0;
            }
        }

        ++iters_;
        if (flip) {
            for (int k = 0; k < m_; ++k)
                if (w[k] != 0.0) xval_[basic_var_[k]] -= dirsign * delta * w[k];
            vstat_[enter] = dirsign > 0 ? VStat::at_upper : VStat::at_lower;
            xval_[enter] = dirsign > 0 ? ub_[enter] : lb_[enter];
            continue;
        }

        double wmax = 0.0;
        for (int k = 0; k < m_; ++k) wmax = std::max(wmax, std::abs(w[k]));
        if (std::abs(w[leave_pos]) < std::max(kPivotTol, 1e-7 * wmax)) {
            // An eta with this pivot amplifies noise by 1/|pivot|. On a stale
            // basis retry fresh; on a fresh basis accept the pivot but
            // refactorize immediately afterwards so the eta never propagates.
            if (!etas_.empty()) {
                if (!factorize()) return LpStatus::numeric_error;
                compute_basics();
                continue;
            }
            if (std::abs(w[leave_pos]) < kPivotTol) {
                if (++stall > 2000) {
                    if (debug) std::fprintf(stderr, "[lp] PIVOT-STALL enter=%d\n", enter);
                    return LpStatus::numeric_error;
                }
                bland = true;  // walk to a different vertex of the tie set
                continue;
            }
            force_refactor = true;
        }

        const int leave_var = basic_var_[leave_pos];
        dbg_enter = enter;
        dbg_delta = delta;

        for (int k = 0; k < m_; ++k)
            if (w[k] != 0.0) xval_[basic_var_[k]] -= dirsign * delta * w[k];
        xval_[enter] += dirsign * delta;

        vstat_[leave_var] = leave_to_lower ? VStat::at_lower : VStat::at_upper;
        xval_[leave_var] = leave_to_lower ? lb_[leave_var] : ub_[leave_var];

        vstat_[enter] = VStat::basic;
        basic_var_[leave_pos] = enter;

        Eta eta;
        eta.pos = leave_pos;
        eta.pivot = w[leave_pos];
        for (int k = 0; k < m_; ++k)
            if (k != leave_pos && w[k] != 0.0) eta.col.emplace_back(k, w[k]);
        etas_.push_back(std::move(eta));

        if (force_refactor || static_cast<int>(etas_.size()) >= kRefactorEvery) {
            force_refactor = false;
            if (!factorize()) return LpStatus::numeric_error;
            compute_basics();
        }
    }
}

namespace {
// splitmix64; deterministic per-variable perturbation stream
uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
double unit_rand(uint64_t v) { return static_cast<double>(mix64(v) >> 11) * 0x1p-53; }
}  // namespace

LpResult SimplexSolver::solve(const std::vector<VStat>* warm) {
    LpResult res;
    iters_ = 0;
    long total_iters = 0;

    // Bound sanity: lb > ub means an empty box (from conflicting branching).
    for (int v = 0; v < ntot_; ++v)
        if (lb_[v] > ub_[v] + kFeasTol) {
            res.status = LpStatus::infeasible;
            return res;
        }

    auto nonbasic_home = [&](int v) {
        if (std::isfinite(lb_[v])) {
            vstat_[v] = VStat::at_lower;
            xval_[v] = lb_[v];
        } else if (std::isfinite(ub_[v])) {
            vstat_[v] = VStat::at_upper;
            xval_[v] = ub_[v];
        } else {
            vstat_[v] = VStat::nonbasic_free;
            xval_[v] = 0.0;
        }
    };

    if (m_ == 0) {
        // Pure bound problem.
        xval_.assign(ntot_, 0.0);
        vstat_.assign(ntot_, VStat::at_lower);
        res.status = LpStatus::optimal;
        for (int v = 0; v < ncols_; ++v) {
            double x;
            if (obj_[v] > 0)
                x = lb_[v];
            else if (obj_[v] < 0)
                x = ub_[v];
            else
                x = std::isfinite(lb_[v]) ? lb_[v] : (std::isfinite(ub_[v]) ? ub_[v] : 0.0);
            if (!std::isfinite(x)) {
                res.status = LpStatus::unbounded;
                return res;
            }
            xval_[v] = x;
        }
        res.col_value.assign(xval_.begin(), xval_.begin() + ncols_);
        for (int v = 0; v < ncols_; ++v) {
            res.col_value[v] *= col_scale_[v];
            res.objective += obj_[v] * xval_[v];
        }
        return res;
    }

    const std::vector<double> lb_true = lb_, ub_true = ub_;

    // Up to three attempts: the warm basis first, then cold starts under a
    // reseeded (and finally coarser) bound perturbation. The perturbation
    // breaks the ratio-test ties that drive degenerate cycling; the shell is
    // tiny, so the cleanup pass on the true bounds converges in a few pivots.
    for (int attempt = 0; attempt < 3; ++attempt) {
        iters_ = 0;
        lb_ = lb_true;
        ub_ = ub_true;
        xval_.assign(ntot_, 0.0);
        vstat_.assign(ntot_, VStat::at_lower);

        bool basis_ready = false;
        if (attempt == 0 && warm && static_cast<int>(warm->size()) == ntot_) {
            basic_var_.clear();
            for (int v = 0; v < ntot_; ++v)
                if ((*warm)[v] == VStat::basic) basic_var_.push_back(v);
            if (static_cast<int>(basic_var_.size()) == m_) {
                for (int v = 0; v < ntot_; ++v) {
                    if ((*warm)[v] == VStat::basic) {
                        vstat_[v] = VStat::basic;
                    } else if ((*warm)[v] == VStat::at_upper && std::isfinite(ub_[v])) {
                        vstat_[v] = VStat::at_upper;
                        xval_[v] = ub_[v];
                    } else {
                        nonbasic_home(v);
                    }
                }
                basis_ready = factorize();
            }
        }
        if (!basis_ready) {
            basic_var_.resize(m_);
            for (int r = 0; r < m_; ++r) {
                basic_var_[r] = ncols_ + r;
                vstat_[ncols_ + r] = VStat::basic;
            }
            for (int v = 0; v < ncols_; ++v) nonbasic_home(v);
            if (!factorize()) {
                res.status = LpStatus::numeric_error;
                continue;
            }
        }

        const double pert = attempt < 2 ? 1e-9 : 1e-8;
        const uint64_t seed = 0x51ed0f + 7919 * attempt;
        for (int v = 0; v < ntot_; ++v) {
            if (ub_[v] - lb_[v] < 1e-14) continue;  // keep fixed variables exact
            if (std::isfinite(lb_[v]))
                lb_[v] -= pert * (1.0 + std::abs(lb_[v])) * (0.5 + unit_rand(seed + 2 * v));
            if (std::isfinite(ub_[v]))
                ub_[v] += pert * (1.0 + std::abs(ub_[v])) * (0.5 + unit_rand(seed + 2 * v + 1));
            if (vstat_[v] == VStat::at_lower)
                xval_[v] = lb_[v];
            else if (vstat_[v] == VStat::at_upper)
                xval_[v] = ub_[v];
        }

        compute_basics();
        res.status = iterate();

        if (res.status == LpStatus::optimal) {
            // Cleanup on the true bounds: the factorization is
            // bound-independent, so snap nonbasics back and re-optimize.
            lb_ = lb_true;
            ub_ = ub_true;
            for (int v = 0; v < ntot_; ++v) {
                if (vstat_[v] == VStat::at_lower)
                    xval_[v] = lb_[v];
                else if (vstat_[v] == VStat::at_upper)
                    xval_[v] = ub_[v];
            }
            compute_basics();
            res.status = iterate();
        }
        total_iters += iters_;
        if (res.status == LpStatus::optimal || res.status == LpStatus::infeasible ||
            res.status == LpStatus::unbounded)
            break;
    }
    lb_ = lb_true;
    ub_ = ub_true;

    res.iterations = total_iters;
    if (res.status == LpStatus::optimal) {
        res.col_value.resize(ncols_);
        res.row_value.resize(m_);
        double obj = 0.0;
        for (int v = 0; v < ncols_; ++v) {
            res.col_value[v] = xval_[v] * col_scale_[v];
            obj += obj_[v] * xval_[v];
        }
        for (int r = 0; r < m_; ++r) res.row_value[r] = xval_[ncols_ + r] / row_scale_[r];
        res.objective = obj;
    }
    return res;
}

}  // namespace microplan::lpcore
