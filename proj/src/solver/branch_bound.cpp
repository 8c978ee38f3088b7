#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <sstream>
#include <cstdlib>
#include <cstdio>

#include "microplan/solver.hpp"
#include "simplex.hpp"

// Builtin backend: LP relaxations via the sparse simplex, integrality via
// best-bound branch and bound with warm-started children. Fully deterministic:
// no randomness, stable tie-breaking everywhere.

namespace microplan {

namespace {

using lpcore::LpProblem;
using lpcore::LpResult;
using lpcore::LpStatus;
using lpcore::SimplexSolver;
using lpcore::VStat;

LpProblem to_lp(const MilpInstance& inst) {
    LpProblem p;
    p.num_cols = inst.num_vars();
    p.num_rows = inst.num_rows();
    p.obj.resize(p.num_cols);
    p.col_lb.resize(p.num_cols);
    p.col_ub.resize(p.num_cols);
    for (int j = 0; j < p.num_cols; ++j) {
        const auto& v = inst.var(j);
        p.obj[j] = v.obj;
        p.col_lb[j] = v.lb;
        p.col_ub[j] = v.ub;
    }
    p.row_lb.resize(p.num_rows);
    p.row_ub.resize(p.num_rows);
    // Row-major terms transposed into column-major storage.
    std::vector<int> count(p.num_cols, 0);
    for (const auto& r : inst.rows())
        for (const auto& [v, c] : r.terms)
            if (c != 0.0) ++count[v];
    p.col_start.assign(p.num_cols + 1, 0);
    for (int j = 0; j < p.num_cols; ++j) p.col_start[j + 1] = p.col_start[j] + count[j];
    p.row_index.resize(p.col_start.back());
    p.value.resize(p.col_start.back());
    std::vector<int> fill(p.col_start.begin(), p.col_start.end() - 1);
    for (int r = 0; r < p.num_rows; ++r) {
        p.row_lb[r] = inst.row(r).lo;
        p.row_ub[r] = inst.row(r).hi;
        for (const auto& [v, c] : inst.row(r).terms) {
            if (c == 0.0) continue;
            p.row_index[fill[v]] = r;
            p.value[fill[v]] = c;
            ++fill[v];
        }
    }
    return p;
}

struct BoundChange {
    int var;
    double lb, ub;
};

struct Node {
    double bound;
    int depth;
    long seq;
    std::shared_ptr<Node> parent;
    BoundChange change{-1, 0, 0};
    std::shared_ptr<std::vector<VStat>> basis;
};

struct NodeOrder {
    bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
        if (a->bound != b->bound) return a->bound > b->bound;  // min-heap on bound
        if (a->depth != b->depth) return a->depth < b->depth;  // deeper first
        return a->seq > b->seq;
    }
};

class BuiltinSolver {
  public:
    BuiltinSolver(const MilpInstance& inst, const SolveOptions& opts)
        : inst_(inst), opts_(opts), lp_(to_lp(inst)), simplex_(lp_) {
        for (int j = 0; j < inst.num_vars(); ++j)
            if (inst.var(j).kind != VarKind::continuous) int_vars_.push_back(j);
    }

    MilpSolution run();

  private:
    const MilpInstance& inst_;
    const SolveOptions& opts_;
    LpProblem lp_;
    SimplexSolver simplex_;
    std::vector<int> int_vars_;
    std::ostringstream log_;

    double incumbent_obj_ = lpcore::kInf;
    std::vector<double> incumbent_;
    long nodes_ = 0;
    long lp_iters_ = 0;
    std::chrono::steady_clock::time_point start_;

    bool out_of_time() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() >
               opts_.time_limit;
    }

    void apply_bounds(const Node* node) {
        simplex_.reset_col_bounds();
        std::vector<const BoundChange*> chain;
        for (const Node* p = node; p && p->change.var >= 0; p = p->parent.get())
            chain.push_back(&p->change);
        // Root-to-leaf order so later (deeper) changes win.
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
            simplex_.set_col_bounds((*it)->var, (*it)->lb, (*it)->ub);
    }

    int most_fractional(const std::vector<double>& x) const {
        int best = -1;
        double best_frac = opts_.int_tol;
        for (int j : int_vars_) {
            const double f = x[j] - std::floor(x[j]);
            const double frac = std::min(f, 1.0 - f);
            if (frac > best_frac) {
                best_frac = frac;
                best = j;
            }
        }
        return best;
    }

    void try_incumbent(const std::vector<double>& x, double obj) {
        if (obj < incumbent_obj_ - 1e-12) {
            incumbent_obj_ = obj;
            incumbent_ = x;
        }
    }

    /// Fixes every integer to its rounded LP value and re-solves the LP;
    /// any feasible result seeds the incumbent.
    void rounding_heuristic(const std::vector<double>& relax) {
        for (int j : int_vars_) {
            const double r = std::round(relax[j]);
            simplex_.set_col_bounds(j, std::max(inst_.var(j).lb, r), std::min(inst_.var(j).ub, r));
        }
        LpResult res = simplex_.solve();
        lp_iters_ += res.iterations;
        if (res.status == LpStatus::optimal) try_incumbent(res.col_value, res.objective);
        simplex_.reset_col_bounds();
    }
};

MilpSolution BuiltinSolver::run() {
    start_ = std::chrono::steady_clock::now();
    MilpSolution out;

    // Root relaxation.
    LpResult root = simplex_.solve();
    lp_iters_ += root.iterations;
    ++nodes_;
    log_ << "root lp: status=" << static_cast<int>(root.status) << " iters=" << root.iterations
         << "\n";

    auto finish = [&](SolveStatus st) {
        out.status = st;
        out.nodes = nodes_;
        out.iterations = lp_iters_;
        out.solve_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        out.log = log_.str();
        return out;
    };

    if (root.status == LpStatus::infeasible) return finish(SolveStatus::infeasible);
    if (root.status == LpStatus::unbounded) return finish(SolveStatus::unbounded);
    if (root.status != LpStatus::optimal)
        throw SolveError("builtin backend: root LP failed (numeric)");

    if (int_vars_.empty() || most_fractional(root.col_value) < 0) {
        out.objective = root.objective + inst_.obj_offset();
        out.values = root.col_value;
        out.gap = 0.0;
        log_ << "integral relaxation\n";
        return finish(SolveStatus::optimal);
    }

    rounding_heuristic(root.col_value);

    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> open;
    long seq = 0;
    auto root_node = std::make_shared<Node>();
    root_node->bound = root.objective;
    root_node->depth = 0;
    root_node->seq = seq++;
    root_node->basis = std::make_shared<std::vector<VStat>>(simplex_.basis_status());
    open.push(root_node);

    const double scale = [&] {
        double s = std::abs(root.objective);
        return s > 1.0 ? s : 1.0;
    }();
    double best_bound = root.objective;
    bool timed_out = false;
    bool pruned_by_gap = false;

    while (!open.empty()) {
        if (nodes_ >= opts_.node_limit) break;
        if (out_of_time()) {
            timed_out = true;
            break;
        }
        auto node = open.top();
        open.pop();
        best_bound = node->bound;
        const double cutoff = incumbent_obj_ - opts_.mip_gap * std::max(1.0, std::abs(incumbent_obj_));
        if (node->bound >= cutoff) {  // best-first: every open node is dominated
            pruned_by_gap = true;
            break;
        }

        apply_bounds(node.get());
        LpResult res = simplex_.solve(node->basis.get());
        lp_iters_ += res.iterations;
        ++nodes_;
        if (res.status != LpStatus::optimal && res.status != LpStatus::infeasible &&
            std::getenv("MICROPLAN_BNB_DEBUG")) {
            std::fprintf(stderr, "[bnb] node %ld failed status=%d; bound chain:\n", nodes_,
                         static_cast<int>(res.status));
            for (const Node* pn = node.get(); pn && pn->change.var >= 0; pn = pn->parent.get())
                std::fprintf(stderr, "[bnb]   var %d in [%g, %g]\n", pn->change.var, pn->change.lb,
                             pn->change.ub);
        }
        if (res.status == LpStatus::infeasible) continue;
        if (res.status == LpStatus::unbounded)
            throw SolveError("builtin backend: node LP unbounded (model must bound all variables)");
        if (res.status != LpStatus::optimal)
            throw SolveError(std::string("builtin backend: node LP failed (") +
                             (res.status == LpStatus::iteration_limit ? "iteration limit"
                                                                      : "numeric error") +
                             ")");
        if (res.objective >= cutoff - 1e-12 * scale) continue;

        const int branch = most_fractional(res.col_value);
        if (branch < 0) {
            try_incumbent(res.col_value, res.objective);
            continue;
        }

        const double v = res.col_value[branch];
        auto basis = std::make_shared<std::vector<VStat>>(simplex_.basis_status());
        auto mk = [&](double lb, double ub) {
            auto child = std::make_shared<Node>();
            child->bound = res.objective;
            child->depth = node->depth + 1;
            child->seq = seq++;
            child->parent = node;
            child->change = {branch, lb, ub};
            child->basis = basis;
            open.push(child);
        };
        mk(inst_.var(branch).lb, std::floor(v));   // down child
        mk(std::ceil(v), inst_.var(branch).ub);    // up child
    }

    simplex_.reset_col_bounds();

    if (incumbent_.empty())
        return finish(timed_out ? SolveStatus::time_limit : SolveStatus::infeasible);

    out.values = incumbent_;
    out.objective = incumbent_obj_ + inst_.obj_offset();
    const bool exhausted = !timed_out && !pruned_by_gap && open.empty() && nodes_ < opts_.node_limit;
    const double lower = exhausted ? incumbent_obj_ : std::min(best_bound, incumbent_obj_);
    out.gap = std::max(0.0, (incumbent_obj_ - lower) / std::max(1.0, std::abs(incumbent_obj_)));
    log_ << "nodes=" << nodes_ << " incumbent=" << incumbent_obj_ << " bound=" << lower
         << " gap=" << out.gap << "\n";
    const bool proved = out.gap <= opts_.mip_gap + 1e-15;
    return finish(timed_out ? (proved ? SolveStatus::optimal : SolveStatus::time_limit)
                            : SolveStatus::optimal);
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible: return "feasible";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::time_limit: return "time_limit";
    }
    return "unknown";
}

MilpSolution solve(const MilpInstance& instance, const SolveOptions& opts) {
    if (opts.backend != "builtin")
        throw SolveError("backend unavailable: '" + opts.backend + "' (only 'builtin' is built in)");
    if (!(opts.mip_gap >= 0.0)) throw SolveError("mip_gap must be >= 0");
    if (!(opts.time_limit > 0.0)) throw SolveError("time_limit must be > 0");
    instance.check_consistency();
    BuiltinSolver solver(instance, opts);
    return solver.run();
}

}  // namespace microplan
