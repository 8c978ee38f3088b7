#include "microplan/cone.hpp"

#include <cmath>

#include "microplan/types.hpp"

namespace microplan {

namespace {

constexpr double kPi = 3.14159265358979323846;

LinExpr negate(const LinExpr& e) {
    LinExpr out;
    out.offset = -e.offset;
    for (const auto& [v, c] : e.terms) out.terms.emplace_back(v, -c);
    return out;
}

// row: lhs - coeff_t * t <= 0, i.e. lhs <= coeff_t * t  (t affine)
void add_le_expr(MilpInstance& inst, const std::string& name, const LinExpr& lhs,
                 const LinExpr& rhs, std::vector<int>& rows) {
    std::vector<std::pair<int, double>> terms = lhs.terms;
    for (const auto& [v, c] : rhs.terms) terms.emplace_back(v, -c);
    rows.push_back(inst.add_le(name, std::move(terms), rhs.offset - lhs.offset));
}

// Builds one 2-D tower with `levels` folding stages.
std::vector<int> tower2(MilpInstance& inst, const LinExpr& x, const LinExpr& y, const LinExpr& t,
                        double t_max, int levels, const std::string& tag) {
    std::vector<int> rows;
    const double aux_ub = 2.0 * t_max + 1.0;

    int xi = inst.add_var(tag + ".xi0", VarKind::continuous, 0.0, aux_ub);
    int eta = inst.add_var(tag + ".eta0", VarKind::continuous, 0.0, aux_ub);
    // xi0 >= |x|, eta0 >= |y|
    add_le_expr(inst, tag + ".absx_p", x, LinExpr(xi), rows);
    add_le_expr(inst, tag + ".absx_n", negate(x), LinExpr(xi), rows);
    add_le_expr(inst, tag + ".absy_p", y, LinExpr(eta), rows);
    add_le_expr(inst, tag + ".absy_n", negate(y), LinExpr(eta), rows);

    for (int j = 1; j <= levels; ++j) {
        const double theta = kPi / std::pow(2.0, j + 1);
        const double c = std::cos(theta), s = std::sin(theta);
        const int xin = inst.add_var(tag + ".xi" + std::to_string(j), VarKind::continuous, 0.0, aux_ub);
        const int etan =
            inst.add_var(tag + ".eta" + std::to_string(j), VarKind::continuous, 0.0, aux_ub);
        // xi_j = c*xi_{j-1} + s*eta_{j-1}
        rows.push_back(inst.add_eq(tag + ".rot" + std::to_string(j),
                                   {{xin, 1.0}, {xi, -c}, {eta, -s}}, 0.0));
        // eta_j >= |c*eta_{j-1} - s*xi_{j-1}|
        rows.push_back(inst.add_le(tag + ".fold_p" + std::to_string(j),
                                   {{eta, c}, {xi, -s}, {etan, -1.0}}, 0.0));
        rows.push_back(inst.add_le(tag + ".fold_n" + std::to_string(j),
                                   {{xi, s}, {eta, -c}, {etan, -1.0}}, 0.0));
        xi = xin;
        eta = etan;
    }

    const double theta_final = kPi / std::pow(2.0, levels + 1);
    add_le_expr(inst, tag + ".cap", LinExpr(xi), t, rows);
    rows.push_back(
        inst.add_le(tag + ".wedge", {{eta, 1.0}, {xi, -std::tan(theta_final)}}, 0.0));
    return rows;
}

}  // namespace

int ConeApproxConfig::levels_for(double eps) const {
    if (!(eps > 0.0 && eps < 1.0)) throw ModelError("cone accuracy_eps must be in (0, 1)");
    for (int v = 1; v <= max_levels; ++v) {
        const double delta = 1.0 / std::cos(kPi / std::pow(2.0, v + 1)) - 1.0;
        if (delta <= eps) return v;
    }
    throw ModelError("cone accuracy infeasible: eps=" + std::to_string(eps) + " needs more than " +
                     std::to_string(max_levels) + " levels");
}

void ConeApproxConfig::validate() const {
    (void)levels();  // throws on infeasible accuracy or bad eps
}

std::vector<int> approximate_cone(MilpInstance& inst, const LinExpr& x, const LinExpr& y,
                                  const LinExpr& t, double t_max, const ConeApproxConfig& cfg,
                                  const std::string& tag) {
    return tower2(inst, x, y, t, t_max, cfg.levels(), tag);
}

std::vector<int> approximate_cone3(MilpInstance& inst, const LinExpr& x, const LinExpr& y,
                                   const LinExpr& z, const LinExpr& t, double t_max,
                                   const ConeApproxConfig& cfg, const std::string& tag) {
    // Two stages compound multiplicatively; pick the stage accuracy so that
    // (1+eps')^2 <= 1+eps exactly.
    const double stage_eps = std::sqrt(1.0 + cfg.accuracy_eps) - 1.0;
    const int levels = cfg.levels_for(stage_eps);

    const double u_max = 1.05 * t_max + 1.0;
    const int u = inst.add_var(tag + ".norm2", VarKind::continuous, 0.0, u_max);
    std::vector<int> rows = tower2(inst, x, y, LinExpr(u), u_max, levels, tag + ".a");
    auto more = tower2(inst, LinExpr(u), z, t, t_max, levels, tag + ".b");
    rows.insert(rows.end(), more.begin(), more.end());
    return rows;
}

std::vector<int> approximate_rotated_cone(MilpInstance& inst, const LinExpr& p, const LinExpr& q,
                                          const LinExpr& psi, const LinExpr& nu, double u_max,
                                          const ConeApproxConfig& cfg, const std::string& tag) {
    LinExpr u, v;
    u.offset = 0.5 * (psi.offset + nu.offset);
    v.offset = 0.5 * (psi.offset - nu.offset);
    for (const auto& [var, c] : psi.terms) {
        u.terms.emplace_back(var, 0.5 * c);
        v.terms.emplace_back(var, 0.5 * c);
    }
    for (const auto& [var, c] : nu.terms) {
        u.terms.emplace_back(var, 0.5 * c);
        v.terms.emplace_back(var, -0.5 * c);
    }
    return approximate_cone3(inst, p, q, v, u, u_max, cfg, tag);
}

}  // namespace microplan
