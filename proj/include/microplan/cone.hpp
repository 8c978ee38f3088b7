#pragma once

#include <string>
#include <vector>

#include "microplan/milp.hpp"

namespace microplan {

/// Affine expression used as a cone argument (variables plus constant).
struct LinExpr {
    std::vector<std::pair<int, double>> terms;
    double offset = 0.0;

    LinExpr() = default;
    LinExpr(int var, double coeff = 1.0) { terms.emplace_back(var, coeff); }
    LinExpr& add(int var, double coeff) {
        terms.emplace_back(var, coeff);
        return *this;
    }
};

struct ConeApproxConfig {
    double accuracy_eps = 1e-3;  // relative outer-approximation error bound
    int max_levels = 12;

    /// Rotation levels needed so sec(pi/2^(levels+1)) <= 1 + eps. Throws
    /// ModelError when the level cap cannot reach the requested accuracy.
    int levels_for(double eps) const;
    int levels() const { return levels_for(accuracy_eps); }

    void validate() const;
};

/// Polyhedral outer approximation of sqrt(x^2 + y^2) <= t: contains the cone,
/// admits at most (1+eps)*t in any direction. Row count is O(log(1/eps)).
/// `t_max` is a finite upper bound on t (required to bound the auxiliaries).
/// Returns the ids of the generated rows.
std::vector<int> approximate_cone(MilpInstance& inst, const LinExpr& x, const LinExpr& y,
                                  const LinExpr& t, double t_max, const ConeApproxConfig& cfg,
                                  const std::string& tag);

/// Same guarantee for sqrt(x^2 + y^2 + z^2) <= t via a two-stage tower; the
/// per-stage accuracy is compounded so the overall bound stays (1+eps).
std::vector<int> approximate_cone3(MilpInstance& inst, const LinExpr& x, const LinExpr& y,
                                   const LinExpr& z, const LinExpr& t, double t_max,
                                   const ConeApproxConfig& cfg, const std::string& tag);

/// Rotated cone p^2 + q^2 <= psi * nu (psi, nu >= 0), rewritten through
/// u = (psi+nu)/2, v = (psi-nu)/2 as sqrt(p^2+q^2+v^2) <= u and approximated
/// with approximate_cone3. `u_max` bounds (psi_max + nu_max)/2.
std::vector<int> approximate_rotated_cone(MilpInstance& inst, const LinExpr& p, const LinExpr& q,
                                          const LinExpr& psi, const LinExpr& nu, double u_max,
                                          const ConeApproxConfig& cfg, const std::string& tag);

}  // namespace microplan
