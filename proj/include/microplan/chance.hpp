#pragma once

#include <cstdint>

#include "microplan/types.hpp"

namespace microplan {

/// Per-coordinate marginals of the random loads, built from the case's
/// uncertainty section: mean = deterministic load, dispersion relative to it.
struct LoadDistribution {
    UncertaintySpec::Family family = UncertaintySpec::Family::normal;
    // Means and absolute dispersions per coordinate, [node][period] flattened
    // like Scenario. normal: sigma; uniform: half-width of the support.
    int n = 0;
    int total_periods = 0;
    std::vector<double> p_mean, p_disp, q_mean, q_disp;

    static LoadDistribution from_case(const NetworkCase& c);
    int index(int i, int g) const { return i * total_periods + g; }
};

/// Smallest per-coordinate equal-tail box whose joint mass is exactly 1-eps:
/// every non-degenerate coordinate contributes (1-eps)^(1/k) where k counts
/// the non-degenerate coordinates; degenerate ones collapse to their mean.
UncertaintyBox chance_box(const LoadDistribution& dist, double epsilon);

/// Monte Carlo estimate of the probability mass inside `box`, with block-wise
/// seeding so the draw sequence is reproducible for a fixed seed.
double verify_coverage(const LoadDistribution& dist, const UncertaintyBox& box, long samples,
                       uint64_t seed);

/// Standard normal inverse CDF (Acklam rational approximation polished with
/// one Halley step on erfc); |error| < 1e-13 over (0, 1).
double normal_quantile(double p);

}  // namespace microplan
