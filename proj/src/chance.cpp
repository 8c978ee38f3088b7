#include "microplan/chance.hpp"

#include <cmath>
#include <random>

namespace microplan {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ModelError("normal_quantile: p must be in (0,1)");
    // Acklam's rational approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley refinement against the exact CDF.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

LoadDistribution LoadDistribution::from_case(const NetworkCase& c) {
    if (c.uncertainty.family == UncertaintySpec::Family::none)
        throw ModelError("case has no uncertainty section");
    LoadDistribution d;
    d.family = c.uncertainty.family;
    d.n = c.n();
    d.total_periods = c.total_periods();
    const size_t sz = static_cast<size_t>(d.n) * d.total_periods;
    d.p_mean.resize(sz);
    d.p_disp.resize(sz);
    d.q_mean.resize(sz);
    d.q_disp.resize(sz);
    for (int i = 0; i < d.n; ++i)
        for (int g = 0; g < d.total_periods; ++g) {
            d.p_mean[d.index(i, g)] = c.p_load(i, g);
            d.p_disp[d.index(i, g)] = c.uncertainty.dispersion * std::abs(c.p_load(i, g));
            d.q_mean[d.index(i, g)] = c.q_load(i, g);
            d.q_disp[d.index(i, g)] = c.uncertainty.dispersion * std::abs(c.q_load(i, g));
        }
    return d;
}

UncertaintyBox chance_box(const LoadDistribution& dist, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ModelError("chance_box: epsilon must be in (0,1)");
    long active = 0;
    for (double v : dist.p_disp) active += v > 0.0;
    for (double v : dist.q_disp) active += v > 0.0;

    UncertaintyBox box(dist.n, dist.total_periods);
    // Equal per-coordinate mass, equal-tail split. Degenerate coordinates
    // carry mass 1 and collapse to the mean.
    const double mass = active > 0 ? std::pow(1.0 - epsilon, 1.0 / static_cast<double>(active)) : 1.0;
    auto interval = [&](double mean, double disp, double& lo, double& hi) {
        if (disp <= 0.0) {
            lo = hi = mean;
            return;
        }
        if (dist.family == UncertaintySpec::Family::normal) {
            const double z = normal_quantile(0.5 * (1.0 + mass));
            lo = mean - z * disp;
            hi = mean + z * disp;
        } else {  // uniform on [mean - disp, mean + disp]
            lo = mean - mass * disp;
            hi = mean + mass * disp;
        }
    };
    for (int i = 0; i < dist.n; ++i)
        for (int g = 0; g < dist.total_periods; ++g) {
            const int k = dist.index(i, g);
            interval(dist.p_mean[k], dist.p_disp[k], box.p_lo(i, g), box.p_hi(i, g));
            interval(dist.q_mean[k], dist.q_disp[k], box.q_lo(i, g), box.q_hi(i, g));
        }
    return box;
}

double verify_coverage(const LoadDistribution& dist, const UncertaintyBox& box, long samples,
                       uint64_t seed) {
    if (samples < 10000) throw ModelError("verify_coverage: at least 1e4 samples required");
    const long block = 4096;
    long inside = 0;
    long done = 0;
    for (long b = 0; done < samples; ++b) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(b + 1));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        const long todo = std::min(block, samples - done);
        for (long t = 0; t < todo; ++t) {
            bool ok = true;
            for (int i = 0; i < dist.n && ok; ++i)
                for (int g = 0; g < dist.total_periods && ok; ++g) {
                    const int k = dist.index(i, g);
                    auto draw = [&](double mean, double disp) {
                        if (disp <= 0.0) return mean;
                        return dist.family == UncertaintySpec::Family::normal
                                   ? mean + disp * gauss(rng)
                                   : mean + disp * unif(rng);
                    };
                    const double p = draw(dist.p_mean[k], dist.p_disp[k]);
                    if (p < box.p_lo(i, g) - 1e-12 || p > box.p_hi(i, g) + 1e-12) ok = false;
                    const double q = draw(dist.q_mean[k], dist.q_disp[k]);
                    if (q < box.q_lo(i, g) - 1e-12 || q > box.q_hi(i, g) + 1e-12) ok = false;
                }
            inside += ok;
        }
        done += todo;
    }
    return static_cast<double>(inside) / static_cast<double>(samples);
}

}  // namespace microplan
