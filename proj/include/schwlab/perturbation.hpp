#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "schwlab/metric.hpp"

namespace schwlab {

/// A horizon profile function: f on [C_f, inf) with f(C_f) = 0, f > 0 beyond,
/// and 1/(u f(u)) integrable at the left endpoint. The seed of the metric
/// construction in build_metric_from_f.
struct ProfileFunction {
    double C_f = 0.0;
    std::function<double(double)> f;
    std::function<double(double)> df;
    // Largest u at which f is defined; finite for tabulated profiles.
    double max_u = std::numeric_limits<double>::infinity();
};

/// The Schwarzschild profile function f(u) = sqrt(1 - 2m/u^{n-2k over k}).
ProfileFunction schwarzschild_profile_function(const SchwarzschildParams& sp);

/// Piecewise-linear bump E of the mixed-sign example: 0 on [2m, 3m], slope
/// -m/256 to 4m, slope +m/256 to 6m, constant m^2/256 beyond.
double example44_E(double m, double u);

/// E mollified by a quartic (biweight) kernel of half-width `width`; C^3,
/// equal to E outside width-neighborhoods of the breakpoints {3m, 4m, 6m}.
double example44_E_smoothed(double m, double width, double u);
double example44_E_smoothed_derivative(double m, double width, double u);

/// f(u) = f_{3,m}(u) + E_smoothed(u)/u^2 on [2m, inf). Requires
/// 0 < smoothing_width < m/4; throws profile_error if the smoothed profile
/// fails positivity beyond the horizon.
ProfileFunction example44_profile(double m, double smoothing_width);

/// Monotone-cubic profile from a two-column (u, f) table. Interpolation is
/// carried out in the square-root-stretched abscissa w = sqrt(u - C_f), which
/// keeps the horizon vanishing f ~ c sqrt(u - C_f) accurate. The first row
/// defines C_f and must have f = 0; u must be strictly increasing and f > 0
/// after the first row. Evaluation beyond the last row throws.
ProfileFunction profile_function_from_table(std::vector<double> u, std::vector<double> f);
ProfileFunction load_profile_table(const std::string& path);

/// Refinement test of int dx/(x f(x)) at the left endpoint: dyadic shells
/// toward C_f must have geometrically decaying contributions.
struct IntegrabilityCheck {
    bool integrable = false;
    double shell_ratio = 0.0; // mean contribution ratio of the innermost shells
};
IntegrabilityCheck check_integrability(const ProfileFunction& pf);

/// The metric construction: h(u) = R_f exp(int_{C_f}^u dx/(x f(x))) is the
/// Euclidean radius of the sphere with areal coordinate u, and
/// phi(r) = log(u(r)/r). The built profile has horizon radius R_f, areal
/// horizon C_f and recovers f as its profile function. The endpoint
/// singularity is regularized by x = C_f + w^2. Throws profile_error for a
/// non-integrable endpoint. n is the dimension the metric lives in.
MetricProfile build_metric_from_f(const ProfileFunction& pf, double R_f, int n);

/// Perturbation budget (a, b) against the reference mass m in dimension n.
struct PerturbationBudget {
    double a = 0.0;
    double b = 0.0;
    int n = 3;
    double m = 1.0;

    double cond42_lhs() const { return (3.0 * n - 4.0) * a + (2.0 * n - 3.0) * (n - 2.0) * b; }
    double cond42_rhs() const { return (n - 2.0) * (n - 2.0) * m * m; }
    bool satisfies_cond42() const { return cond42_lhs() < cond42_rhs(); }
};

/// Sampling plan for the hypothesis checks. The margin grid is log-spaced on
/// [C_phi * u_min_factor, C_phi * u_max_factor]; u0_samples are absolute
/// u0 values at which R(phi, u0) is evaluated.
struct Theorem42Grid {
    double u_min_factor = 1.0 + 1e-9;
    double u_max_factor = 1e4;
    int points = 2048;
    std::vector<double> u0_samples;
    double tol = 1e-10;
};

struct PerturbationReport {
    PerturbationBudget budget;
    double cond41_margin_deriv = 0.0; // min over grid of a/u^{2n-4} - (u f' - u f_{n,m}')
    double cond41_margin_B = 0.0;     // min over grid of (B(f) - B(f_{n,m})) + b/u^{2n-4}
    double cond42_lhs = 0.0;
    double cond42_rhs = 0.0;
    std::vector<std::pair<double, double>> R_samples; // (u0, R(phi, u0))
    bool passed = false; // margins >= 0 and cond42_lhs < cond42_rhs
};

/// Checks the perturbation hypotheses of the profile against the reference
/// Schwarzschild f_{n,m} and samples R(phi, u0). Requires the reference to be
/// k = 1 and C_phi >= (2m)^{1/(n-2)} (hypothesis error otherwise).
PerturbationReport check_theorem42(const MetricProfile& profile,
                                   const SchwarzschildParams& reference,
                                   const PerturbationBudget& budget,
                                   const Theorem42Grid& grid);

/// Scalar-curvature sign scan (n = 3 profiles) on a log grid of u values.
/// sign is -1/0/+1 with |value| < 1e-9 counted as 0.
struct ScalarSample {
    double u = 0.0;
    double value = 0.0;
    int sign = 0;
};
std::vector<ScalarSample> scalar_sign_scan(const MetricProfile& profile,
                                           double u_lo, double u_hi, int samples);

} // namespace schwlab
