#pragma once

#include <functional>

namespace schwlab {

/// Result of a numerical integration, with an honest error estimate.
/// For improper integrals handled by truncation, truncation_point records
/// where the domain was cut and error_estimate includes the analytic tail bound.
struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double truncation_point = 0.0;
    long long evaluations = 0;
};

/// Single Gauss-Kronrod 15(7) panel on [a, b].
/// Returns the Kronrod value; *error gets |K15 - G7|.
double kronrod15(const std::function<double(double)>& f, double a, double b,
                 double* error, long long* evaluations);

/// Globally adaptive Gauss-Kronrod quadrature on a finite interval.
/// Splits the worst panel until the summed panel errors fall below
/// max(abs_tol, rel_tol * |value|) or max_panels is reached. Throws
/// numerical_error if the budget is exhausted far from the tolerance.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol, double rel_tol,
                                    int max_panels = 4000);

} // namespace schwlab
