#pragma once

#include "schwlab/geodesic.hpp"
#include "schwlab/metric.hpp"
#include "schwlab/quadrature.hpp"

namespace schwlab {

/// alpha = 2m / C0^{n-2}: 1 exactly on the horizon, in (0,1) above it (k = 1).
struct AlphaParameter {
    double value = 0.0;
    static AlphaParameter from_initial_radius(const SchwarzschildParams& sp, double r0);
};

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    double tail_bound = 0.0;
};

/// int_0^d -Ric(gdot, gdot) ds along the geodesic started at r0, integrated as
/// an extra channel of the geodesic ODE with the Ricci value taken from the
/// general conformal formula (independent of the closed-form route).
/// d may be infinity for r0 above the horizon; the trace is then truncated at
/// r = 1e4 * max(r0, R) and the analytic tail bound |Ric| <= (n-1) m (n-2)/r^n
/// is folded into error_estimate. A horizon start has constant integrand and
/// is evaluated in closed form for finite d; d = infinity diverges there and throws.
QuadratureResult ricci_integral_direct(const SchwarzschildParams& sp, double r0,
                                       double d, double tol);

/// Same computation, also exposing the trace and the running partial integrals.
struct DirectRicciIntegral {
    QuadratureResult result;
    GeodesicTrace trace;
};
DirectRicciIntegral ricci_integral_direct_trace(const SchwarzschildParams& sp, double r0,
                                                double d, double tol);

/// The angular integral
///   A(n, alpha) = int_0^{pi/2} [(n-1) sin^{n-2} - n sin^n] / sqrt(1 - alpha sin^{n-2}) dpsi,
/// regular on [0, pi/2] for alpha in [0, 1); A(n, 0) = 0 by the Wallis identity.
QuadratureResult ricci_integral_alpha_form(int n, double alpha, double tol);

/// Chain normalization tying the angular integral to the geodesic one:
/// int_0^inf -Ric ds = m (n-2) / C0^{n-1} * A(n, alpha) for k = 1.
double alpha_route_prefactor(const SchwarzschildParams& sp, double C0);

/// R(phi, u0): the Ricci integral in the areal coordinate,
///   int_{u0}^inf [((n-1)/u - (n-2)u0^2/u^3) u f' - ((n-2)u0^2/u^3) B(f)] du/sqrt(u^2-u0^2),
/// evaluated after u = u0/sin(psi) which removes the endpoint singularity.
/// Requires u0 > C_phi strictly. The improper tail is truncated at
/// u = 1e6 u0 with an analytic bound added to error_estimate.
QuadratureResult R_functional(const MetricProfile& profile, double u0, double tol);

/// Series form of R(phi_{n,m}, u0) for the Schwarzschild profile (k = 1):
/// every term is negative, the expansion variable is x = 2m/u0^{n-2} < 1.
/// Terms are summed until the geometric tail bound drops below
/// 1e-13 |partial sum| or max_terms is reached; tail_bound reports the bound
/// at the stopping point.
SeriesResult R_series_schwarzschild(const SchwarzschildParams& sp, double u0, int max_terms);

} // namespace schwlab
