#pragma once

#include <functional>
#include <vector>

#include "schwlab/metric.hpp"

namespace schwlab {

/// Point on a planar geodesic gamma(s) = r(s) (cos theta, sin theta, 0, ...).
struct GeodesicState {
    double s = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double rdot = 0.0;
    double thetadot = 0.0;
};

struct GeodesicDerivative {
    double rdot = 0.0;
    double thetadot = 0.0;
    double rddot = 0.0;
    double thetaddot = 0.0;
};

/// Discrete geodesic solution with conserved-quantity diagnostics.
/// states are the accepted integrator steps, strictly increasing in s.
/// ricci_integral holds the running value of int_0^s -Ric(gdot, gdot) ds'
/// per state when the trace was produced by the direct Ricci route; empty otherwise.
struct GeodesicTrace {
    SchwarzschildParams params;
    double r0 = 0.0;
    double C0 = 0.0; // angular momentum r^2 e^{2 phi} thetadot
    std::vector<GeodesicState> states;
    std::vector<double> ricci_integral;
    double max_arclength_residual = 0.0;
    double max_C_residual = 0.0; // relative to C0
};

/// Unit-speed initial data perpendicular to a hyperplane through the origin:
/// theta(0) = 0, rdot(0) = 0, thetadot(0) = e^{-phi(r0)}/r0.
GeodesicState initial_state(const SchwarzschildParams& sp, double r0);

/// Right-hand side of the planar geodesic system solved for (rddot, thetaddot).
GeodesicDerivative geodesic_rhs(const SchwarzschildParams& sp, const GeodesicState& st);

/// |e^{2 phi}(rdot^2 + r^2 thetadot^2) - 1| for a state (unit-speed residual).
double arclength_residual(const SchwarzschildParams& sp, const GeodesicState& st);

/// Conserved angular momentum C(s) = r^2 e^{2 phi} thetadot of a state.
double angular_momentum(const SchwarzschildParams& sp, const GeodesicState& st);

/// Closed-form radial speed sqrt(u(r)^2 - C0^2) / (r e^{2 phi(r)}).
/// Throws std::domain_error when the square-root argument is negative beyond
/// a roundoff allowance.
double radial_speed_closed_form(const SchwarzschildParams& sp, double r, double C0);

/// Adaptive 5(4) Dormand-Prince integration to arclength s_max. The returned
/// trace satisfies max_arclength_residual <= tol and max_C_residual <= tol
/// (the integrator retries at tighter internal tolerance if needed and throws
/// integration_error when it cannot deliver). Practical floor for tol is
/// about 1e-11. A start exactly on the horizon yields the analytic trace
/// r == R, theta linear in s.
GeodesicTrace integrate_geodesic(const SchwarzschildParams& sp, double r0,
                                 double s_max, double tol);

/// Same integrator, stopped once r reaches r_stop (requires r0 above the horizon).
GeodesicTrace integrate_to_radius(const SchwarzschildParams& sp, double r0,
                                  double r_stop, double tol);

namespace detail {

// Shared integrator core. ric_fn, when set, is integrated as an extra
// quadrature channel: dz/ds = ric_fn(r, rdot, thetadot).
GeodesicTrace integrate_core(const SchwarzschildParams& sp, double r0,
                             double s_max, double r_stop, double tol,
                             const std::function<double(double, double, double)>& ric_fn);

} // namespace detail

} // namespace schwlab
