#pragma once

#include <span>

#include "schwlab/metric.hpp"

namespace schwlab {

/// Evaluation route of a curvature quantity, for cross-checking.
enum class RicciRoute { closed_form, conformal_general, u_form };

struct CurvatureSample {
    double location = 0.0; // r or u depending on the route
    double value = 0.0;
    RicciRoute route = RicciRoute::closed_form;
};

/// Ric(gdot, gdot) along a unit-speed geodesic of the Schwarzschild family,
/// as a closed form in the radius r and the angular momentum C0.
double ricci_along_geodesic(const SchwarzschildParams& sp, double r, double C0);

/// Value of ricci_along_geodesic on a horizon-confined geodesic (a positive
/// constant; equals (n-2) / (2^{n/(n-2)} m^{2/(n-2)}) for k = 1).
double ricci_horizon_value(const SchwarzschildParams& sp);

/// Radius at which ricci_along_geodesic changes sign for given C0:
/// the root of the bracketed factor, i.e. u(r) = C0 sqrt(n/(n-1)).
double ricci_sign_change_radius(const SchwarzschildParams& sp, double C0);

/// Quadratic form of the Ricci tensor of e^{2 phi} g_flat at radius r:
/// Ric(v, v) = radial * <x/r, v>^2 + isotropic * |v|^2 (flat inner products).
struct RicciCoefficients {
    double radial = 0.0;
    double isotropic = 0.0;
};
RicciCoefficients conformal_ricci_coefficients(const MetricProfile& profile, double r);

/// Ric(v, v) from the general conformal-transformation formula with analytic
/// phi derivatives (flat background Ricci = 0). Independent oracle for the
/// closed form above; v is given in flat components and is not normalized here.
double conformal_ricci_oracle(const MetricProfile& profile,
                              std::span<const double> x, std::span<const double> v);

/// Scalar curvature in the areal coordinate for n = 3:
///   Scal(u) = -(2 f/u^2) (2 u f' - B(f)),
/// evaluated in the algebraically cancelled form -(2/u^2)(2u f f' - 1 + f^2)
/// which stays finite at u = C_phi.
double scalar_curvature_u_form(const MetricProfile& profile, double u);

/// Scalar curvature for any n as the g-trace of the conformal Ricci formula.
/// Diagnostic cross-check for the u-form; not an independent paper quantity.
double scalar_curvature_diagnostic(const MetricProfile& profile, double r);

/// Bakry-Emery Ricci tensor Ric_f(A, B) of the weighted flat space carrying
/// the Schwarzschild conformal factor as weight (k = 1), flat inner products.
double bakry_emery_ricci(const SchwarzschildParams& sp, std::span<const double> x,
                         std::span<const double> A, std::span<const double> B);

} // namespace schwlab
