#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "schwlab/detail/profile_impl.hpp"

namespace schwlab {

/// Parameters of the Schwarzschild family of metrics on flat n-space,
///   g = (1 + m/(2 r^p))^{4/p} g_flat,   p = (n - 2k)/k,
/// where k = 1 is the classical case. Requires n >= 3, m > 0, n > 2k >= 2.
struct SchwarzschildParams {
    int n = 3;
    double m = 1.0;
    int k = 1;

    void validate() const; // throws std::invalid_argument
    double exponent() const { return (n - 2.0 * k) / k; }
    double horizon_radius() const;  // (m/2)^{1/p}
    double areal_horizon() const;   // (2m)^{1/p}
};

// Closed u-space forms for the Schwarzschild family. These are the reference
// implementations shared by the profile backend and the perturbation checker,
// so that differences of identical profiles cancel exactly.
double schwarzschild_f_u(const SchwarzschildParams& sp, double u);
double schwarzschild_df_du(const SchwarzschildParams& sp, double u);
double schwarzschild_ffprime_u(const SchwarzschildParams& sp, double u);
double schwarzschild_B_u(const SchwarzschildParams& sp, double u);
double schwarzschild_r_of_u(const SchwarzschildParams& sp, double u);

/// A rotationally symmetric conformally flat metric e^{2 phi} g_flat given
/// through phi and two radial derivatives, plus horizon data. Immutable value
/// handle; copies share the backend and are safe to use concurrently.
class MetricProfile {
public:
    explicit MetricProfile(std::shared_ptr<const detail::ProfileImpl> impl)
        : impl_(std::move(impl)) {}

    int dimension() const { return impl_->dimension(); }
    double horizon_radius() const { return impl_->horizon_radius(); }
    double areal_horizon() const { return impl_->areal_horizon(); }

    double phi(double r) const { return impl_->phi(r); }
    double dphi(double r) const { return impl_->dphi(r); }
    double d2phi(double r) const { return impl_->d2phi(r); }
    double conformal_factor(double r) const; // e^{phi(r)}

    double u_of_r(double r) const { return impl_->u_of_r(r); }
    double r_of_u(double u) const { return impl_->r_of_u(u); }
    double f_of_u(double u) const { return impl_->f_of_u(u); }
    double df_du(double u) const { return impl_->df_du(u); }
    double ffprime_of_u(double u) const { return impl_->ffprime_of_u(u); }
    double B_of_u(double u) const { return impl_->B_of_u(u); }
    double max_u() const { return impl_->max_u(); }

    const detail::ProfileImpl& impl() const { return *impl_; }

private:
    std::shared_ptr<const detail::ProfileImpl> impl_;
};

/// Exact Schwarzschild (k = 1) and generalized (k > 1) profiles.
MetricProfile schwarzschild_profile(const SchwarzschildParams& sp);

/// Profile from user-supplied phi and analytic derivatives. The u-space
/// accessors fall back to bracketed inversion of u(r) = r e^{phi}.
MetricProfile custom_profile(int n, double horizon_radius,
                             std::function<double(double)> phi,
                             std::function<double(double)> dphi,
                             std::function<double(double)> d2phi);

/// Inversion through the horizon sphere: I(x) = (m/2)^{2/(n-2)} x/|x|^2 (k = 1).
std::vector<double> inversion_map(const SchwarzschildParams& sp, std::span<const double> x);

/// Residual of the conformal-factor identity that makes the inversion an
/// isometry of the doubled manifold; zero up to roundoff for all x != 0.
double inversion_identity_residual(const SchwarzschildParams& sp, std::span<const double> x);

/// The areal coordinate u(r) = r e^{phi(r)} and its inverse, validated to be
/// strictly increasing on a log grid before being handed out.
struct ArealCoordinate {
    double C_phi = 0.0;
    std::function<double(double)> u;
    std::function<double(double)> r_of_u;
};
ArealCoordinate areal_coordinate(const MetricProfile& profile);

/// f_phi(u) = 1 + r(u) phi'(r(u)) for u >= C_phi.
double f_phi(const MetricProfile& profile, double u);

/// Structural checks every in-scope profile must satisfy: the horizon
/// reflection identity (a), positivity of 1 + r phi' beyond the horizon (b),
/// and agreement of the supplied derivatives with centered differences.
struct ProfileValidation {
    double max_condition_a_residual = 0.0; // relative, grid r in [R/10, 10R]
    double min_condition_b_value = 0.0;    // min of 1 + r phi' on (R, 1e6 R]
    double max_dphi_fd_error = 0.0;        // scale-normalized
    double max_d2phi_fd_error = 0.0;
};
ProfileValidation validate_profile(const MetricProfile& profile, int grid_points = 512);

} // namespace schwlab
