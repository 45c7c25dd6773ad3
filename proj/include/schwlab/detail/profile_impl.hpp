#pragma once

#include <limits>

namespace schwlab::detail {

// Backend of MetricProfile. Radial quantities are functions of the flat
// Euclidean radius r; u-space accessors work in the areal coordinate u = r e^phi.
// Implementations must be immutable after construction (profiles are shared
// across threads freely).
class ProfileImpl {
public:
    virtual ~ProfileImpl() = default;

    int dimension() const { return n_; }
    double horizon_radius() const { return R_; }
    double areal_horizon() const { return C_; }

    virtual double phi(double r) const = 0;
    virtual double dphi(double r) const = 0;
    virtual double d2phi(double r) const = 0;

    virtual double u_of_r(double r) const;
    virtual double r_of_u(double u) const;

    // f(u) = 1 + r phi'(r) at r = r(u); vanishes at the areal horizon C.
    virtual double f_of_u(double u) const;
    virtual double df_du(double u) const;
    // f f' stays finite at the horizon where f' alone diverges.
    virtual double ffprime_of_u(double u) const;
    // B(f) = 1/f - f, computed as (1 - f^2)/f to avoid cancellation for f near 1.
    virtual double B_of_u(double u) const;

    // Largest u at which u-space accessors are defined (tabulated profiles).
    virtual double max_u() const { return std::numeric_limits<double>::infinity(); }

protected:
    ProfileImpl(int n, double horizon_radius) : n_(n), R_(horizon_radius) {}

    int n_;
    double R_;
    double C_ = 0.0; // set by derived constructors
};

} // namespace schwlab::detail
