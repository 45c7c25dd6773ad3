#include "schwlab/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace schwlab {

double ricci_along_geodesic(const SchwarzschildParams& sp, double r, double C0)
{
    sp.validate();
    if (r < sp.horizon_radius() * (1.0 - 1e-12))
        throw std::domain_error("ricci_along_geodesic: r below the horizon radius");
    if (!(C0 > 0.0))
        throw std::domain_error("ricci_along_geodesic: C0 must be positive");
    const double n = sp.n;
    const double p = sp.exponent();
    const double q = 1.0 + 0.5 * sp.m / std::pow(r, p);
    // m / (r^{p+2} q^{2 + 4/p}) [ (n-2)(p+2) C0^2/u^2 - (n-1) p ],  u = r q^{2/p}.
    // For k = 1 (p = n-2) this is the closed form
    // m(n-2)/(r^n q^{2n/(n-2)}) [ n C0^2/(r^2 q^{4/(n-2)}) - (n-1) ].
    const double u2 = r * r * std::pow(q, 4.0 / p);
    const double pre = sp.m / (std::pow(r, p + 2.0) * std::pow(q, 2.0 + 4.0 / p));
    return pre * ((n - 2.0) * (p + 2.0) * C0 * C0 / u2 - (n - 1.0) * p);
}

double ricci_horizon_value(const SchwarzschildParams& sp)
{
    sp.validate();
    const double R = sp.horizon_radius();
    return ricci_along_geodesic(sp, R, sp.areal_horizon());
}

double ricci_sign_change_radius(const SchwarzschildParams& sp, double C0)
{
    sp.validate();
    const double n = sp.n;
    const double p = sp.exponent();
    const double u_star = C0 * std::sqrt((n - 2.0) * (p + 2.0) / ((n - 1.0) * p));
    return schwarzschild_r_of_u(sp, u_star);
}

RicciCoefficients conformal_ricci_coefficients(const MetricProfile& profile, double r)
{
    if (!(r > 0.0))
        throw std::domain_error("conformal_ricci_coefficients: r must be positive");
    const double n = profile.dimension();
    const double d1 = profile.dphi(r);
    const double d2 = profile.d2phi(r);
    const double lap = d2 + (n - 1.0) * d1 / r; // flat Laplacian of phi
    RicciCoefficients c;
    c.radial = (n - 2.0) * (-d2 + d1 * d1 + d1 / r);
    c.isotropic = -(n - 2.0) * (d1 / r + d1 * d1) - lap;
    return c;
}

double conformal_ricci_oracle(const MetricProfile& profile,
                              std::span<const double> x, std::span<const double> v)
{
    if (x.size() != v.size() || static_cast<int>(x.size()) != profile.dimension())
        throw std::invalid_argument("conformal_ricci_oracle: dimension mismatch");
    double r2 = 0.0, xv = 0.0, v2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        r2 += x[i] * x[i];
        xv += x[i] * v[i];
        v2 += v[i] * v[i];
    }
    const double r = std::sqrt(r2);
    const RicciCoefficients c = conformal_ricci_coefficients(profile, r);
    const double vr = xv / r;
    return c.radial * vr * vr + c.isotropic * v2;
}

double scalar_curvature_u_form(const MetricProfile& profile, double u)
{
    if (profile.dimension() != 3)
        throw std::invalid_argument("scalar_curvature_u_form: defined for n = 3 only");
    if (u < profile.areal_horizon() * (1.0 - 1e-12))
        throw std::domain_error("scalar_curvature_u_form: u below the areal horizon");
    const double f = profile.f_of_u(u);
    const double ffp = profile.ffprime_of_u(u);
    // -(2 f/u^2)(2 u f' - B(f)) with the 1/f pole of B cancelled against f
    return -(2.0 / (u * u)) * (2.0 * u * ffp - 1.0 + f * f);
}

double scalar_curvature_diagnostic(const MetricProfile& profile, double r)
{
    const double n = profile.dimension();
    const double d1 = profile.dphi(r);
    const double d2 = profile.d2phi(r);
    const double e2phi = std::exp(2.0 * profile.phi(r));
    return -(n - 1.0) * (2.0 * d2 + 2.0 * (n - 1.0) * d1 / r + (n - 2.0) * d1 * d1) / e2phi;
}

double bakry_emery_ricci(const SchwarzschildParams& sp, std::span<const double> x,
                         std::span<const double> A, std::span<const double> B)
{
    sp.validate();
    if (sp.k != 1)
        throw std::domain_error("bakry_emery_ricci: defined for k = 1 metrics");
    if (static_cast<int>(x.size()) != sp.n || A.size() != x.size() || B.size() != x.size())
        throw std::invalid_argument("bakry_emery_ricci: dimension mismatch");
    double r2 = 0.0, AB = 0.0, xA = 0.0, xB = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        r2 += x[i] * x[i];
        AB += A[i] * B[i];
        xA += x[i] * A[i];
        xB += x[i] * B[i];
    }
    if (r2 == 0.0)
        throw std::domain_error("bakry_emery_ricci: the origin is not in the domain");
    const double n = sp.n;
    const double rn = std::pow(r2, 0.5 * n);
    const double rn2 = std::pow(r2, 0.5 * (n - 2.0));
    const double q = 1.0 + 0.5 * sp.m / rn2;
    const double first = 2.0 * sp.m / (rn * q) * AB;
    const double cross = xA * xB; // single product keeps the form exactly symmetric
    const double second = 2.0 * sp.m * (n * rn2 + sp.m) / (rn * rn * q * q) * cross;
    return first - second;
}

} // namespace schwlab
