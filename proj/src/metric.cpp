#include "schwlab/metric.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "schwlab/errors.hpp"
#include "schwlab/roots.hpp"

namespace schwlab {

namespace {

double pow_int_or_real(double x, double p)
{
    // p is frequently a small integer (n-2); keep the fast path exact.
    const int ip = static_cast<int>(p);
    if (p == ip && ip >= 0 && ip <= 12) {
        double out = 1.0;
        for (int i = 0; i < ip; ++i)
            out *= x;
        return out;
    }
    return std::pow(x, p);
}

} // namespace

void SchwarzschildParams::validate() const
{
    std::ostringstream msg;
    if (n < 3) {
        msg << "SchwarzschildParams: dimension n = " << n << " must be >= 3";
        throw std::invalid_argument(msg.str());
    }
    if (!(m > 0.0) || !std::isfinite(m)) {
        msg << "SchwarzschildParams: mass m = " << m << " must be positive and finite";
        throw std::invalid_argument(msg.str());
    }
    if (k < 1) {
        msg << "SchwarzschildParams: exponent k = " << k << " must be >= 1";
        throw std::invalid_argument(msg.str());
    }
    if (n <= 2 * k) {
        msg << "SchwarzschildParams: need n > 2k, got n = " << n << ", k = " << k;
        throw std::invalid_argument(msg.str());
    }
}

double SchwarzschildParams::horizon_radius() const
{
    return std::pow(0.5 * m, 1.0 / exponent());
}

double SchwarzschildParams::areal_horizon() const
{
    return std::pow(2.0 * m, 1.0 / exponent());
}

double schwarzschild_f_u(const SchwarzschildParams& sp, double u)
{
    const double arg = 1.0 - 2.0 * sp.m / pow_int_or_real(u, sp.exponent());
    return std::sqrt(std::max(0.0, arg));
}

double schwarzschild_df_du(const SchwarzschildParams& sp, double u)
{
    const double p = sp.exponent();
    return sp.m * p / (pow_int_or_real(u, p + 1.0) * schwarzschild_f_u(sp, u));
}

double schwarzschild_ffprime_u(const SchwarzschildParams& sp, double u)
{
    const double p = sp.exponent();
    return sp.m * p / pow_int_or_real(u, p + 1.0);
}

double schwarzschild_B_u(const SchwarzschildParams& sp, double u)
{
    const double p = sp.exponent();
    return (2.0 * sp.m / pow_int_or_real(u, p)) / schwarzschild_f_u(sp, u);
}

double schwarzschild_r_of_u(const SchwarzschildParams& sp, double u)
{
    // u^p = r^p q^2 with q = 1 + m/(2 r^p) solves as a quadratic in r^p.
    const double p = sp.exponent();
    const double up = pow_int_or_real(u, p);
    const double disc = up * (up - 2.0 * sp.m);
    const double yp = 0.5 * (up - sp.m + std::sqrt(std::max(0.0, disc)));
    return std::pow(yp, 1.0 / p);
}

namespace detail {

double ProfileImpl::u_of_r(double r) const
{
    return r * std::exp(phi(r));
}

double ProfileImpl::r_of_u(double u) const
{
    if (u < C_ * (1.0 - 1e-12))
        throw std::domain_error("r_of_u: u below the areal horizon");
    if (u <= C_)
        return R_;
    // u(r) is strictly increasing beyond the horizon by condition (b).
    double lo = R_;
    double hi = std::max(u, R_ * (1.0 + 1e-9));
    int grow = 0;
    while (u_of_r(hi) < u) {
        hi *= 2.0;
        if (++grow > 1024)
            throw numerical_error("r_of_u: failed to bracket the target radius");
    }
    return find_root_bracketed([&](double r) { return u_of_r(r) - u; }, lo, hi, 1e-14);
}

double ProfileImpl::f_of_u(double u) const
{
    const double r = r_of_u(u);
    return 1.0 + r * dphi(r);
}

double ProfileImpl::df_du(double u) const
{
    const double f = f_of_u(u);
    return ffprime_of_u(u) / f;
}

double ProfileImpl::ffprime_of_u(double u) const
{
    // f f' = (phi' + r phi'')/e^{phi}; finite at the horizon where f' diverges.
    const double r = r_of_u(u);
    return (dphi(r) + r * d2phi(r)) / std::exp(phi(r));
}

double ProfileImpl::B_of_u(double u) const
{
    // 1 - f^2 = -r phi' (2 + r phi'), free of the cancellation in 1 - f^2 for f ~ 1.
    const double r = r_of_u(u);
    const double x = r * dphi(r);
    return (-x * (2.0 + x)) / (1.0 + x);
}

} // namespace detail

namespace {

class SchwarzschildImpl final : public detail::ProfileImpl {
public:
    explicit SchwarzschildImpl(const SchwarzschildParams& sp)
        : ProfileImpl(sp.n, sp.horizon_radius()), sp_(sp), p_(sp.exponent())
    {
        C_ = sp.areal_horizon();
    }

    double q(double r) const { return 1.0 + 0.5 * sp_.m / pow_int_or_real(r, p_); }

    double phi(double r) const override
    {
        // log1p keeps phi accurate far out where m/(2 r^p) underflows toward 0
        return (2.0 / p_) * std::log1p(0.5 * sp_.m / pow_int_or_real(r, p_));
    }

    double dphi(double r) const override
    {
        return -sp_.m / (pow_int_or_real(r, p_ + 1.0) * q(r));
    }

    double d2phi(double r) const override
    {
        const double qr = q(r);
        const double rp2 = pow_int_or_real(r, p_ + 2.0);
        return sp_.m * (p_ + 1.0) / (rp2 * qr)
             - 0.5 * sp_.m * sp_.m * p_ / (pow_int_or_real(r, 2.0 * p_ + 2.0) * qr * qr);
    }

    double u_of_r(double r) const override
    {
        return r * std::pow(q(r), 2.0 / p_);
    }

    double r_of_u(double u) const override { return schwarzschild_r_of_u(sp_, u); }
    double f_of_u(double u) const override { return schwarzschild_f_u(sp_, u); }
    double df_du(double u) const override { return schwarzschild_df_du(sp_, u); }
    double ffprime_of_u(double u) const override { return schwarzschild_ffprime_u(sp_, u); }
    double B_of_u(double u) const override { return schwarzschild_B_u(sp_, u); }

private:
    SchwarzschildParams sp_;
    double p_;
};

class CustomImpl final : public detail::ProfileImpl {
public:
    CustomImpl(int n, double horizon_radius,
               std::function<double(double)> phi,
               std::function<double(double)> dphi,
               std::function<double(double)> d2phi)
        : ProfileImpl(n, horizon_radius),
          phi_(std::move(phi)), dphi_(std::move(dphi)), d2phi_(std::move(d2phi))
    {
        C_ = R_ * std::exp(phi_(R_));
    }

    double phi(double r) const override { return phi_(r); }
    double dphi(double r) const override { return dphi_(r); }
    double d2phi(double r) const override { return d2phi_(r); }

private:
    std::function<double(double)> phi_, dphi_, d2phi_;
};

} // namespace

double MetricProfile::conformal_factor(double r) const
{
    return std::exp(impl_->phi(r));
}

MetricProfile schwarzschild_profile(const SchwarzschildParams& sp)
{
    sp.validate();
    return MetricProfile(std::make_shared<SchwarzschildImpl>(sp));
}

MetricProfile custom_profile(int n, double horizon_radius,
                             std::function<double(double)> phi,
                             std::function<double(double)> dphi,
                             std::function<double(double)> d2phi)
{
    if (n < 3)
        throw std::invalid_argument("custom_profile: dimension must be >= 3");
    if (!(horizon_radius > 0.0))
        throw std::invalid_argument("custom_profile: horizon radius must be positive");
    return MetricProfile(std::make_shared<CustomImpl>(
        n, horizon_radius, std::move(phi), std::move(dphi), std::move(d2phi)));
}

namespace {

double norm2(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return s;
}

} // namespace

std::vector<double> inversion_map(const SchwarzschildParams& sp, std::span<const double> x)
{
    sp.validate();
    if (sp.k != 1)
        throw std::domain_error("inversion_map: defined for k = 1 metrics");
    if (static_cast<int>(x.size()) != sp.n)
        throw std::invalid_argument("inversion_map: point dimension mismatch");
    const double r2 = norm2(x);
    if (r2 == 0.0)
        throw std::domain_error("inversion_map: the origin is not in the domain");
    const double scale = std::pow(0.5 * sp.m, 2.0 / (sp.n - 2)) / r2;
    std::vector<double> out(x.begin(), x.end());
    for (double& v : out)
        v *= scale;
    return out;
}

double inversion_identity_residual(const SchwarzschildParams& sp, std::span<const double> x)
{
    sp.validate();
    if (sp.k != 1)
        throw std::domain_error("inversion_identity_residual: defined for k = 1 metrics");
    const double r2 = norm2(x);
    if (r2 == 0.0)
        throw std::domain_error("inversion_identity_residual: the origin is not in the domain");

    const auto ix = inversion_map(sp, x);
    const double n2 = sp.n - 2.0;
    const double e = 4.0 / n2;
    const double lhs = std::pow(1.0 + 0.5 * sp.m / std::pow(norm2(ix), 0.5 * n2), e)
                     * std::pow(0.5 * sp.m, e) / (r2 * r2);
    const double rhs = std::pow(1.0 + 0.5 * sp.m / std::pow(r2, 0.5 * n2), e);
    return std::abs(lhs - rhs);
}

ArealCoordinate areal_coordinate(const MetricProfile& profile)
{
    const double R = profile.horizon_radius();
    // Reject profiles whose u(r) is not strictly increasing on a log grid.
    const int points = 512;
    double prev = profile.u_of_r(R);
    for (int i = 1; i <= points; ++i) {
        const double r = R * std::pow(1e6, static_cast<double>(i) / points);
        const double ur = profile.u_of_r(r);
        if (!(ur > prev))
            throw profile_error("areal_coordinate: u(r) is not strictly increasing");
        prev = ur;
    }
    ArealCoordinate ac;
    ac.C_phi = profile.areal_horizon();
    ac.u = [profile](double r) { return profile.u_of_r(r); };
    ac.r_of_u = [profile](double u) { return profile.r_of_u(u); };
    return ac;
}

double f_phi(const MetricProfile& profile, double u)
{
    if (u < profile.areal_horizon() * (1.0 - 1e-12))
        throw std::domain_error("f_phi: u below the areal horizon C_phi");
    return profile.f_of_u(u);
}

ProfileValidation validate_profile(const MetricProfile& profile, int grid_points)
{
    ProfileValidation out;
    const double R = profile.horizon_radius();
    out.min_condition_b_value = std::numeric_limits<double>::infinity();

    // (a) horizon reflection identity on r in [R/10, 10R], pairing r with R^2/r
    for (int i = 0; i <= grid_points; ++i) {
        const double r = (R / 10.0) * std::pow(100.0, static_cast<double>(i) / grid_points);
        const double lhs = (R * R / r) * std::exp(profile.phi(R * R / r));
        const double rhs = r * std::exp(profile.phi(r));
        out.max_condition_a_residual =
            std::max(out.max_condition_a_residual, std::abs(lhs - rhs) / rhs);
    }

    // (b) 1 + r phi' > 0 strictly on (R, 1e6 R]
    for (int i = 1; i <= grid_points; ++i) {
        const double r = R * std::pow(1e6, static_cast<double>(i) / grid_points);
        out.min_condition_b_value =
            std::min(out.min_condition_b_value, 1.0 + r * profile.dphi(r));
    }

    // derivative consistency against centered differences
    for (int i = 0; i <= 64; ++i) {
        const double r = R * 1.01 * std::pow(100.0, i / 64.0);
        const double h = r * 6e-6;
        const double fd1 = (profile.phi(r + h) - profile.phi(r - h)) / (2.0 * h);
        const double fd2 = (profile.dphi(r + h) - profile.dphi(r - h)) / (2.0 * h);
        const double scale1 = std::abs(profile.dphi(r)) + std::abs(profile.phi(r)) / r;
        const double scale2 = std::abs(profile.d2phi(r)) + std::abs(profile.dphi(r)) / r;
        out.max_dphi_fd_error =
            std::max(out.max_dphi_fd_error, std::abs(fd1 - profile.dphi(r)) / scale1);
        out.max_d2phi_fd_error =
            std::max(out.max_d2phi_fd_error, std::abs(fd2 - profile.d2phi(r)) / scale2);
    }
    return out;
}

} // namespace schwlab
