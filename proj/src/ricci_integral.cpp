#include "schwlab/ricci_integral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "schwlab/curvature.hpp"
#include "schwlab/errors.hpp"
#include "schwlab/special.hpp"

namespace schwlab {

AlphaParameter AlphaParameter::from_initial_radius(const SchwarzschildParams& sp, double r0)
{
    sp.validate();
    if (r0 < sp.horizon_radius() * (1.0 - 1e-12))
        throw std::domain_error("AlphaParameter: r0 below the horizon radius");
    const double p = sp.exponent();
    const double q = 1.0 + 0.5 * sp.m / std::pow(r0, p);
    const double C0 = r0 * std::pow(q, 2.0 / p);
    AlphaParameter a;
    a.value = std::min(1.0, 2.0 * sp.m / std::pow(C0, p));
    return a;
}

DirectRicciIntegral ricci_integral_direct_trace(const SchwarzschildParams& sp, double r0,
                                                double d, double tol)
{
    sp.validate();
    if (!(d > 0.0))
        throw std::invalid_argument("ricci_integral_direct: d must be positive");
    if (!(tol > 0.0))
        throw std::invalid_argument("ricci_integral_direct: tol must be positive");
    const double R = sp.horizon_radius();
    if (r0 < R * (1.0 - 1e-12))
        throw std::domain_error("ricci_integral_direct: r0 below the horizon radius");

    DirectRicciIntegral out;

    const MetricProfile profile = schwarzschild_profile(sp);
    auto minus_ric = [profile](double r, double rdot, double thetadot) {
        const RicciCoefficients c = conformal_ricci_coefficients(profile, r);
        const double v2 = rdot * rdot + r * r * thetadot * thetadot;
        return -(c.radial * rdot * rdot + c.isotropic * v2);
    };

    if (r0 <= R * (1.0 + 1e-12)) {
        // Horizon-confined geodesic: the integrand is the constant -Ric(horizon).
        if (!std::isfinite(d))
            throw std::domain_error(
                "ricci_integral_direct: the horizon integral diverges for d = infinity");
        const double ric = ricci_horizon_value(sp);
        out.result.value = -d * ric;
        out.result.error_estimate = 0.0;
        out.result.truncation_point = d;
        out.result.evaluations = 1;
        out.trace = detail::integrate_core(sp, r0, d,
                                           std::numeric_limits<double>::infinity(), tol,
                                           minus_ric);
        return out;
    }

    const double r_stop = 1e4 * std::max(r0, R);
    const double s_max = std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
    out.trace = detail::integrate_core(sp, r0, s_max, std::isfinite(d)
                                                          ? std::numeric_limits<double>::infinity()
                                                          : r_stop,
                                       tol, minus_ric);

    out.result.value = out.trace.ricci_integral.back();
    out.result.evaluations = static_cast<long long>(out.trace.states.size());
    const GeodesicState& last = out.trace.states.back();
    if (std::isfinite(d)) {
        out.result.truncation_point = d;
        out.result.error_estimate = tol * (1.0 + std::abs(out.result.value));
    } else {
        // Tail bound beyond the truncation radius: |Ric| <= (n-1) m (n-2)/r^n and
        // ds = dr/rdot with rdot increasing, so the tail is at most
        // m (n-2) / (rdot(r_end) r_end^{n-1}).
        const double rdot_end = std::max(last.rdot, 1e-6);
        const double tail = sp.m * (sp.n - 2.0)
                          / (rdot_end * std::pow(last.r, sp.n - 1.0));
        out.result.truncation_point = last.r;
        out.result.error_estimate = tol * (1.0 + std::abs(out.result.value)) + tail;
    }
    return out;
}

QuadratureResult ricci_integral_direct(const SchwarzschildParams& sp, double r0,
                                       double d, double tol)
{
    return ricci_integral_direct_trace(sp, r0, d, tol).result;
}

QuadratureResult ricci_integral_alpha_form(int n, double alpha, double tol)
{
    if (n < 3)
        throw std::invalid_argument("ricci_integral_alpha_form: dimension must be >= 3");
    if (!(alpha >= 0.0) || alpha >= 1.0)
        throw std::domain_error(
            "ricci_integral_alpha_form: alpha must lie in [0, 1); the integrand diverges at alpha = 1");
    if (!(tol > 0.0))
        throw std::invalid_argument("ricci_integral_alpha_form: tol must be positive");

    const double nn = n;
    auto integrand = [nn, alpha](double psi) {
        const double s = std::sin(psi);
        const double sn2 = std::pow(s, nn - 2.0);
        return ((nn - 1.0) * sn2 - nn * sn2 * s * s) / std::sqrt(1.0 - alpha * sn2);
    };
    const double half_pi = 1.5707963267948966;
    // Pure absolute tolerance: the value may legitimately be ~0 (alpha -> 0).
    return integrate_adaptive(integrand, 0.0, half_pi, tol, 0.0, 8000);
}

double alpha_route_prefactor(const SchwarzschildParams& sp, double C0)
{
    sp.validate();
    if (sp.k != 1)
        throw std::domain_error("alpha_route_prefactor: the chain normalization is the k = 1 one");
    return sp.m * (sp.n - 2.0) / std::pow(C0, sp.n - 1.0);
}

QuadratureResult R_functional(const MetricProfile& profile, double u0, double tol)
{
    const double C = profile.areal_horizon();
    const int n = profile.dimension();
    if (!(u0 > C))
        throw std::domain_error("R_functional: u0 must exceed the areal horizon C_phi");
    if (!(tol > 0.0))
        throw std::invalid_argument("R_functional: tol must be positive");

    const double nn = n;
    auto G = [&](double u) {
        const double ufp = u * profile.df_du(u);
        const double B = profile.B_of_u(u);
        const double c2 = (nn - 2.0) * u0 * u0 / (u * u * u);
        return ((nn - 1.0) / u - c2) * ufp - c2 * B;
    };

    // u = u0 / sin(psi): the sqrt(u^2 - u0^2) endpoint becomes regular and the
    // infinite tail compresses toward psi = 0.
    const double u_max = std::min(1e6 * u0, profile.max_u());
    const double psi_min = std::asin(u0 / u_max);
    const double half_pi = 1.5707963267948966;
    auto integrand = [&](double psi) {
        const double s = std::sin(psi);
        return G(u0 / s) / s;
    };

    QuadratureResult res = integrate_adaptive(integrand, psi_min, half_pi, 0.0, tol, 8000);
    // Tail beyond u_max from the decay model |G(u)| <= |G(u_max)| (u_max/u)^{n-1};
    // the model is asymptotically exact, factor 2 covers pre-asymptotics.
    const double tail = 2.0 * std::abs(G(u_max)) / (nn - 1.0);
    res.error_estimate += tail;
    res.truncation_point = u_max;
    return res;
}

SeriesResult R_series_schwarzschild(const SchwarzschildParams& sp, double u0, int max_terms)
{
    sp.validate();
    if (sp.k != 1)
        throw std::domain_error("R_series_schwarzschild: series is the k = 1 expansion");
    if (max_terms < 1)
        throw std::invalid_argument("R_series_schwarzschild: need at least one term");
    const double n = sp.n;
    const double x = 2.0 * sp.m / std::pow(u0, n - 2.0);
    if (!(x < 1.0))
        throw std::domain_error("R_series_schwarzschild: u0 must exceed (2m)^{1/(n-2)}");

    // term_j = -c_j (n-2)/2 * (j+1)(n-2)/((n-2)j + 2n-2) * W((j+2)(n-2)) * x^{j+2}/u0
    // with c_0 = 1/2 and c_{j+1} = c_j (2j+3)/(2j+4). The Wallis factors advance
    // through the pair recurrence W(q+2) = W(q) (q+1)/(q+2), one unit at a time.
    const int step = sp.n - 2;
    double q = 2.0 * step;          // exponent of the current Wallis factor, (j+2)(n-2)
    double Wq = wallis(q);
    double Wq1 = wallis(q + 1.0);
    double c = 0.5;
    double xpow = x * x;

    SeriesResult out;
    double sum = 0.0, comp = 0.0; // Kahan accumulation
    for (int j = 0; j < max_terms; ++j) {
        const double coeff = 0.5 * (n - 2.0) * ((j + 1.0) * (n - 2.0))
                           / ((n - 2.0) * j + 2.0 * n - 2.0);
        const double term = -c * coeff * Wq * xpow / u0;
        const double yk = term - comp;
        const double tk = sum + yk;
        comp = (tk - sum) - yk;
        sum = tk;
        out.terms_used = j + 1;

        // geometric tail bound from the exact term-ratio pieces, each <= the
        // factors used here: c-ratio * (j+2)/(j+1) = (2j+3)/(2j+2), W-ratio < 1.
        const double rho = x * (2.0 * j + 3.0) / (2.0 * j + 2.0);
        if (rho < 1.0) {
            out.tail_bound = std::abs(term) * rho / (1.0 - rho);
            if (out.tail_bound <= 1e-13 * std::abs(sum))
                break;
        } else {
            out.tail_bound = std::numeric_limits<double>::infinity();
        }
        if (std::abs(term) < 1e-300)
            break;

        // advance c, x-power, and the Wallis pair by (n-2) units
        c *= (2.0 * j + 3.0) / (2.0 * j + 4.0);
        xpow *= x;
        for (int u = 0; u < step; ++u) {
            const double Wnext = Wq * (q + 1.0) / (q + 2.0);
            Wq = Wq1;
            Wq1 = Wnext;
            q += 1.0;
        }
    }
    out.value = sum;
    return out;
}

} // namespace schwlab
