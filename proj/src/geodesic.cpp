#include "schwlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schwlab/errors.hpp"

namespace schwlab {

namespace {

// Schwarzschild-family field quantities needed along geodesics.
struct Field {
    double m;
    double p;
    double inv_p2; // 2/p

    explicit Field(const SchwarzschildParams& sp) : m(sp.m), p(sp.exponent()), inv_p2(2.0 / sp.exponent()) {}

    double q(double r) const { return 1.0 + 0.5 * m * std::pow(r, -p); }
    double phi(double r) const { return inv_p2 * std::log(q(r)); }
    double e_phi(double r) const { return std::pow(q(r), inv_p2); }
    double e_2phi(double r) const { return std::pow(q(r), 2.0 * inv_p2); }
    double dphi(double r) const { return -m / (std::pow(r, p + 1.0) * q(r)); }
    double u(double r) const { return r * e_phi(r); }
};

struct Rhs5 {
    double dr, dth, ddr, ddth, dz;
};

Rhs5 eval_rhs(const Field& fld, double r, double rdot, double thetadot,
              const std::function<double(double, double, double)>& ric_fn)
{
    const double dphi = fld.dphi(r);
    Rhs5 out;
    out.dr = rdot;
    out.dth = thetadot;
    // gammaddot + 2 dphi(gdot) gdot - e^{-2phi} grad phi = 0, split into polar parts
    out.ddr = r * thetadot * thetadot - 2.0 * dphi * rdot * rdot + dphi / fld.e_2phi(r);
    out.ddth = -2.0 * rdot * thetadot * (1.0 / r + dphi);
    out.dz = ric_fn ? ric_fn(r, rdot, thetadot) : 0.0;
    return out;
}

// Dormand-Prince 5(4) coefficients.
const double A21 = 1.0 / 5;
const double A31 = 3.0 / 40, A32 = 9.0 / 40;
const double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
const double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729;
const double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
             A65 = -5103.0 / 18656;
const double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
             B6 = 11.0 / 84;
const double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
             E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
             E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

struct Y {
    double r, th, rd, thd, z;
};

GeodesicTrace horizon_trace(const SchwarzschildParams& sp, double s_max,
                            const std::function<double(double, double, double)>& ric_fn)
{
    // On the horizon the geodesic stays there: r == R, theta linear in s.
    const Field fld(sp);
    const double R = sp.horizon_radius();
    const double thetadot = 1.0 / (R * fld.e_phi(R));
    GeodesicTrace tr;
    tr.params = sp;
    tr.r0 = R;
    tr.C0 = fld.u(R);
    const int samples = 64;
    const double zrate = ric_fn ? ric_fn(R, 0.0, thetadot) : 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double s = s_max * i / samples;
        tr.states.push_back({s, R, thetadot * s, 0.0, thetadot});
        if (ric_fn)
            tr.ricci_integral.push_back(zrate * s);
    }
    tr.max_arclength_residual = arclength_residual(sp, tr.states.front());
    tr.max_C_residual = 0.0;
    return tr;
}

GeodesicTrace attempt_integration(const SchwarzschildParams& sp, double r0,
                                  double s_max, double r_stop, double loc_tol,
                                  const std::function<double(double, double, double)>& ric_fn)
{
    const Field fld(sp);
    GeodesicTrace tr;
    tr.params = sp;
    tr.r0 = r0;
    tr.C0 = fld.u(r0);

    Y y{r0, 0.0, 0.0, 1.0 / (r0 * fld.e_phi(r0)), 0.0};
    double s = 0.0;

    const double thd0 = y.thd;
    auto record = [&](double sv, const Y& yv) {
        tr.states.push_back({sv, yv.r, yv.th, yv.rd, yv.thd});
        if (ric_fn)
            tr.ricci_integral.push_back(yv.z);
        const GeodesicState& st = tr.states.back();
        tr.max_arclength_residual =
            std::max(tr.max_arclength_residual, arclength_residual(sp, st));
        tr.max_C_residual = std::max(
            tr.max_C_residual, std::abs(angular_momentum(sp, st) - tr.C0) / tr.C0);
    };
    record(0.0, y);

    Rhs5 k1 = eval_rhs(fld, y.r, y.rd, y.thd, ric_fn);
    double h = 1e-3 * r0;
    double err_prev = 1.0;
    const double safety = 0.9;
    long long steps = 0;

    while (s < s_max && y.r < r_stop) {
        if (s + h > s_max)
            h = s_max - s;
        // keep the final radius near r_stop instead of overshooting by a tail-sized step
        if (std::isfinite(r_stop) && y.rd > 0.0) {
            const double room = (1.05 * r_stop - y.r) / y.rd;
            if (h > room && room > 0.0)
                h = room;
        }
        if (!(h > 1e-14 * std::max(1.0, std::abs(s)))) {
            std::ostringstream msg;
            msg << "geodesic integration: step size underflow at s = " << s
                << ", r = " << y.r << ", h = " << h << " (loc_tol = " << loc_tol << ")";
            throw integration_error(msg.str());
        }

        const Rhs5 k2v = eval_rhs(fld, y.r + h * A21 * k1.dr, y.rd + h * A21 * k1.ddr,
                                  y.thd + h * A21 * k1.ddth, ric_fn);
        Y t = {y.r + h * (A31 * k1.dr + A32 * k2v.dr), 0, y.rd + h * (A31 * k1.ddr + A32 * k2v.ddr),
               y.thd + h * (A31 * k1.ddth + A32 * k2v.ddth), 0};
        const Rhs5 k3v = eval_rhs(fld, t.r, t.rd, t.thd, ric_fn);
        t = {y.r + h * (A41 * k1.dr + A42 * k2v.dr + A43 * k3v.dr), 0,
             y.rd + h * (A41 * k1.ddr + A42 * k2v.ddr + A43 * k3v.ddr),
             y.thd + h * (A41 * k1.ddth + A42 * k2v.ddth + A43 * k3v.ddth), 0};
        const Rhs5 k4v = eval_rhs(fld, t.r, t.rd, t.thd, ric_fn);
        t = {y.r + h * (A51 * k1.dr + A52 * k2v.dr + A53 * k3v.dr + A54 * k4v.dr), 0,
             y.rd + h * (A51 * k1.ddr + A52 * k2v.ddr + A53 * k3v.ddr + A54 * k4v.ddr),
             y.thd + h * (A51 * k1.ddth + A52 * k2v.ddth + A53 * k3v.ddth + A54 * k4v.ddth), 0};
        const Rhs5 k5v = eval_rhs(fld, t.r, t.rd, t.thd, ric_fn);
        t = {y.r + h * (A61 * k1.dr + A62 * k2v.dr + A63 * k3v.dr + A64 * k4v.dr + A65 * k5v.dr), 0,
             y.rd + h * (A61 * k1.ddr + A62 * k2v.ddr + A63 * k3v.ddr + A64 * k4v.ddr + A65 * k5v.ddr),
             y.thd
                 + h * (A61 * k1.ddth + A62 * k2v.ddth + A63 * k3v.ddth + A64 * k4v.ddth
                        + A65 * k5v.ddth),
             0};
        const Rhs5 k6v = eval_rhs(fld, t.r, t.rd, t.thd, ric_fn);

        Y ynew;
        ynew.r = y.r + h * (B1 * k1.dr + B3 * k3v.dr + B4 * k4v.dr + B5 * k5v.dr + B6 * k6v.dr);
        ynew.th = y.th + h * (B1 * k1.dth + B3 * k3v.dth + B4 * k4v.dth + B5 * k5v.dth + B6 * k6v.dth);
        ynew.rd = y.rd + h * (B1 * k1.ddr + B3 * k3v.ddr + B4 * k4v.ddr + B5 * k5v.ddr + B6 * k6v.ddr);
        ynew.thd =
            y.thd + h * (B1 * k1.ddth + B3 * k3v.ddth + B4 * k4v.ddth + B5 * k5v.ddth + B6 * k6v.ddth);
        ynew.z = y.z + h * (B1 * k1.dz + B3 * k3v.dz + B4 * k4v.dz + B5 * k5v.dz + B6 * k6v.dz);
        const Rhs5 k7v = eval_rhs(fld, ynew.r, ynew.rd, ynew.thd, ric_fn);

        const double er = h * (E1 * k1.dr + E3 * k3v.dr + E4 * k4v.dr + E5 * k5v.dr + E6 * k6v.dr
                               + E7 * k7v.dr);
        const double eth = h * (E1 * k1.dth + E3 * k3v.dth + E4 * k4v.dth + E5 * k5v.dth
                                + E6 * k6v.dth + E7 * k7v.dth);
        const double erd = h * (E1 * k1.ddr + E3 * k3v.ddr + E4 * k4v.ddr + E5 * k5v.ddr
                                + E6 * k6v.ddr + E7 * k7v.ddr);
        const double ethd = h * (E1 * k1.ddth + E3 * k3v.ddth + E4 * k4v.ddth + E5 * k5v.ddth
                                 + E6 * k6v.ddth + E7 * k7v.ddth);
        const double ez = h * (E1 * k1.dz + E3 * k3v.dz + E4 * k4v.dz + E5 * k5v.dz + E6 * k6v.dz
                               + E7 * k7v.dz);

        auto sc = [&](double a, double b, double scale) {
            return loc_tol * (scale + std::max(std::abs(a), std::abs(b)));
        };
        double err = 0.0;
        double n = 4.0;
        {
            const double e1 = er / sc(y.r, ynew.r, r0);
            const double e2 = eth / sc(y.th, ynew.th, 1.0);
            const double e3 = erd / sc(y.rd, ynew.rd, 1.0);
            const double e4 = ethd / sc(y.thd, ynew.thd, thd0);
            err = e1 * e1 + e2 * e2 + e3 * e3 + e4 * e4;
            if (ric_fn) {
                const double zs = std::abs(y.z) + std::abs(h * k1.dz) + 1e-30;
                const double e5 = ez / (loc_tol * zs);
                err += e5 * e5;
                n = 5.0;
            }
            err = std::sqrt(err / n);
        }

        if (err <= 1.0) {
            s += h;
            y = ynew;
            k1 = k7v; // FSAL
            record(s, y);
            ++steps;
            const double fac = safety * std::pow(err > 1e-30 ? err : 1e-30, -0.7 / 5.0)
                             * std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, steps == 1 ? 10.0 : 5.0);
            err_prev = std::max(err, 1e-30);
        } else {
            h *= std::max(0.2, safety * std::pow(err, -0.2));
        }
        if (steps > 150'000'000)
            throw integration_error("geodesic integration: step budget exhausted");
    }
    return tr;
}

} // namespace

GeodesicState initial_state(const SchwarzschildParams& sp, double r0)
{
    sp.validate();
    const Field fld(sp);
    const double R = sp.horizon_radius();
    if (r0 < R * (1.0 - 1e-12))
        throw std::domain_error("initial_state: r0 below the horizon radius");
    GeodesicState st;
    st.s = 0.0;
    st.r = r0;
    st.theta = 0.0;
    st.rdot = 0.0;
    st.thetadot = 1.0 / (r0 * fld.e_phi(r0));
    return st;
}

GeodesicDerivative geodesic_rhs(const SchwarzschildParams& sp, const GeodesicState& st)
{
    sp.validate();
    if (!(st.r > 0.0))
        throw std::domain_error("geodesic_rhs: r must be positive");
    const Field fld(sp);
    const Rhs5 k = eval_rhs(fld, st.r, st.rdot, st.thetadot, nullptr);
    return {k.dr, k.dth, k.ddr, k.ddth};
}

double arclength_residual(const SchwarzschildParams& sp, const GeodesicState& st)
{
    const Field fld(sp);
    return std::abs(fld.e_2phi(st.r) * (st.rdot * st.rdot + st.r * st.r * st.thetadot * st.thetadot)
                    - 1.0);
}

double angular_momentum(const SchwarzschildParams& sp, const GeodesicState& st)
{
    const Field fld(sp);
    return st.r * st.r * fld.e_2phi(st.r) * st.thetadot;
}

double radial_speed_closed_form(const SchwarzschildParams& sp, double r, double C0)
{
    sp.validate();
    const Field fld(sp);
    const double u = fld.u(r);
    double arg = u * u - C0 * C0;
    if (arg < 0.0) {
        if (arg < -1e-12 * C0 * C0)
            throw std::domain_error("radial_speed_closed_form: r is inside the turning radius");
        arg = 0.0;
    }
    return std::sqrt(arg) / (r * fld.e_2phi(r));
}

namespace detail {

GeodesicTrace integrate_core(const SchwarzschildParams& sp, double r0,
                             double s_max, double r_stop, double tol,
                             const std::function<double(double, double, double)>& ric_fn)
{
    sp.validate();
    if (!(tol > 0.0))
        throw std::invalid_argument("integrate_geodesic: tol must be positive");
    const double R = sp.horizon_radius();
    if (r0 < R * (1.0 - 1e-12))
        throw std::domain_error("integrate_geodesic: r0 below the horizon radius");
    if (r0 <= R * (1.0 + 1e-12)) {
        if (!std::isfinite(s_max))
            throw std::invalid_argument("integrate_geodesic: horizon-confined geodesic needs finite s_max");
        return horizon_trace(sp, s_max, ric_fn);
    }

    double loc_tol = tol * 1e-2;
    for (int attempt = 0; attempt < 4; ++attempt) {
        GeodesicTrace tr = attempt_integration(sp, r0, s_max, r_stop, loc_tol, ric_fn);
        if (tr.max_arclength_residual <= tol && tr.max_C_residual <= tol)
            return tr;
        loc_tol *= 0.1;
    }
    std::ostringstream msg;
    msg << "integrate_geodesic: residual targets not met at tol = " << tol;
    throw integration_error(msg.str());
}

} // namespace detail

GeodesicTrace integrate_geodesic(const SchwarzschildParams& sp, double r0,
                                 double s_max, double tol)
{
    if (!(s_max > 0.0))
        throw std::invalid_argument("integrate_geodesic: s_max must be positive");
    return detail::integrate_core(sp, r0, s_max,
                                  std::numeric_limits<double>::infinity(), tol, nullptr);
}

GeodesicTrace integrate_to_radius(const SchwarzschildParams& sp, double r0,
                                  double r_stop, double tol)
{
    if (!(r_stop > r0))
        throw std::invalid_argument("integrate_to_radius: r_stop must exceed r0");
    return detail::integrate_core(sp, r0, std::numeric_limits<double>::infinity(),
                                  r_stop, tol, nullptr);
}

} // namespace schwlab
