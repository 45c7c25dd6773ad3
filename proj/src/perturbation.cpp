#include "schwlab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "schwlab/curvature.hpp"
#include "schwlab/errors.hpp"
#include "schwlab/quadrature.hpp"
#include "schwlab/ricci_integral.hpp"
#include "schwlab/roots.hpp"

namespace schwlab {

ProfileFunction schwarzschild_profile_function(const SchwarzschildParams& sp)
{
    sp.validate();
    ProfileFunction pf;
    pf.C_f = sp.areal_horizon();
    pf.f = [sp](double u) { return schwarzschild_f_u(sp, u); };
    pf.df = [sp](double u) { return schwarzschild_df_du(sp, u); };
    return pf;
}

// ---------------------------------------------------------------------------
// Mixed-sign example: piecewise bump and its mollification
// ---------------------------------------------------------------------------

namespace {

// Smoothed hinge: S = max(x, 0) convolved with the biweight kernel
// (15/16w)(1 - (t/w)^2)^2 on [-w, w]. S equals the hinge outside [-w, w],
// S' is the kernel CDF, S'' the kernel itself.
double biweight_cdf(double s)
{
    if (s <= -1.0)
        return 0.0;
    if (s >= 1.0)
        return 1.0;
    return 0.5 + (15.0 / 16.0) * (s - 2.0 * s * s * s / 3.0 + std::pow(s, 5) / 5.0);
}

double smooth_hinge(double x, double w)
{
    if (x <= -w)
        return 0.0;
    if (x >= w)
        return x;
    const double s = x / w;
    const double c = 1.0 - s * s;
    return x * biweight_cdf(s) + (5.0 * w / 32.0) * c * c * c;
}

double smooth_hinge_derivative(double x, double w)
{
    return biweight_cdf(x / w);
}

} // namespace

double example44_E(double m, double u)
{
    if (u <= 3.0 * m)
        return 0.0;
    if (u <= 4.0 * m)
        return -(m / 256.0) * (u - 3.0 * m);
    if (u <= 6.0 * m)
        return (m / 256.0) * (u - 5.0 * m);
    return m * m / 256.0;
}

double example44_E_smoothed(double m, double width, double u)
{
    // E as a hinge combination: slope jumps -m/256, +2m/256, -m/256 at 3m, 4m, 6m.
    const double c = m / 256.0;
    return -c * smooth_hinge(u - 3.0 * m, width) + 2.0 * c * smooth_hinge(u - 4.0 * m, width)
         - c * smooth_hinge(u - 6.0 * m, width);
}

double example44_E_smoothed_derivative(double m, double width, double u)
{
    const double c = m / 256.0;
    return -c * smooth_hinge_derivative(u - 3.0 * m, width)
         + 2.0 * c * smooth_hinge_derivative(u - 4.0 * m, width)
         - c * smooth_hinge_derivative(u - 6.0 * m, width);
}

ProfileFunction example44_profile(double m, double smoothing_width)
{
    if (!(m > 0.0))
        throw std::invalid_argument("example44_profile: m must be positive");
    if (!(smoothing_width > 0.0) || !(smoothing_width < 0.25 * m))
        throw std::invalid_argument("example44_profile: need 0 < smoothing_width < m/4");

    const SchwarzschildParams base{3, m, 1};
    ProfileFunction pf;
    pf.C_f = 2.0 * m;
    pf.f = [base, m, smoothing_width](double u) {
        return schwarzschild_f_u(base, u)
             + example44_E_smoothed(m, smoothing_width, u) / (u * u);
    };
    pf.df = [base, m, smoothing_width](double u) {
        const double E = example44_E_smoothed(m, smoothing_width, u);
        const double dE = example44_E_smoothed_derivative(m, smoothing_width, u);
        return schwarzschild_df_du(base, u) + dE / (u * u) - 2.0 * E / (u * u * u);
    };

    // positivity beyond the horizon
    for (int i = 1; i <= 512; ++i) {
        const double u = 2.0 * m * std::pow(1e4, i / 512.0);
        if (!(pf.f(u) > 0.0))
            throw profile_error("example44_profile: smoothing breaks positivity of f");
    }
    return pf;
}

// ---------------------------------------------------------------------------
// Tabulated profiles (monotone cubic in the stretched abscissa)
// ---------------------------------------------------------------------------

namespace {

// Fritsch-Carlson monotone cubic Hermite interpolant.
class Pchip {
public:
    Pchip(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y))
    {
        const size_t n = x_.size();
        slopes_.resize(n);
        std::vector<double> h(n - 1), d(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            d[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        for (size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                slopes_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        slopes_[0] = end_slope(h[0], h[1], d[0], d[1]);
        slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }

    double eval(double x, double* deriv) const
    {
        const size_t i = locate(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        if (deriv) {
            const double g00 = (6 * t2 - 6 * t) / h, g10 = (3 * t2 - 4 * t + 1) / h;
            const double g01 = (-6 * t2 + 6 * t) / h, g11 = (3 * t2 - 2 * t) / h;
            *deriv = g00 * y_[i] + g10 * h * slopes_[i] + g01 * y_[i + 1] + g11 * h * slopes_[i + 1];
        }
        return h00 * y_[i] + h10 * h * slopes_[i] + h01 * y_[i + 1] + h11 * h * slopes_[i + 1];
    }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    static double end_slope(double h0, double h1, double d0, double d1)
    {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            s = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
            s = 3.0 * d0;
        return s;
    }

    size_t locate(double x) const
    {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        size_t i = (it == x_.begin()) ? 0 : static_cast<size_t>(it - x_.begin()) - 1;
        return std::min(i, x_.size() - 2);
    }

    std::vector<double> x_, y_, slopes_;
};

} // namespace

ProfileFunction profile_function_from_table(std::vector<double> u, std::vector<double> f)
{
    if (u.size() != f.size() || u.size() < 4)
        throw std::invalid_argument("profile_function_from_table: need matched columns, >= 4 rows");
    const double Cf = u.front();
    if (!(Cf > 0.0))
        throw std::invalid_argument("profile_function_from_table: C_f must be positive");
    if (std::abs(f.front()) > 1e-12 * (1.0 + std::abs(f[1])))
        throw profile_error("profile_function_from_table: f must vanish at the first row");
    std::vector<double> w(u.size());
    for (size_t i = 0; i < u.size(); ++i) {
        if (i > 0 && !(u[i] > u[i - 1]))
            throw std::invalid_argument("profile_function_from_table: u must be strictly increasing");
        if (i > 0 && !(f[i] > 0.0))
            throw profile_error("profile_function_from_table: f must be positive beyond C_f");
        w[i] = std::sqrt(u[i] - Cf);
    }
    f.front() = 0.0;

    auto interp = std::make_shared<Pchip>(std::move(w), std::move(f));
    const double u_last = u.back();

    ProfileFunction pf;
    pf.C_f = Cf;
    pf.max_u = u_last;
    pf.f = [interp, Cf, u_last](double uu) {
        if (uu < Cf || uu > u_last)
            throw std::domain_error("tabulated profile: u outside the table range");
        return interp->eval(std::sqrt(uu - Cf), nullptr);
    };
    pf.df = [interp, Cf, u_last](double uu) {
        if (uu < Cf || uu > u_last)
            throw std::domain_error("tabulated profile: u outside the table range");
        const double ww = std::sqrt(uu - Cf);
        double dfdw = 0.0;
        interp->eval(ww, &dfdw);
        // df/du = (df/dw)/(2w); infinite at the horizon row, as it should be
        return dfdw / (2.0 * ww);
    };
    return pf;
}

ProfileFunction load_profile_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("load_profile_table: cannot open " + path);
    std::vector<double> u, f;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream row(line);
        double uu, ff;
        if (!(row >> uu >> ff))
            throw std::runtime_error("load_profile_table: malformed row: " + line);
        u.push_back(uu);
        f.push_back(ff);
    }
    return profile_function_from_table(std::move(u), std::move(f));
}

// ---------------------------------------------------------------------------
// Metric construction from f
// ---------------------------------------------------------------------------

namespace {

// Integrand of I(u) = int_{C}^{u} dx/(x f(x)) in the regularized variable
// x = C + w^2, where it is bounded for sqrt-vanishing f.
double h_integrand(const ProfileFunction& pf, double w)
{
    const double x = pf.C_f + w * w;
    return 2.0 * w / (x * pf.f(x));
}

} // namespace

IntegrabilityCheck check_integrability(const ProfileFunction& pf)
{
    IntegrabilityCheck out;
    // Dyadic shells in w toward the horizon. For integrable (sqrt-like)
    // vanishing the shell contributions halve; for f ~ (u - C) they stall,
    // for faster vanishing they grow. Depth stops at w^2 ~ 1e-12 C_f where
    // the abscissa C_f + w^2 is still well resolved in double precision.
    const double w1 = 1e-3 * std::sqrt(pf.C_f);
    double prev = 0.0;
    double ratio_acc = 0.0;
    int ratios = 0;
    for (int j = 0; j <= 10; ++j) {
        const double hi = w1 * std::pow(0.5, j);
        const double lo = 0.5 * hi;
        double err = 0.0;
        long long evals = 0;
        const double shell = kronrod15([&](double w) { return h_integrand(pf, w); }, lo, hi,
                                       &err, &evals);
        if (!std::isfinite(shell)) {
            out.shell_ratio = std::numeric_limits<double>::infinity();
            return out;
        }
        if (j >= 6) { // innermost shells only
            ratio_acc += shell / prev;
            ++ratios;
        }
        prev = shell;
    }
    out.shell_ratio = ratio_acc / ratios;
    out.integrable = out.shell_ratio < 0.9;
    return out;
}

namespace {

// Cumulative table for I(u) = int_{C}^{u} dx/(x f(x)), one Kronrod panel per
// geometric w-cell; evaluation integrates the partial cell on demand, so the
// only error is panel quadrature error (no interpolation).
class HTable {
public:
    HTable(const ProfileFunction& pf, double u_table_max) : pf_(pf)
    {
        const double C = pf_.C_f;
        w_.push_back(0.0);
        w_.push_back(1e-3 * std::sqrt(C));
        const double w_max = std::sqrt(u_table_max - C);
        const int cells = 2048;
        const double rho = std::pow(w_max / w_[1], 1.0 / cells);
        for (int i = 1; i <= cells; ++i)
            w_.push_back(w_[1] * std::pow(rho, i));
        cum_.assign(w_.size(), 0.0);
        for (size_t i = 0; i + 1 < w_.size(); ++i) {
            double err = 0.0;
            long long evals = 0;
            const double panel = kronrod15([&](double w) { return h_integrand(pf_, w); },
                                           w_[i], w_[i + 1], &err, &evals);
            cum_[i + 1] = cum_[i] + panel;
        }
    }

    double I_of_u(double u) const
    {
        const double C = pf_.C_f;
        if (u <= C)
            return 0.0;
        const double w = std::sqrt(u - C);
        auto it = std::upper_bound(w_.begin(), w_.end(), w);
        size_t i = static_cast<size_t>(it - w_.begin());
        if (i >= w_.size()) {
            // beyond the table: extend by direct adaptive quadrature (rare)
            const QuadratureResult ext = integrate_adaptive(
                [&](double ww) { return h_integrand(pf_, ww); }, w_.back(), w, 0.0, 1e-13);
            return cum_.back() + ext.value;
        }
        i -= 1;
        double err = 0.0;
        long long evals = 0;
        const double part = (w > w_[i])
                                ? kronrod15([&](double ww) { return h_integrand(pf_, ww); },
                                            w_[i], w, &err, &evals)
                                : 0.0;
        return cum_[i] + part;
    }

    double u_table_max() const { return pf_.C_f + w_.back() * w_.back(); }

private:
    const ProfileFunction pf_;
    std::vector<double> w_;
    std::vector<double> cum_;
};

class FBuiltImpl final : public detail::ProfileImpl {
public:
    FBuiltImpl(ProfileFunction pf, double R_f, int n, double u_table_max)
        : ProfileImpl(n, R_f), pf_(std::move(pf)), table_(pf_, u_table_max)
    {
        C_ = pf_.C_f;
    }

    // r(u) = h(u) = R_f exp(I(u)) is the forward map here.
    double r_of_u(double u) const override
    {
        if (u < C_ * (1.0 - 1e-12))
            throw std::domain_error("r_of_u: u below the areal horizon");
        return R_ * std::exp(table_.I_of_u(std::max(u, C_)));
    }

    double u_of_r(double r) const override
    {
        if (r < R_ * (1.0 - 1e-12))
            throw std::domain_error("u_of_r: r below the horizon radius");
        if (r <= R_)
            return C_;
        const double target = std::log(r / R_);
        double hi = C_ * 2.0;
        int grow = 0;
        while (table_.I_of_u(hi) < target) {
            hi *= 2.0;
            if (++grow > 200)
                throw numerical_error("u_of_r: failed to bracket the areal coordinate");
        }
        return find_root_bracketed([&](double u) { return table_.I_of_u(u) - target; },
                                   C_, hi, 1e-14);
    }

    double phi(double r) const override
    {
        if (r < R_) {
            // below the horizon the metric is defined by the reflection identity
            const double rr = R_ * R_ / r;
            return phi(rr) + 2.0 * std::log(rr / R_);
        }
        return std::log(u_of_r(r) / r);
    }

    double dphi(double r) const override
    {
        if (r < R_) {
            const double rr = R_ * R_ / r;
            return -(rr / r) * dphi(rr) - 2.0 / r;
        }
        return (pf_.f(u_of_r(r)) - 1.0) / r;
    }

    double d2phi(double r) const override
    {
        if (r < R_) {
            const double rr = R_ * R_ / r;
            const double rr2 = rr / r;
            return (2.0 * rr2 / r) * dphi(rr) + rr2 * rr2 * d2phi(rr) + 2.0 / (r * r);
        }
        const double u = u_of_r(r);
        const double f = pf_.f(u);
        return (u * ffprime_of_u(u) - f + 1.0) / (r * r);
    }

    double f_of_u(double u) const override { return pf_.f(u); }

    double df_du(double u) const override { return pf_.df(u); }

    double ffprime_of_u(double u) const override
    {
        const double f = pf_.f(u);
        if (f > 0.0)
            return f * pf_.df(u);
        // removable 0 * inf at the horizon: use the sqrt-vanishing limit f^2/(2(u-C))
        const double eps = 1e-8 * C_;
        const double fe = pf_.f(C_ + eps);
        return fe * fe / (2.0 * eps);
    }

    double B_of_u(double u) const override
    {
        const double f = pf_.f(u);
        return (1.0 - f * f) / f;
    }

    double max_u() const override
    {
        // table extension handles larger u; cap only for tabulated inputs
        return tab_max_;
    }

    void set_max_u(double m) { tab_max_ = m; }

private:
    ProfileFunction pf_;
    HTable table_;
    double tab_max_ = std::numeric_limits<double>::infinity();
};

} // namespace

MetricProfile build_metric_from_f(const ProfileFunction& pf, double R_f, int n)
{
    if (!(R_f > 0.0))
        throw std::invalid_argument("build_metric_from_f: R_f must be positive");
    if (n < 3)
        throw std::invalid_argument("build_metric_from_f: dimension must be >= 3");
    if (!pf.f || !pf.df)
        throw std::invalid_argument("build_metric_from_f: profile function not set");

    const IntegrabilityCheck chk = check_integrability(pf);
    if (!chk.integrable) {
        std::ostringstream msg;
        msg << "build_metric_from_f: 1/(u f(u)) is not integrable at C_f (shell ratio "
            << chk.shell_ratio << ")";
        throw profile_error(msg.str());
    }

    // Tabulated profiles cannot be evaluated past their last row; size the
    // cumulative table to whatever domain the profile supports.
    const double table_span = std::min(1e8 * pf.C_f, pf.max_u);
    auto impl = std::make_shared<FBuiltImpl>(pf, R_f, n, table_span);
    impl->set_max_u(pf.max_u);
    return MetricProfile(impl);
}

// ---------------------------------------------------------------------------
// Hypothesis checks
// ---------------------------------------------------------------------------

PerturbationReport check_theorem42(const MetricProfile& profile,
                                   const SchwarzschildParams& reference,
                                   const PerturbationBudget& budget,
                                   const Theorem42Grid& grid)
{
    reference.validate();
    if (reference.k != 1)
        throw std::invalid_argument("check_theorem42: the reference profile is the k = 1 family");
    if (budget.n != reference.n || budget.m != reference.m)
        throw std::invalid_argument("check_theorem42: budget and reference disagree on (n, m)");
    if (!(budget.a >= 0.0) || !(budget.b >= 0.0))
        throw std::invalid_argument("check_theorem42: budgets must be nonnegative");
    if (grid.points < 2 || !(grid.u_min_factor > 1.0) || !(grid.u_max_factor > grid.u_min_factor))
        throw std::invalid_argument("check_theorem42: malformed grid");

    const double C = profile.areal_horizon();
    const double tiny = 1.0 - 1e-12;
    if (C < reference.areal_horizon() * tiny)
        throw std::domain_error(
            "check_theorem42: hypothesis C_phi >= (2m)^{1/(n-2)} violated");

    const double n = reference.n;
    PerturbationReport rep;
    rep.budget = budget;
    rep.cond42_lhs = budget.cond42_lhs();
    rep.cond42_rhs = budget.cond42_rhs();
    rep.cond41_margin_deriv = std::numeric_limits<double>::infinity();
    rep.cond41_margin_B = std::numeric_limits<double>::infinity();

    const double lo = std::log(grid.u_min_factor);
    const double hi = std::log(grid.u_max_factor);
    for (int i = 0; i < grid.points; ++i) {
        const double u = C * std::exp(lo + (hi - lo) * i / (grid.points - 1.0));
        const double allowance = std::pow(u, -(2.0 * n - 4.0));
        // both sides evaluated through the same closed forms so that the pure
        // Schwarzschild case cancels exactly
        const double d_deriv = u * profile.df_du(u) - u * schwarzschild_df_du(reference, u);
        const double d_B = profile.B_of_u(u) - schwarzschild_B_u(reference, u);
        rep.cond41_margin_deriv =
            std::min(rep.cond41_margin_deriv, budget.a * allowance - d_deriv);
        rep.cond41_margin_B = std::min(rep.cond41_margin_B, d_B + budget.b * allowance);
    }

    for (double u0 : grid.u0_samples)
        rep.R_samples.emplace_back(u0, R_functional(profile, u0, grid.tol).value);

    rep.passed = rep.cond41_margin_deriv >= 0.0 && rep.cond41_margin_B >= 0.0
              && rep.cond42_lhs < rep.cond42_rhs;
    return rep;
}

std::vector<ScalarSample> scalar_sign_scan(const MetricProfile& profile,
                                           double u_lo, double u_hi, int samples)
{
    if (profile.dimension() != 3)
        throw std::invalid_argument("scalar_sign_scan: defined for n = 3 profiles");
    if (!(u_hi > u_lo) || samples < 2)
        throw std::invalid_argument("scalar_sign_scan: malformed scan range");
    std::vector<ScalarSample> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        ScalarSample s;
        s.u = u_lo * std::pow(u_hi / u_lo, i / (samples - 1.0));
        s.value = scalar_curvature_u_form(profile, s.u);
        s.sign = std::abs(s.value) < 1e-9 ? 0 : (s.value > 0.0 ? 1 : -1);
        out.push_back(s);
    }
    return out;
}

} // namespace schwlab
