// Command-line front end: parameter sweeps and machine-readable reports for
// every library capability. Output is deterministic: row order follows input
// order and doubles are serialized shortest-roundtrip.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schwlab/curvature.hpp"
#include "schwlab/errors.hpp"
#include "schwlab/geodesic.hpp"
#include "schwlab/metric.hpp"
#include "schwlab/perturbation.hpp"
#include "schwlab/ricci_integral.hpp"

using json = nlohmann::ordered_json;
using namespace schwlab;

namespace {

constexpr int kSchemaVersion = 1;

std::string fmt(double v)
{
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt(int v) { return std::to_string(v); }

// A cell is either a number, a bool, or empty (unused column).
struct Cell {
    enum class Kind { empty, number, integer, boolean, text } kind = Kind::empty;
    double num = 0.0;
    int inum = 0;
    bool flag = false;
    std::string text;

    Cell() = default;
    Cell(double v) : kind(Kind::number), num(v) {}
    Cell(int v) : kind(Kind::integer), inum(v) {}
    Cell(bool v) : kind(Kind::boolean), flag(v) {}
    Cell(std::string v) : kind(Kind::text), text(std::move(v)) {}

    std::string csv() const
    {
        switch (kind) {
        case Kind::number: return fmt(num);
        case Kind::integer: return fmt(inum);
        case Kind::boolean: return flag ? "true" : "false";
        case Kind::text: return text;
        default: return "";
        }
    }
    json to_json() const
    {
        switch (kind) {
        case Kind::number: return num;
        case Kind::integer: return inum;
        case Kind::boolean: return flag;
        case Kind::text: return text;
        default: return nullptr;
        }
    }
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

void write_output(const Table& t, const std::string& format, const std::string& out_path)
{
    std::string text;
    if (format == "csv") {
        std::string line;
        for (size_t i = 0; i < t.header.size(); ++i)
            line += (i ? "," : "") + t.header[i];
        text = line + "\n";
        for (const auto& row : t.rows) {
            line.clear();
            for (size_t i = 0; i < row.size(); ++i)
                line += (i ? "," : "") + row[i].csv();
            text += line + "\n";
        }
    } else {
        json doc;
        doc["schema_version"] = kSchemaVersion;
        json rows = json::array();
        for (const auto& row : t.rows) {
            json obj;
            for (size_t i = 0; i < row.size(); ++i)
                obj[t.header[i]] = row[i].to_json();
            rows.push_back(std::move(obj));
        }
        doc["rows"] = std::move(rows);
        text = doc.dump(2) + "\n";
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open output file " + out_path);
        f << text;
    }
}

double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

struct CommonOpts {
    std::vector<int> n{3};
    std::vector<double> m{1.0};
    std::vector<int> k{1};
    std::vector<double> r0;
    std::vector<double> u0;
    double tol = 1e-10;
    std::string format = "csv";
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_r0, bool with_u0)
{
    cmd->add_option("--n", o.n, "dimension list")->delimiter(',');
    cmd->add_option("--m", o.m, "mass list")->delimiter(',');
    cmd->add_option("--k", o.k, "generalization exponent list")->delimiter(',');
    if (with_r0)
        cmd->add_option("--r0", o.r0, "initial radii, in units of the horizon radius")
            ->delimiter(',');
    if (with_u0)
        cmd->add_option("--u0", o.u0, "areal coordinates, in units of C_phi")->delimiter(',');
    cmd->add_option("--tol", o.tol, "numerical tolerance");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "output path (default stdout)");
}

void require_nonempty(const std::vector<double>& v, const std::string& name)
{
    if (v.empty())
        throw CLI::ValidationError(name + " grid must be non-empty");
}

// ---------------------------------------------------------------------------

int run_geodesic(const CommonOpts& o)
{
    require_nonempty(o.r0, "--r0");
    Table t;
    t.header = {"n", "m", "k", "r0", "C0", "s_end", "r_end", "max_arc_residual",
                "max_C_reldrift", "max_rdot_closed_dev", "ok"};
    bool all_ok = true;
    for (int n : o.n)
        for (double m : o.m)
            for (int k : o.k)
                for (double r0_mult : o.r0) {
                    SchwarzschildParams sp{n, m, k};
                    sp.validate();
                    const double r0 = r0_mult * sp.horizon_radius();
                    std::vector<Cell> row{n, m, k, r0};
                    try {
                        GeodesicTrace tr =
                            r0_mult <= 1.0 + 1e-12
                                ? integrate_geodesic(sp, r0, 10.0 * r0, o.tol)
                                : integrate_to_radius(sp, r0, 1e4 * r0, o.tol);
                        double dev = 0.0;
                        for (const auto& st : tr.states)
                            dev = std::max(dev, std::abs(radial_speed_closed_form(sp, st.r, tr.C0)
                                                         - st.rdot));
                        const bool ok = tr.max_arclength_residual <= o.tol
                                     && tr.max_C_residual <= o.tol && dev <= 100.0 * o.tol;
                        all_ok = all_ok && ok;
                        row.insert(row.end(),
                                   {tr.C0, tr.states.back().s, tr.states.back().r,
                                    tr.max_arclength_residual, tr.max_C_residual, dev, ok});
                    } catch (const numerical_error& e) {
                        std::cerr << "error: " << e.what() << "\n";
                        row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, false});
                        all_ok = false;
                    }
                    t.rows.push_back(std::move(row));
                }
    write_output(t, o.format, o.out);
    return all_ok ? 0 : 1;
}

int run_ricci(const CommonOpts& o)
{
    require_nonempty(o.r0, "--r0");
    Table t;
    t.header = {"n", "m", "k", "r0", "C0", "max_ricci_reldiff", "sign_change_radius", "ok"};
    bool all_ok = true;
    for (int n : o.n)
        for (double m : o.m)
            for (int k : o.k)
                for (double r0_mult : o.r0) {
                    SchwarzschildParams sp{n, m, k};
                    sp.validate();
                    const double r0 = r0_mult * sp.horizon_radius();
                    std::vector<Cell> row{n, m, k, r0};
                    try {
                        const MetricProfile prof = schwarzschild_profile(sp);
                        GeodesicTrace tr = r0_mult <= 1.0 + 1e-12
                                               ? integrate_geodesic(sp, r0, 10.0 * r0, o.tol)
                                               : integrate_to_radius(sp, r0, 1e4 * r0, o.tol);
                        double maxrel = 0.0;
                        for (const auto& st : tr.states) {
                            const double closed = ricci_along_geodesic(sp, st.r, tr.C0);
                            const RicciCoefficients c = conformal_ricci_coefficients(prof, st.r);
                            const double v2 =
                                st.rdot * st.rdot + st.r * st.r * st.thetadot * st.thetadot;
                            const double oracle = c.radial * st.rdot * st.rdot + c.isotropic * v2;
                            const double scale =
                                std::abs(c.radial) + 2.0 * std::abs(c.isotropic);
                            maxrel = std::max(maxrel, std::abs(closed - oracle) / scale);
                        }
                        const bool ok = maxrel <= 1e-7;
                        all_ok = all_ok && ok;
                        row.insert(row.end(),
                                   {tr.C0, maxrel, ricci_sign_change_radius(sp, tr.C0), ok});
                    } catch (const numerical_error& e) {
                        std::cerr << "error: " << e.what() << "\n";
                        row.insert(row.end(), {Cell{}, Cell{}, Cell{}, false});
                        all_ok = false;
                    }
                    t.rows.push_back(std::move(row));
                }
    write_output(t, o.format, o.out);
    return all_ok ? 0 : 1;
}

int run_frankel_sweep(const CommonOpts& o, int series_terms)
{
    require_nonempty(o.r0, "--r0");
    for (double mult : o.r0)
        if (mult <= 1.0)
            throw CLI::ValidationError("--r0 multipliers must be > 1 (the horizon case has "
                                       "constant integrand; see ricci_integral_direct)");
    Table t;
    t.header = {"n", "m", "k", "r0", "u0", "alpha", "R_direct", "R_alpha_form", "R_series",
                "max_pairwise_reldiff", "negative"};
    bool all_ok = true;
    for (int n : o.n)
        for (double m : o.m)
            for (int k : o.k)
                for (double r0_mult : o.r0) {
                    SchwarzschildParams sp{n, m, k};
                    sp.validate();
                    const double r0 = r0_mult * sp.horizon_radius();
                    std::vector<Cell> row{n, m, k, r0};
                    try {
                        const MetricProfile prof = schwarzschild_profile(sp);
                        const double C0 = prof.u_of_r(r0);
                        const QuadratureResult direct =
                            ricci_integral_direct(sp, r0, INFINITY, o.tol);
                        if (k == 1) {
                            const double alpha = AlphaParameter::from_initial_radius(sp, r0).value;
                            const QuadratureResult aform =
                                ricci_integral_alpha_form(n, alpha, 1e-12);
                            const double a_norm = alpha_route_prefactor(sp, C0) * aform.value;
                            const SeriesResult ser =
                                R_series_schwarzschild(sp, C0, series_terms);
                            const double d_a = rel_diff(direct.value, a_norm);
                            const double d_s = rel_diff(direct.value, ser.value);
                            const double a_s = rel_diff(a_norm, ser.value);
                            const double maxdiff = std::max({d_a, d_s, a_s});
                            const bool negative =
                                direct.value < 0.0 && a_norm < 0.0 && ser.value < 0.0;
                            const double series_budget =
                                1e-6 + 4.0 * (ser.tail_bound + aform.error_estimate)
                                           / std::max(1e-300, std::abs(ser.value));
                            const bool consistent =
                                d_a <= 1e-3 && d_s <= 1e-3 && a_s <= series_budget;
                            all_ok = all_ok && negative && consistent;
                            row.insert(row.end(), {C0, alpha, direct.value, a_norm, ser.value,
                                                   maxdiff, negative});
                        } else {
                            // the angular and series routes are the k = 1 reductions
                            const bool negative = direct.value < 0.0;
                            all_ok = all_ok && negative;
                            row.insert(row.end(),
                                       {C0, Cell{}, direct.value, Cell{}, Cell{}, Cell{}, negative});
                        }
                    } catch (const numerical_error& e) {
                        std::cerr << "error: " << e.what() << "\n";
                        row.insert(row.end(),
                                   {Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, false});
                        all_ok = false;
                    }
                    t.rows.push_back(std::move(row));
                }
    write_output(t, o.format, o.out);
    return all_ok ? 0 : 1;
}

struct PerturbSource {
    std::string profile_path;
    double smoothing_width = 0.0; // 0 -> m/100
};

// Build the working profile: a tabulated import when --profile is given,
// otherwise the mixed-sign example with the requested smoothing width.
ProfileFunction make_profile_function(const PerturbSource& src, double m, double* width_used)
{
    if (!src.profile_path.empty()) {
        if (width_used)
            *width_used = 0.0;
        return load_profile_table(src.profile_path);
    }
    const double w = src.smoothing_width > 0.0 ? src.smoothing_width : m / 100.0;
    if (width_used)
        *width_used = w;
    return example44_profile(m, w);
}

int run_perturb_build(const CommonOpts& o, const PerturbSource& src,
                      const std::string& export_table)
{
    const int n = o.n.front();
    const double m = o.m.front();
    double width = 0.0;
    const ProfileFunction pf = make_profile_function(src, m, &width);
    const double R_f = pf.C_f * std::pow(4.0, -1.0 / (n - 2.0));

    Table t;
    t.header = {"n", "m", "source", "smoothing_width", "R_f", "C_phi", "cond_a_residual",
                "cond_b_min", "roundtrip_max_err", "shell_ratio", "ok"};
    const IntegrabilityCheck ic = check_integrability(pf);
    const MetricProfile built = build_metric_from_f(pf, R_f, n);
    const ProfileValidation val = validate_profile(built);

    double roundtrip = 0.0;
    const double u_hi = std::min(1e3 * pf.C_f, pf.max_u);
    for (int i = 0; i <= 256; ++i) {
        const double u = pf.C_f * std::pow(u_hi / pf.C_f, i / 256.0);
        roundtrip = std::max(roundtrip, std::abs(built.f_of_u(u) - pf.f(u)));
    }
    const bool ok = ic.integrable && val.max_condition_a_residual < 1e-9
                 && val.min_condition_b_value > 0.0 && roundtrip < 1e-8;
    t.rows.push_back({n, m, src.profile_path.empty() ? std::string("example44") : src.profile_path,
                      width, R_f, built.areal_horizon(), val.max_condition_a_residual,
                      val.min_condition_b_value, roundtrip, ic.shell_ratio, ok});
    write_output(t, o.format, o.out);

    if (!export_table.empty()) {
        std::ofstream f(export_table, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open " + export_table);
        f << "# u f(u)\n";
        // quadratically graded toward the horizon, where f has the sqrt knee
        const int rows = 4000;
        const double w_max = std::sqrt(u_hi - pf.C_f);
        for (int i = 0; i <= rows; ++i) {
            const double t = static_cast<double>(i) / rows;
            const double w = w_max * t * t;
            const double u = pf.C_f + w * w;
            f << fmt(u) << " " << fmt(pf.f(u)) << "\n";
        }
    }
    return ok ? 0 : 1;
}

int run_perturb_check(const CommonOpts& o, const PerturbSource& src, double a, double b)
{
    const int n = o.n.front();
    const double m = o.m.front();
    // canonical mixed-sign-example budget unless overridden
    if (a < 0.0)
        a = m * m / 16.0;
    if (b < 0.0)
        b = m * m / 16.0;
    double width = 0.0;
    const ProfileFunction pf = make_profile_function(src, m, &width);
    const double R_f = pf.C_f * std::pow(4.0, -1.0 / (n - 2.0));
    const MetricProfile built = build_metric_from_f(pf, R_f, n);

    SchwarzschildParams reference{n, m, 1};
    PerturbationBudget budget{a, b, n, m};
    Theorem42Grid grid;
    grid.tol = o.tol;
    if (std::isfinite(built.max_u()))
        grid.u_max_factor = std::min(1e4, 0.5 * built.max_u() / built.areal_horizon());
    const std::vector<double> mults =
        o.u0.empty() ? std::vector<double>{1.01, 1.5, 2.0, 3.0, 5.0, 10.0, 25.0} : o.u0;
    for (double mult : mults)
        grid.u0_samples.push_back(mult * built.areal_horizon());

    const PerturbationReport rep = check_theorem42(built, reference, budget, grid);
    bool all_R_negative = true;
    for (const auto& [u0, value] : rep.R_samples)
        all_R_negative = all_R_negative && value < 0.0;

    if (o.format == "json") {
        json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["n"] = n;
        doc["m"] = m;
        doc["a"] = a;
        doc["b"] = b;
        doc["source"] = src.profile_path.empty() ? std::string("example44") : src.profile_path;
        doc["smoothing_width"] = width;
        doc["C_phi"] = built.areal_horizon();
        doc["cond41_margin_deriv"] = rep.cond41_margin_deriv;
        doc["cond41_margin_B"] = rep.cond41_margin_B;
        doc["cond42_lhs"] = rep.cond42_lhs;
        doc["cond42_rhs"] = rep.cond42_rhs;
        json samples = json::array();
        for (const auto& [u0, value] : rep.R_samples)
            samples.push_back(json{{"u0", u0}, {"value", value}});
        doc["R_samples"] = std::move(samples);
        doc["passed"] = rep.passed;
        doc["all_R_negative"] = all_R_negative;
        const std::string text = doc.dump(2) + "\n";
        if (o.out.empty())
            std::cout << text;
        else {
            std::ofstream f(o.out, std::ios::binary);
            f << text;
        }
    } else {
        Table t;
        t.header = {"n", "m", "a", "b", "smoothing_width", "cond41_margin_deriv",
                    "cond41_margin_B", "cond42_lhs", "cond42_rhs", "passed", "u0", "R_value"};
        for (const auto& [u0, value] : rep.R_samples)
            t.rows.push_back({n, m, a, b, width, rep.cond41_margin_deriv, rep.cond41_margin_B,
                              rep.cond42_lhs, rep.cond42_rhs, rep.passed, u0, value});
        write_output(t, o.format, o.out);
    }
    return (rep.passed && all_R_negative) ? 0 : 1;
}

int run_scal_scan(const CommonOpts& o, const PerturbSource& src, double u_min_mult,
                  double u_max_mult, int samples)
{
    const double m = o.m.front();
    double width = 0.0;
    const ProfileFunction pf = make_profile_function(src, m, &width);
    const MetricProfile built = build_metric_from_f(pf, 0.25 * pf.C_f, 3);

    Table t;
    t.header = {"u", "scal", "sign"};
    const auto scan = scalar_sign_scan(built, u_min_mult * pf.C_f, u_max_mult * pf.C_f, samples);
    for (const auto& s : scan)
        t.rows.push_back({s.u, s.value, s.sign});
    write_output(t, o.format, o.out);
    return 0;
}

int run_bakry_emery(const CommonOpts& o)
{
    require_nonempty(o.r0, "--r0");
    Table t;
    t.header = {"n", "m", "r", "radial", "tangential", "ok"};
    bool all_ok = true;
    for (int n : o.n)
        for (double m : o.m)
            for (double r_mult : o.r0) {
                SchwarzschildParams sp{n, m, 1};
                sp.validate();
                const double r = r_mult * sp.horizon_radius();
                std::vector<double> x(n, 0.0), A(n, 0.0), T(n, 0.0);
                x[0] = r;
                A[0] = 1.0;
                T[1] = 1.0;
                const double radial = bakry_emery_ricci(sp, x, A, A);
                const double tangential = bakry_emery_ricci(sp, x, T, T);
                const bool ok = radial < 0.0 && tangential > 0.0;
                all_ok = all_ok && ok;
                t.rows.push_back({n, m, r, radial, tangential, ok});
            }
    write_output(t, o.format, o.out);
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"schwlab: geodesics, curvature and Ricci-integral certificates for "
                 "rotationally symmetric conformally flat metrics"};
    app.require_subcommand(1);

    CommonOpts geo_o, ric_o, fra_o, pb_o, pc_o, ss_o, be_o;
    PerturbSource pb_src, pc_src, ss_src;
    int series_terms = 4'000'000;
    double a = -1.0, b = -1.0; // -1: default to m^2/16
    std::string export_table;
    double u_min_mult = 1.001, u_max_mult = 30.0;
    int scan_samples = 512;

    auto* geo = app.add_subcommand("geodesic", "integrate geodesics, report conservation residuals");
    add_common(geo, geo_o, true, false);

    auto* ric = app.add_subcommand("ricci", "closed-form vs conformal-route Ricci along traces");
    add_common(ric, ric_o, true, false);

    auto* fra = app.add_subcommand("frankel-sweep",
                                   "Ricci-integral negativity via three routes over a grid");
    add_common(fra, fra_o, true, false);
    fra->add_option("--series-terms", series_terms, "series term budget");

    auto* pb = app.add_subcommand("perturb-build", "build a metric from a profile function");
    add_common(pb, pb_o, false, false);
    pb->add_option("--profile", pb_src.profile_path, "tabulated (u, f) profile file");
    pb->add_option("--smoothing-width", pb_src.smoothing_width, "mollifier half-width");
    pb->add_option("--export-table", export_table, "write the sampled (u, f) table here");

    auto* pc = app.add_subcommand("perturb-check", "perturbation-condition margins and R samples");
    add_common(pc, pc_o, false, true);
    pc->add_option("--profile", pc_src.profile_path, "tabulated (u, f) profile file");
    pc->add_option("--smoothing-width", pc_src.smoothing_width, "mollifier half-width");
    pc->add_option("--a", a, "derivative-condition budget (default m^2/16)");
    pc->add_option("--b", b, "B-condition budget (default m^2/16)");

    auto* ss = app.add_subcommand("scal-scan", "scalar-curvature sign scan (n = 3)");
    add_common(ss, ss_o, false, false);
    ss->add_option("--profile", ss_src.profile_path, "tabulated (u, f) profile file");
    ss->add_option("--smoothing-width", ss_src.smoothing_width, "mollifier half-width");
    ss->add_option("--u-min-mult", u_min_mult, "scan start, in units of C_phi");
    ss->add_option("--u-max-mult", u_max_mult, "scan end, in units of C_phi");
    ss->add_option("--samples", scan_samples, "scan sample count");

    auto* be = app.add_subcommand("bakry-emery", "weighted-space Ricci signs on a radius grid");
    add_common(be, be_o, true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (geo->parsed())
            return run_geodesic(geo_o);
        if (ric->parsed())
            return run_ricci(ric_o);
        if (fra->parsed())
            return run_frankel_sweep(fra_o, series_terms);
        if (pb->parsed())
            return run_perturb_build(pb_o, pb_src, export_table);
        if (pc->parsed())
            return run_perturb_check(pc_o, pc_src, a, b);
        if (ss->parsed())
            return run_scal_scan(ss_o, ss_src, u_min_mult, u_max_mult, scan_samples);
        if (be->parsed())
            return run_bakry_emery(be_o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
