#include "schwlab/quadrature.hpp"
#include "schwlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace schwlab {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 abscissae/weights).
const double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

const double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

const double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

} // namespace

double kronrod15(const std::function<double(double)>& f, double a, double b,
                 double* error, long long* evaluations)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double kron = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double fa = f(c - h * xgk[i]);
        const double fb = f(c + h * xgk[i]);
        kron += wgk[i] * (fa + fb);
        if (i % 2 == 1)
            gauss += wg[(i - 1) / 2] * (fa + fb);
    }
    const double fc = f(c);
    kron += wgk[7] * fc;
    gauss += wg[3] * fc;

    if (evaluations)
        *evaluations += 15;
    if (error)
        *error = std::abs(h) * std::abs(kron - gauss);
    return h * kron;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol, double rel_tol,
                                    int max_panels)
{
    QuadratureResult out;
    out.truncation_point = b;
    if (a == b)
        return out;

    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(b - a);

    std::priority_queue<Panel> queue;
    double total = 0.0;
    double total_err = 0.0;

    auto push_panel = [&](double lo, double hi) {
        Panel p;
        p.a = lo;
        p.b = hi;
        p.value = kronrod15(f, lo, hi, &p.error, &out.evaluations);
        total += p.value;
        total_err += p.error;
        queue.push(p);
    };

    // Seed with a few panels so one lucky Kronrod estimate cannot hide structure.
    const int seed = 4;
    for (int i = 0; i < seed; ++i)
        push_panel(a + (b - a) * i / seed, a + (b - a) * (i + 1) / seed);

    int panels = seed;
    while (panels < max_panels) {
        if (total_err <= std::max(abs_tol, rel_tol * std::abs(total)))
            break;
        Panel worst = queue.top();
        if (std::abs(worst.b - worst.a) < min_width)
            break; // cannot refine further; keep its error in the estimate
        queue.pop();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
        ++panels;
    }

    if (total_err > std::max(abs_tol, rel_tol * std::abs(total)) * 1e3 && panels >= max_panels) {
        std::ostringstream msg;
        msg << "integrate_adaptive: panel budget exhausted, error " << total_err
            << " vs tolerance " << std::max(abs_tol, rel_tol * std::abs(total));
        throw numerical_error(msg.str());
    }

    out.value = total;
    out.error_estimate = total_err;
    return out;
}

} // namespace schwlab
