#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "schwlab/errors.hpp"

namespace schwlab {

/// Root of a monotone function on a bracket [lo, hi] with g(lo) <= 0 <= g(hi)
/// (or the reverse). Bisection with a secant-accelerated midpoint; converges
/// unconditionally on monotone data. xtol_rel is relative to the root location.
inline double find_root_bracketed(const std::function<double(double)>& g,
                                  double lo, double hi, double xtol_rel = 1e-14)
{
    double flo = g(lo);
    double fhi = g(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw numerical_error("find_root_bracketed: endpoints do not bracket a root");

    for (int it = 0; it < 200; ++it) {
        // secant proposal, clipped away from the bracket edges
        double x = hi - fhi * (hi - lo) / (fhi - flo);
        const double mid = 0.5 * (lo + hi);
        if (!(x > lo && x < hi))
            x = mid;
        else
            x = 0.5 * (x + mid);
        const double fx = g(x);
        if (fx == 0.0)
            return x;
        if ((fx > 0.0) == (fhi > 0.0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        if (hi - lo <= xtol_rel * (std::abs(lo) + std::abs(hi)) + std::numeric_limits<double>::min())
            break;
    }
    return 0.5 * (lo + hi);
}

} // namespace schwlab
