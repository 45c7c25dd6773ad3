#include "schwlab/special.hpp"

#include <cmath>
#include <stdexcept>

namespace schwlab {

double wallis(double p)
{
    if (!(p >= 0.0))
        throw std::domain_error("wallis: exponent must be >= 0");
    // sqrt(pi)/2 * Gamma((p+1)/2) / Gamma(p/2 + 1), via lgamma for large p
    static const double half_sqrt_pi = 0.8862269254527580136490837416706;
    return half_sqrt_pi * std::exp(std::lgamma(0.5 * (p + 1.0)) - std::lgamma(0.5 * p + 1.0));
}

} // namespace schwlab
