#pragma once

namespace schwlab {

/// Wallis integral: \int_0^{pi/2} sin^p(psi) dpsi = (sqrt(pi)/2) Gamma((p+1)/2)/Gamma(p/2+1).
/// Valid for real p >= 0; evaluated through log-gamma so large p does not overflow.
double wallis(double p);

} // namespace schwlab
