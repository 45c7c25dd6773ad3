#pragma once

#include <stdexcept>
#include <string>

namespace schwlab {

// Numerical failure that carries diagnostics in the message.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive ODE integration could not meet its tolerance (step-size underflow etc).
class integration_error : public numerical_error {
public:
    explicit integration_error(const std::string& what) : numerical_error(what) {}
};

// A metric profile violates a structural requirement (monotonicity,
// integrability of the defining data, horizon conditions).
class profile_error : public numerical_error {
public:
    explicit profile_error(const std::string& what) : numerical_error(what) {}
};

} // namespace schwlab
