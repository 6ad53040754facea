#include "utm/core.hpp"

#include <cstdio>
#include <limits>

namespace utm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::DomainMismatch: return "domain_mismatch";
        case ErrorCode::TransformUndefined: return "transform_undefined";
        case ErrorCode::KernelPole: return "kernel_pole";
        case ErrorCode::QuadratureFailure: return "quadrature_failure";
        case ErrorCode::HypothesisFailed: return "hypothesis_failed";
        case ErrorCode::MissingDerivative: return "missing_derivative";
        case ErrorCode::UnknownDatum: return "unknown_datum";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

double Scaled::log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa)) + exponent.real();
}

cplx Scaled::value() const {
    if (is_zero()) return 0.0;
    return mantissa * std::exp(exponent);
}

Scaled operator*(const Scaled& a, const Scaled& b) {
    return {a.mantissa * b.mantissa, a.exponent + b.exponent};
}

Scaled operator*(const Scaled& a, cplx b) { return {a.mantissa * b, a.exponent}; }
Scaled operator*(cplx a, const Scaled& b) { return {a * b.mantissa, b.exponent}; }

Scaled operator/(const Scaled& a, const Scaled& b) {
    return {a.mantissa / b.mantissa, a.exponent - b.exponent};
}

Scaled operator+(const Scaled& a, const Scaled& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // Rebase onto the larger operand so the smaller one can only underflow.
    if (a.log_abs() >= b.log_abs()) {
        return {a.mantissa + b.mantissa * std::exp(b.exponent - a.exponent), a.exponent};
    }
    return {b.mantissa + a.mantissa * std::exp(a.exponent - b.exponent), b.exponent};
}

Scaled operator-(const Scaled& a) { return {-a.mantissa, a.exponent}; }
Scaled operator-(const Scaled& a, const Scaled& b) { return a + (-b); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace utm
