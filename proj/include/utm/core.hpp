#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace utm {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// The cube root of unity e^{2πi/3}. Its square is taken as the exact
/// conjugate so that 1 + α + α² vanishes identically in floating point.
inline const cplx alpha{-0.5, std::numbers::sqrt3 / 2.0};
inline const cplx alpha2{-0.5, -std::numbers::sqrt3 / 2.0};

/// α^j for any integer j.
inline cplx alpha_pow(int j) {
    switch (((j % 3) + 3) % 3) {
        case 0: return 1.0;
        case 1: return alpha;
        default: return alpha2;
    }
}

enum class Branch { Plus, Minus };

inline std::string_view to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }

enum class ErrorCode {
    InvalidArgument,
    DomainMismatch,
    TransformUndefined,
    KernelPole,
    QuadratureFailure,
    HypothesisFailed,
    MissingDerivative,
    UnknownDatum,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// A complex number stored as mantissa · e^{exponent}.
///
/// Products and ratios of exponentials such as e^{-iαλ} overflow double
/// precision long before the ratios we need do, so spectral quantities are
/// carried in this form and only collapsed to a plain complex at the end.
struct Scaled {
    cplx mantissa{0.0};
    cplx exponent{0.0};

    static Scaled exp(cplx z) { return {1.0, z}; }
    static Scaled of(cplx v) { return {v, 0.0}; }

    bool is_zero() const { return mantissa == cplx(0.0); }
    /// log|value|; -inf for zero.
    double log_abs() const;
    cplx value() const;
};

Scaled operator*(const Scaled& a, const Scaled& b);
Scaled operator*(const Scaled& a, cplx b);
Scaled operator*(cplx a, const Scaled& b);
Scaled operator/(const Scaled& a, const Scaled& b);
Scaled operator+(const Scaled& a, const Scaled& b);
Scaled operator-(const Scaled& a, const Scaled& b);
Scaled operator-(const Scaled& a);

/// Format a double with 17 significant digits (lossless round trip).
std::string format_double(double v);

}  // namespace utm
