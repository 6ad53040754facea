#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "utm/core.hpp"

namespace utm {

enum class ProblemId { FiniteIntervalKdV, HalfLineKdV, HalfLineHeat };

enum class Domain { Interval, HalfLine };

Domain domain_of(ProblemId p);
std::string_view to_string(ProblemId p);
std::string_view to_string(Domain d);
/// Accepts "fi", "hl", "heat" and the full enumerator names.
ProblemId parse_problem(std::string_view s);

/// p(x)·e^{−a x} with p given by ascending coefficients.
struct ExpTerm {
    std::vector<cplx> poly;
    cplx rate{0.0};
};

/// Finite sum of ExpTerms. Closed under differentiation and linear
/// combination, and every member has an exact Fourier transform.
struct ExpSum {
    std::vector<ExpTerm> terms;

    cplx operator()(double x) const;
    ExpSum derivative(int k = 1) const;
    ExpSum scaled(cplx c) const;
    /// ∫₀^∞ e^{−iλx} f dx, meromorphic continuation included.
    cplx half_line_transform(cplx lambda) const;
    /// ∫₀¹ e^{−iλx} f dx as mantissa·e^{exponent} (no overflow for large Im λ).
    Scaled interval_transform(cplx lambda) const;
};

/// Samples of f, f′, f″, f‴ with piecewise cubic Hermite interpolation.
struct Table {
    std::vector<double> x;
    std::array<std::vector<double>, 4> d;

    /// Reads whitespace- or comma-separated rows "x f f' f'' f'''"; '#' starts a comment.
    static Table load(const std::string& path);
    cplx eval(int k, double x) const;
};

class InitialDatum {
public:
    using Derivatives = std::vector<std::function<cplx(double)>>;

    static InitialDatum from_exp_sum(Domain dom, ExpSum f, double decay_rate, std::string label);
    static InitialDatum from_table(Domain dom, Table t, double decay_rate, std::string label);
    /// derivs[k] evaluates f^{(k)}; at least the value must be given.
    static InitialDatum from_functions(Domain dom, Derivatives derivs, double decay_rate,
                                      std::string label);

    Domain domain() const { return domain_; }
    /// ε of the exponential bound on the half-line; 0 on the interval.
    double decay_rate() const { return decay_rate_; }
    const std::string& label() const { return label_; }

    cplx value(double x) const { return derivative(0, x); }
    /// Throws MissingDerivative above max_derivative().
    cplx derivative(int k, double x) const;
    int max_derivative() const;

    bool has_closed_form() const { return std::holds_alternative<ExpSum>(rep_); }
    /// Throws TransformUndefined when no closed form is attached.
    cplx closed_form_transform(cplx lambda) const;
    Scaled closed_form_transform_scaled(cplx lambda) const;
    const ExpSum* exp_sum() const { return std::get_if<ExpSum>(&rep_); }
    const Table* table() const { return std::get_if<Table>(&rep_); }

    /// Upper end of the support used for quadrature (1 on the interval).
    double support_end() const;

private:
    Domain domain_ = Domain::Interval;
    double decay_rate_ = 0.0;
    std::string label_;
    std::variant<ExpSum, Table, Derivatives> rep_;
};

struct CompatibilityReport {
    std::vector<std::pair<std::string, double>> satisfied;
    double tolerance = 0.0;
    bool passed = false;
};

/// Boundary traces required by the problem: f(0), f(1), f′(1) on the
/// interval; f(0) on the half-line. Throws DomainMismatch.
CompatibilityReport check_compatibility(const InitialDatum& f, ProblemId p, double tol);

struct DecayReport {
    double constant = 0.0;  ///< max |f(x)|·e^{εx} over the samples
    bool passed = false;
};

/// Samples |f(x)|e^{εx} on [0, 50/ε].
DecayReport check_decay_bound(const InitialDatum& f, int samples = 2001, double max_constant = 1e6);

/// Names accepted by builtin_datum.
std::vector<std::string> builtin_names();
/// Throws UnknownDatum.
InitialDatum builtin_datum(const std::string& name);

/// Σ c_i f_i on a common domain; stays closed-form when every f_i is.
InitialDatum linear_combination(const std::vector<std::pair<cplx, InitialDatum>>& parts,
                                std::string label = "combination");

}  // namespace utm
