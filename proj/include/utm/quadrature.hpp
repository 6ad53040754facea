#pragma once

#include <functional>
#include <span>
#include <vector>

#include "utm/core.hpp"

namespace utm::quad {

/// Symmetric rule on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
    /// Weights of the embedded Gauss rule (zero at Kronrod-only nodes);
    /// empty for plain Gauss–Legendre rules.
    std::vector<double> embedded_weights;
};

/// Gauss–Legendre rule; n ∈ {10, 16, 20, 30}.
const Rule& gauss_legendre(int n);
/// 21-point Kronrod extension of the 10-point Gauss rule.
const Rule& gauss_kronrod21();

struct AdaptiveOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_panels = 20000;
};

struct Interval {
    int piece = 0;
    double a = 0.0;
    double b = 1.0;
};

struct AdaptiveResult {
    cplx value{0.0};
    double abs_error = 0.0;
    long evaluations = 0;
    int panels = 0;
    bool converged = true;
};

/// Integrand over a parameter interval of some piece: f(piece, u).
using PieceIntegrand = std::function<cplx(int, double)>;

/// Globally adaptive Gauss–Kronrod integration over a set of parameter
/// intervals. The panel with the largest error estimate is bisected until
/// the summed estimate meets max(abs_tol, rel_tol·|value|) or the panel
/// budget is exhausted (converged = false). The final sum is taken in
/// (piece, a) order so results do not depend on the refinement history.
/// Throws Error(QuadratureFailure) on a non-finite integrand value.
AdaptiveResult integrate_panels(const PieceIntegrand& f, std::span<const Interval> initial,
                                const AdaptiveOptions& opts = {});

/// ∫_a^b f(x) dx.
AdaptiveResult integrate(const std::function<cplx(double)>& f, double a, double b,
                         const AdaptiveOptions& opts = {}, int initial_panels = 1);

/// ∫_a^∞ f(x) dx via x = a + u/(1-u).
AdaptiveResult integrate_to_infinity(const std::function<cplx(double)>& f, double a,
                                     const AdaptiveOptions& opts = {}, int initial_panels = 4);

/// Fixed composite Gauss–Legendre on [a,b] with `panels` equal panels.
cplx composite_gauss(const std::function<cplx(double)>& f, double a, double b, int panels,
                     int order = 20);

}  // namespace utm::quad
