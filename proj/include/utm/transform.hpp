#pragma once

#include <vector>

#include "utm/contour.hpp"
#include "utm/spectral.hpp"

namespace utm {

struct TransformPair {
    ProblemId problem = ProblemId::FiniteIntervalKdV;
    ContourOptions options;
    ContourPath gamma_plus;
    ContourPath gamma_minus;
};

TransformPair make_transform_pair(ProblemId problem, const ContourOptions& opts = {});

enum class ForwardMode { SpectralRatio, KernelQuadrature };

/// Oscillatory carriers e^{−iλm} present in F_λ for the problem.
std::vector<cplx> spectral_carriers(ProblemId problem);

/// F_λ(f) as mantissa·e^{exponent} via the ζ/Δ route.
Scaled forward_scaled(const SpectralContext& ctx, cplx lambda, Branch branch);

/// F_λ(f) = ∫ φ^{branch}(x, λ) f(x) dx.
cplx forward(const TransformPair& pair, const InitialDatum& f, cplx lambda, Branch branch,
             ForwardMode mode = ForwardMode::SpectralRatio);

struct SpectralData {
    std::vector<ContourNode> nodes;
    std::vector<Branch> tags;
    std::vector<cplx> values;
    double x_max = 1.0;
};

/// Samples F on the node schedule of Γ⁺ ∪ Γ⁻ that inverse() integrates over.
SpectralData spectral_data(const TransformPair& pair, const InitialDatum& f, double x_max);

struct InverseValue {
    cplx value{0.0};
    double tail_bound = 0.0;
};

/// {∫_{Γ⁺} + ∫_{Γ⁻}} e^{iλx} F(λ) dλ on the stored nodes plus the fitted tails.
InverseValue inverse(const TransformPair& pair, const SpectralData& F, double x);

struct InversionReport {
    std::vector<double> grid;
    std::vector<cplx> reconstructed;
    std::vector<double> errors;
    double sup_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Throws HypothesisFailed when f violates the boundary conditions.
InversionReport verify_inversion(const TransformPair& pair, const InitialDatum& f, const std::vector<double>& grid,
                                 double tol);

struct GammaInversion {
    cplx ratio_form{0.0};    ///< (1/2π)∫_γ e^{iλx}(ζ⁺ − e^{−iλ}ζ⁻)/Δ dλ, or the half-line analogue
    cplx fourier_form{0.0};  ///< (1/2π)∫_γ e^{iλx} q̂₀(λ) dλ
    cplx exact{0.0};         ///< f(x)
};

/// Evaluates the deformed inverse on γ both through the spectral functions
/// and through q̂₀ directly.
GammaInversion gamma_inversion(const TransformPair& pair, const InitialDatum& f, double x);

}  // namespace utm
