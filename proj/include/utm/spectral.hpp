#pragma once

#include "utm/core.hpp"
#include "utm/datum.hpp"

namespace utm {

struct SpectralContext {
    ProblemId problem = ProblemId::FiniteIntervalKdV;
    InitialDatum datum;
    /// Half-line only: evaluate the closed-form transform past Im λ = ε by
    /// analytic continuation. Needed on contours rotated off the real axis.
    bool allow_continuation = false;
};

SpectralContext make_context(ProblemId p, InitialDatum f, bool allow_continuation = false);

struct TransformValue {
    Scaled value;
    double abs_error = 0.0;  ///< relative to e^{value.exponent}
};

/// q̂₀(λ) = ∫ e^{−iλx} q₀(x) dx over the datum's domain.
/// Throws TransformUndefined on the half-line for Im λ ≥ ε (unless continued)
/// and QuadratureFailure when the numerical route misses its tolerance.
cplx fourier_transform(const SpectralContext& ctx, cplx lambda);
Scaled fourier_transform_scaled(const SpectralContext& ctx, cplx lambda);

/// Gauss–Legendre panel quadrature of q̂₀, ignoring any closed form.
/// Panels double until successive sums agree to 1e−12 (after scaling by
/// e^{−max(0, Im λ)} on the interval).
TransformValue numeric_fourier_transform(const InitialDatum& f, cplx lambda);

/// Δ(λ) = e^{−iλ} + αe^{−iαλ} + α²e^{−iα²λ}.
cplx delta(cplx lambda);
/// Index j ∈ {0,1,2} of the exponential e^{−iα^jλ} of largest modulus.
int dominant_index(cplx lambda);
/// Δ(λ)·e^{iα^jλ}.
cplx delta_scaled(cplx lambda, int j);
/// Δ(λ) with the dominant exponential factored out.
Scaled delta_scaled(cplx lambda);

/// ζ^±(λ; q₀) for the context's problem (KdV problems only).
cplx zeta(const SpectralContext& ctx, Branch sign, cplx lambda);
Scaled zeta_scaled(const SpectralContext& ctx, Branch sign, cplx lambda);

/// Transform kernel φ^±(x, λ). On the finite interval this includes the
/// 1/Δ factor and rejects λ = 0 and zeros of Δ with KernelPole. For the
/// heat problem the kernel is sin(λx)/2π regardless of sign.
cplx kernel_phi(const SpectralContext& ctx, Branch sign, double x, cplx lambda);

/// Throws KernelPole when λ is 0 or |Δ| vanishes there in scaled form.
void require_regular(cplx lambda);

}  // namespace utm
