#pragma once

#include <optional>
#include <vector>

#include "utm/transform.hpp"

namespace utm {

struct BoundaryTraces {
    cplx fx0{0.0};   ///< f′(0)
    cplx fxx0{0.0};  ///< f″(0)
    cplx fxx1{0.0};  ///< f″(1), interval only
};

/// Read from the datum's analytic derivatives.
BoundaryTraces boundary_traces(const InitialDatum& f);

struct RemainderFamily {
    ProblemId problem = ProblemId::FiniteIntervalKdV;

    static cplx z(cplx lambda) { return lambda * lambda * lambda; }
    cplx remainder(Branch branch, cplx lambda, const BoundaryTraces& b) const;
    /// Oscillatory carriers e^{−iλm} of R^branch, for tail fitting.
    std::vector<cplx> carriers(Branch branch) const;
};

RemainderFamily remainder_family(ProblemId problem);

/// Sf = i f‴ as a datum on the same domain.
InitialDatum apply_S(const InitialDatum& f);

/// F_λ(Sf) − λ³F_λ(f) − R_λ(f). F_λ(Sf) goes through the requested forward
/// mode and F_λ(f) always through the ζ/Δ route.
cplx eigen_relation_residual(ProblemId problem, const InitialDatum& f, cplx lambda, Branch branch,
                             ForwardMode mode = ForwardMode::KernelQuadrature);

struct AugOptions {
    ContourOptions contour;
    /// Detour the half-line Γ⁻ below the origin (negative control).
    bool indent_below = false;
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
};

/// ∫_{Γ^branch} e^{iλx} R_λ(f)/λ³ dλ with a fitted tail beyond R.
QuadratureResult typeII_vanishing(ProblemId problem, const InitialDatum& f, Branch branch, double x,
                                  const AugOptions& opts = {});

/// |∫ e^{iλx} R_λ(f) dλ| truncated at each radius, no tail correction.
/// With no branch given the probe runs over Γ⁺ ∪ Γ⁻.
std::vector<double> typeI_failure_probe(ProblemId problem, const InitialDatum& f, std::optional<Branch> branch,
                                        double x, const std::vector<double>& radii, const AugOptions& opts = {});

struct DiagonalisedInverse {
    cplx lhs{0.0};  ///< ∫ e^{iλx} λ^{−3} F_λ(Sf) dλ
    cplx rhs{0.0};  ///< ∫ e^{iλx} F_λ(f) dλ
    double error_estimate = 0.0;
};

DiagonalisedInverse diagonalised_inverse_check(ProblemId problem, const InitialDatum& f, double x,
                                               const AugOptions& opts = {});

}  // namespace utm
