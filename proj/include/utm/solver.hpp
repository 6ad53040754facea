#pragma once

#include <span>
#include <vector>

#include "utm/transform.hpp"

namespace utm {

struct SolutionQuery {
    ProblemId problem = ProblemId::FiniteIntervalKdV;
    InitialDatum datum;
    std::vector<double> x_grid;
    std::vector<double> t_grid;
    double horizon = 1.0;
    ContourOptions contour;
    /// Ray rotation used for t > 0.
    double delta = pi / 24.0;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
};

struct SolutionField {
    std::vector<double> x;
    std::vector<double> t;
    /// values[i * t.size() + j] = q(x_i, t_j)
    std::vector<cplx> values;
    std::vector<double> error;
    std::vector<bool> converged;

    cplx at(std::size_t i, std::size_t j) const { return values[i * t.size() + j]; }
};

/// q(x, t) from the contour-integral representation. At t = 0 this is the
/// inverse transform of the forward transform on the shared node schedule;
/// for t > 0 the evolution factor e^{iλ³t} sits inside an adaptive
/// integral over the δ-rotated contours.
SolutionField solve_utm(const SolutionQuery& query);

struct ResidualReport {
    double max_residual = 0.0;
    double at_x = 0.0;
    double at_t = 0.0;
    int points = 0;
};

/// max |q_t + q_xxx| with a 4th-order central stencil in x and a 2nd-order
/// central stencil in t. Grids must be uniform with steps (h_x, h_t), at
/// least 7 points in x and 3 in t, and no coarser than max_hx, max_ht.
ResidualReport residual_check(const SolutionField& field, double h_x, double h_t, double max_hx = 0.05,
                              double max_ht = 0.005);

/// q_x at the right end of samples q(X − (n−1)h), …, q(X) (5-point, 4th order).
cplx right_derivative(std::span<const cplx> q, double h);

/// (1/2π)∫₀^∞ sin(λx) f(x) dx.
cplx sine_transform(const InitialDatum& f, double lambda);

/// q(x,t) = 4∫₀^∞ sin(λx) e^{−λ²t} F_λ dλ for the Dirichlet heat problem.
cplx solve_heat_sine(const InitialDatum& f, double x, double t, double* abs_error = nullptr);

/// ∫₀^∞ [G(x−y,t) − G(x+y,t)] f(y) dy with the Gaussian heat kernel.
cplx heat_image_solution(const InitialDatum& f, double x, double t);

/// |F_λ(−f″) − λ²F_λ(f)| with F_λ the sine transform.
double generalized_eig_check(const InitialDatum& f, double lambda);

}  // namespace utm
