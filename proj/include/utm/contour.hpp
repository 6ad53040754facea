#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "utm/core.hpp"
#include "utm/datum.hpp"

namespace utm {

/// base + s·e^{iθ} for s ∈ [0, length]. An incoming ray is traversed from
/// the far end back to the base.
struct Ray {
    cplx base{0.0};
    double angle = 0.0;
    double length = 1.0;
    bool incoming = false;
};

/// center + radius·e^{iφ}, φ running from start_angle to end_angle.
struct Arc {
    cplx center{0.0};
    double radius = 1.0;
    double start_angle = 0.0;
    double end_angle = 0.0;
};

struct LineSegment {
    cplx a{0.0};
    cplx b{1.0};
};

using PathPiece = std::variant<Ray, Arc, LineSegment>;

cplx piece_point(const PathPiece& p, double u);
/// dλ/du for u ∈ [0, 1].
cplx piece_tangent(const PathPiece& p, double u);
cplx piece_start(const PathPiece& p);
cplx piece_end(const PathPiece& p);
PathPiece reversed(const PathPiece& p);

struct ContourPath {
    std::vector<PathPiece> segments;
    double truncation_radius = 0.0;
    double nodes_per_wavelength = 8.0;
};

ContourPath reversed(const ContourPath& path);

/// Largest gap between consecutive segments, ignoring joins where both
/// endpoints sit on the truncation circle (components meeting at infinity).
double max_gap(const ContourPath& path);

struct ContourOptions {
    double R = 60.0;
    /// Indentation radius of the half-line Γ⁻; non-positive picks ε/2.
    double indent_radius = -1.0;
    /// Datum decay rate, used for the default indentation and its check.
    double epsilon = 0.5;
    /// Pass below the origin instead of above (negative control only).
    bool indent_below = false;
    double nodes_per_wavelength = 8.0;
};

/// Γ^± for the KdV problems, each boundary oriented with its enclosed
/// sector on the left.
ContourPath build_contour(ProblemId problem, Branch sign, const ContourOptions& opts = {});

/// The real line from −R to R, bridged over the origin by an upper
/// semicircle (radius 1 on the interval, the indentation radius on the
/// half-line). Target of the deformation of Γ⁺ ∪ Γ⁻.
ContourPath build_gamma(ProblemId problem, const ContourOptions& opts = {});

/// Rotates every ray about its base by |δ| toward the side where Im λ³ > 0.
/// Throws InvalidArgument for |δ| > π/12.
ContourPath deform(const ContourPath& path, double delta, ProblemId problem, Branch sign);

/// Oscillatory structure of an integrand h(λ) = e^{iλx + iλ³t}·A(λ) with
/// A(λ) ≈ Σ_m e^{−iλm} Σ_{k=2}^{6} a_{mk} λ^{−k} on the outer half of each
/// ray. Carriers m may be complex; on each ray only those whose integrand
/// factor e^{iλ(x−m)} does not grow are fitted. The fitted model is
/// integrated from the truncation radius to ∞.
struct TailModel {
    double x = 0.0;
    double t = 0.0;
    std::vector<cplx> carriers{0.0};
};

struct IntegrateOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_panels = 40000;
    std::optional<TailModel> tail;
};

struct QuadratureResult {
    cplx value{0.0};
    double abs_error_estimate = 0.0;
    long nodes_used = 0;
    double tail_bound = 0.0;
    bool converged = true;
};

QuadratureResult integrate(const ContourPath& path, const std::function<cplx(cplx)>& integrand,
                           const IntegrateOptions& opts = {});

/// Quadrature node on a contour with its weight w = w_GL·dλ/du.
struct ContourNode {
    cplx lambda{0.0};
    cplx weight{0.0};
    int segment = 0;
    double param = 0.0;
};

/// Composite 20-point Gauss–Legendre schedule resolving e^{iλx} for
/// |x| ≤ x_max at the path's nodes_per_wavelength, refined near ray bases.
std::vector<ContourNode> node_schedule(const ContourPath& path, double x_max);

/// ∫_P^∞ e^{iλν + iλ³t} λ^{−k} dλ along the direction θ from P, evaluated on
/// a rotated ray where the integrand decays.
cplx model_tail(cplx P, double theta, cplx nu, double t, int k);

/// Tail correction and its magnitude for a ray, from amplitude samples
/// (λ_i, A(λ_i)) on the outer half of the ray.
struct TailEstimate {
    cplx value{0.0};
    double magnitude = 0.0;
    bool applied = false;
};
TailEstimate fit_tail(const Ray& ray, const std::vector<cplx>& lambdas, const std::vector<cplx>& amplitudes,
                      const TailModel& model);

/// Polyline samples "seg_index,t_param,re,im".
void write_contour_csv(std::ostream& os, const ContourPath& path, int samples_per_segment = 64);

}  // namespace utm
