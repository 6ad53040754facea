#include "utm/transform.hpp"

#include <algorithm>
#include <map>

#include "utm/quadrature.hpp"

namespace utm {

TransformPair make_transform_pair(ProblemId problem, const ContourOptions& opts) {
    TransformPair p;
    p.problem = problem;
    p.options = opts;
    p.gamma_plus = build_contour(problem, Branch::Plus, opts);
    p.gamma_minus = build_contour(problem, Branch::Minus, opts);
    return p;
}

std::vector<cplx> spectral_carriers(ProblemId problem) {
    if (problem == ProblemId::FiniteIntervalKdV) return {0.0, 1.0, alpha, alpha2};
    return {0.0};
}

Scaled forward_scaled(const SpectralContext& ctx, cplx lambda, Branch branch) {
    const double inv2pi = 1.0 / (2.0 * pi);
    switch (ctx.problem) {
        case ProblemId::FiniteIntervalKdV: {
            require_regular(lambda);
            const Scaled d = delta_scaled(lambda);
            if (branch == Branch::Plus) return zeta_scaled(ctx, Branch::Plus, lambda) / d * inv2pi;
            return Scaled::exp(-I * lambda) * zeta_scaled(ctx, Branch::Minus, lambda) / d * inv2pi;
        }
        case ProblemId::HalfLineKdV:
            return zeta_scaled(ctx, branch, lambda) * inv2pi;
        case ProblemId::HalfLineHeat: break;
    }
    throw Error(ErrorCode::InvalidArgument, "the contour transform pair is defined for the KdV problems only");
}

namespace {

cplx kernel_quadrature(const SpectralContext& ctx, cplx lambda, Branch branch) {
    const InitialDatum& f = ctx.datum;
    auto integrand = [&](double x) { return kernel_phi(ctx, branch, x, lambda) * f.value(x); };
    quad::AdaptiveOptions o;
    o.abs_tol = 1e-15;
    o.rel_tol = 1e-13;
    if (ctx.problem == ProblemId::FiniteIntervalKdV) {
        const int panels = std::max(4, static_cast<int>(std::abs(lambda) / 2.0));
        const auto r = quad::integrate(integrand, 0.0, 1.0, o, panels);
        if (!r.converged) throw Error(ErrorCode::QuadratureFailure, "kernel quadrature did not converge");
        return r.value;
    }
    // Largest growth rate among the kernel's exponentials e^{−iμx}.
    double growth = lambda.imag();
    if (branch == Branch::Plus) growth = std::max((alpha * lambda).imag(), (alpha2 * lambda).imag());
    const double gap = f.decay_rate() - growth;
    if (!(gap > 0.0)) {
        throw Error(ErrorCode::TransformUndefined, "kernel integral diverges for this lambda");
    }
    const double end = std::min(45.0 / gap, f.support_end());
    const int panels = std::max(8, static_cast<int>(end * (std::abs(lambda) + 1.0) / 4.0));
    const auto r = quad::integrate(integrand, 0.0, end, o, panels);
    if (!r.converged) throw Error(ErrorCode::QuadratureFailure, "kernel quadrature did not converge");
    return r.value;
}

}  // namespace

cplx forward(const TransformPair& pair, const InitialDatum& f, cplx lambda, Branch branch, ForwardMode mode) {
    const SpectralContext ctx = make_context(pair.problem, f);
    if (mode == ForwardMode::KernelQuadrature) return kernel_quadrature(ctx, lambda, branch);
    return forward_scaled(ctx, lambda, branch).value();
}

SpectralData spectral_data(const TransformPair& pair, const InitialDatum& f, double x_max) {
    const SpectralContext ctx = make_context(pair.problem, f);
    SpectralData data;
    data.x_max = x_max;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const ContourPath& path = b == Branch::Plus ? pair.gamma_plus : pair.gamma_minus;
        for (const auto& node : node_schedule(path, x_max)) {
            data.nodes.push_back(node);
            data.tags.push_back(b);
            data.values.push_back(forward_scaled(ctx, node.lambda, b).value());
        }
    }
    return data;
}

InverseValue inverse(const TransformPair& pair, const SpectralData& F, double x) {
    InverseValue out;
    for (std::size_t i = 0; i < F.nodes.size(); ++i) {
        out.value += F.nodes[i].weight * std::exp(I * F.nodes[i].lambda * x) * F.values[i];
    }
    const TailModel model{x, 0.0, spectral_carriers(pair.problem)};
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const ContourPath& path = b == Branch::Plus ? pair.gamma_plus : pair.gamma_minus;
        const double R = path.truncation_radius;
        for (int seg = 0; seg < static_cast<int>(path.segments.size()); ++seg) {
            const auto* ray = std::get_if<Ray>(&path.segments[seg]);
            if (!ray) continue;
            std::vector<cplx> lams, amps;
            for (std::size_t i = 0; i < F.nodes.size(); ++i) {
                if (F.tags[i] != b || F.nodes[i].segment != seg) continue;
                if (std::abs(F.nodes[i].lambda) < 0.5 * R) continue;
                lams.push_back(F.nodes[i].lambda);
                amps.push_back(F.values[i]);
            }
            const TailEstimate te = fit_tail(*ray, lams, amps, model);
            out.value += te.value;
            out.tail_bound += te.magnitude;
        }
    }
    return out;
}

InversionReport verify_inversion(const TransformPair& pair, const InitialDatum& f, const std::vector<double>& grid,
                                 double tol) {
    const auto compat = check_compatibility(f, pair.problem, 1e-10);
    if (!compat.passed) {
        throw Error(ErrorCode::HypothesisFailed,
                    "datum '" + f.label() + "' violates the boundary conditions; inversion is not claimed");
    }
    InversionReport rep;
    rep.grid = grid;
    rep.tolerance = tol;
    double xmax = 1.0;
    for (double x : grid) xmax = std::max(xmax, std::abs(x));
    const SpectralData data = spectral_data(pair, f, xmax);
    for (double x : grid) {
        const cplx q = inverse(pair, data, x).value;
        rep.reconstructed.push_back(q);
        rep.errors.push_back(std::abs(q - f.value(x)));
        rep.sup_error = std::max(rep.sup_error, rep.errors.back());
    }
    rep.passed = rep.sup_error <= tol;
    return rep;
}

GammaInversion gamma_inversion(const TransformPair& pair, const InitialDatum& f, double x) {
    const SpectralContext ctx = make_context(pair.problem, f);
    ContourOptions opts = pair.options;
    if (pair.problem != ProblemId::FiniteIntervalKdV) opts.epsilon = f.decay_rate();
    const ContourPath gamma = build_gamma(pair.problem, opts);
    IntegrateOptions io;
    io.tail = TailModel{x, 0.0, spectral_carriers(pair.problem)};
    const double inv2pi = 1.0 / (2.0 * pi);
    GammaInversion g;
    g.exact = f.value(x);
    g.fourier_form = integrate(gamma, [&](cplx l) {
                         return (Scaled::exp(I * l * x) * fourier_transform_scaled(ctx, l)).value() * inv2pi;
                     }, io).value;
    if (pair.problem == ProblemId::FiniteIntervalKdV) {
        g.ratio_form = integrate(gamma, [&](cplx l) {
                           const Scaled num = zeta_scaled(ctx, Branch::Plus, l) -
                                              Scaled::exp(-I * l) * zeta_scaled(ctx, Branch::Minus, l);
                           return (Scaled::exp(I * l * x) * num / delta_scaled(l)).value() * inv2pi;
                       }, io).value;
    } else {
        // Half-line: the Γ⁺ term vanishes and the Γ⁻ term already lies on γ.
        const cplx plus = integrate(pair.gamma_plus, [&](cplx l) {
                              return std::exp(I * l * x) * zeta(ctx, Branch::Plus, l) * inv2pi;
                          }, io).value;
        g.ratio_form = plus + g.fourier_form;
    }
    return g;
}

}  // namespace utm
