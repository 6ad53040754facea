#include "utm/augeig.hpp"

namespace utm {

BoundaryTraces boundary_traces(const InitialDatum& f) {
    if (f.max_derivative() < 2) {
        throw Error(ErrorCode::MissingDerivative, "remainders need f′ and f″ of '" + f.label() + "'");
    }
    BoundaryTraces b;
    b.fx0 = f.derivative(1, 0.0);
    b.fxx0 = f.derivative(2, 0.0);
    if (f.domain() == Domain::Interval) b.fxx1 = f.derivative(2, 1.0);
    return b;
}

cplx RemainderFamily::remainder(Branch branch, cplx lambda, const BoundaryTraces& b) const {
    const double inv2pi = 1.0 / (2.0 * pi);
    switch (problem) {
        case ProblemId::FiniteIntervalKdV:
            if (branch == Branch::Plus) return -I * inv2pi * b.fxx0 + lambda * inv2pi * b.fx0;
            return -std::exp(-I * lambda) * I * inv2pi * b.fxx1;
        case ProblemId::HalfLineKdV:
            if (branch == Branch::Plus) return I * inv2pi * b.fxx0 - lambda * inv2pi * b.fx0;
            return -I * inv2pi * b.fxx0 + lambda * inv2pi * b.fx0;
        case ProblemId::HalfLineHeat: break;
    }
    throw Error(ErrorCode::InvalidArgument, "remainder functionals exist for the KdV problems only");
}

std::vector<cplx> RemainderFamily::carriers(Branch branch) const {
    if (problem == ProblemId::FiniteIntervalKdV && branch == Branch::Minus) return {1.0};
    return {0.0};
}

RemainderFamily remainder_family(ProblemId problem) {
    if (problem == ProblemId::HalfLineHeat) {
        throw Error(ErrorCode::InvalidArgument, "remainder functionals exist for the KdV problems only");
    }
    return RemainderFamily{problem};
}

InitialDatum apply_S(const InitialDatum& f) {
    const std::string label = "S(" + f.label() + ")";
    if (const auto* e = f.exp_sum()) {
        return InitialDatum::from_exp_sum(f.domain(), e->derivative(3).scaled(I), f.decay_rate(), label);
    }
    const int top = f.max_derivative();
    if (top < 3) throw Error(ErrorCode::MissingDerivative, "S needs the third derivative of '" + f.label() + "'");
    InitialDatum::Derivatives d;
    for (int k = 3; k <= top; ++k) d.push_back([f, k](double x) { return I * f.derivative(k, x); });
    return InitialDatum::from_functions(f.domain(), std::move(d), f.decay_rate(), label);
}

cplx eigen_relation_residual(ProblemId problem, const InitialDatum& f, cplx lambda, Branch branch, ForwardMode mode) {
    const RemainderFamily fam = remainder_family(problem);
    ContourOptions co;
    if (problem == ProblemId::HalfLineKdV) co.epsilon = f.decay_rate();
    const TransformPair pair = make_transform_pair(problem, co);
    const cplx lhs = forward(pair, apply_S(f), lambda, branch, mode);
    const cplx rhs = fam.z(lambda) * forward(pair, f, lambda, branch) + fam.remainder(branch, lambda, boundary_traces(f));
    return lhs - rhs;
}

namespace {

ContourOptions contour_for(ProblemId problem, const InitialDatum& f, const AugOptions& opts) {
    ContourOptions co = opts.contour;
    if (problem == ProblemId::HalfLineKdV) co.epsilon = f.decay_rate();
    co.indent_below = opts.indent_below;
    return co;
}

}  // namespace

QuadratureResult typeII_vanishing(ProblemId problem, const InitialDatum& f, Branch branch, double x,
                                  const AugOptions& opts) {
    const RemainderFamily fam = remainder_family(problem);
    const BoundaryTraces b = boundary_traces(f);
    const ContourPath path = build_contour(problem, branch, contour_for(problem, f, opts));
    IntegrateOptions io;
    io.abs_tol = opts.abs_tol;
    io.rel_tol = opts.rel_tol;
    io.tail = TailModel{x, 0.0, fam.carriers(branch)};
    return integrate(path, [&](cplx l) { return std::exp(I * l * x) * fam.remainder(branch, l, b) / fam.z(l); }, io);
}

std::vector<double> typeI_failure_probe(ProblemId problem, const InitialDatum& f, std::optional<Branch> branch,
                                        double x, const std::vector<double>& radii, const AugOptions& opts) {
    const RemainderFamily fam = remainder_family(problem);
    const BoundaryTraces b = boundary_traces(f);
    std::vector<Branch> branches{Branch::Plus, Branch::Minus};
    if (branch) branches = {*branch};
    std::vector<double> out;
    for (double R : radii) {
        AugOptions o = opts;
        o.contour.R = R;
        const ContourOptions co = contour_for(problem, f, o);
        IntegrateOptions io;
        io.abs_tol = opts.abs_tol;
        io.rel_tol = opts.rel_tol;
        cplx total{0.0};
        for (Branch br : branches) {
            const ContourPath path = build_contour(problem, br, co);
            total += integrate(path, [&](cplx l) { return std::exp(I * l * x) * fam.remainder(br, l, b); }, io).value;
        }
        out.push_back(std::abs(total));
    }
    return out;
}

DiagonalisedInverse diagonalised_inverse_check(ProblemId problem, const InitialDatum& f, double x,
                                               const AugOptions& opts) {
    const ContourOptions co = contour_for(problem, f, opts);
    const TransformPair pair = make_transform_pair(problem, co);
    const SpectralContext cf = make_context(problem, f);
    const SpectralContext cs = make_context(problem, apply_S(f));
    IntegrateOptions io;
    io.abs_tol = opts.abs_tol;
    io.rel_tol = opts.rel_tol;
    io.tail = TailModel{x, 0.0, spectral_carriers(problem)};
    DiagonalisedInverse d;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const ContourPath& path = b == Branch::Plus ? pair.gamma_plus : pair.gamma_minus;
        const auto l = integrate(path, [&](cplx lam) {
            return (Scaled::exp(I * lam * x) * forward_scaled(cs, lam, b)).value() / RemainderFamily::z(lam);
        }, io);
        const auto r = integrate(path, [&](cplx lam) {
            return (Scaled::exp(I * lam * x) * forward_scaled(cf, lam, b)).value();
        }, io);
        d.lhs += l.value;
        d.rhs += r.value;
        d.error_estimate += l.abs_error_estimate + r.abs_error_estimate;
    }
    return d;
}

}  // namespace utm
