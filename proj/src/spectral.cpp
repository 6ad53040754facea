#include "utm/spectral.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "utm/quadrature.hpp"

namespace utm {

SpectralContext make_context(ProblemId p, InitialDatum f, bool allow_continuation) {
    if (f.domain() != domain_of(p)) {
        throw Error(ErrorCode::DomainMismatch,
                    "datum '" + f.label() + "' does not live on the domain of " + std::string(to_string(p)));
    }
    return SpectralContext{p, std::move(f), allow_continuation};
}

namespace {

std::string lambda_text(cplx lambda) {
    return "(" + format_double(lambda.real()) + ", " + format_double(lambda.imag()) + ")";
}

std::vector<double> breakpoints(const InitialDatum& f, double end) {
    std::vector<double> b{0.0};
    if (const auto* t = f.table()) {
        for (double x : t->x)
            if (x > 0.0 && x < end) b.push_back(x);
    }
    b.push_back(end);
    return b;
}

cplx panel_sum(const std::function<cplx(double)>& g, const std::vector<double>& bp, double scale_per_unit) {
    cplx s{0.0};
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double len = bp[i + 1] - bp[i];
        const int m = std::max(1, static_cast<int>(std::ceil(len * scale_per_unit)));
        s += quad::composite_gauss(g, bp[i], bp[i + 1], m, 20);
    }
    return s;
}

}  // namespace

TransformValue numeric_fourier_transform(const InitialDatum& f, cplx lambda) {
    double end = 1.0;
    double shift = 0.0;
    double tail = 0.0;
    if (f.domain() == Domain::Interval) {
        shift = std::max(0.0, lambda.imag());
    } else {
        const double gap = f.decay_rate() - lambda.imag();
        if (!(gap > 0.0)) {
            throw Error(ErrorCode::TransformUndefined,
                        "half-line transform needs Im(lambda) < epsilon at " + lambda_text(lambda));
        }
        end = std::min(40.0 / gap, f.support_end());
        if (end < f.support_end()) {
            tail = std::abs(f.value(end)) * std::exp(lambda.imag() * end) / gap;
        }
    }
    auto g = [&](double x) { return std::exp(-I * lambda * x - shift) * f.value(x); };
    const std::vector<double> bp = breakpoints(f, end);
    // GL-20 panels resolve about three oscillations each.
    double density = std::max(1.0, (std::abs(lambda) + 1.0) / 6.0);
    cplx prev = panel_sum(g, bp, density);
    double err = 0.0;
    for (int level = 0; level < 10; ++level) {
        density *= 2.0;
        const cplx next = panel_sum(g, bp, density);
        err = std::abs(next - prev);
        prev = next;
        if (err <= 1e-13) break;
    }
    if (err > 1e-12) {
        std::ostringstream os;
        os << "transform quadrature reached only " << format_double(err) << " at " << lambda_text(lambda);
        throw Error(ErrorCode::QuadratureFailure, os.str());
    }
    return {Scaled{prev, shift}, err + tail};
}

Scaled fourier_transform_scaled(const SpectralContext& ctx, cplx lambda) {
    const InitialDatum& f = ctx.datum;
    if (f.domain() == Domain::HalfLine && lambda.imag() >= f.decay_rate()) {
        if (!(ctx.allow_continuation && f.has_closed_form())) {
            throw Error(ErrorCode::TransformUndefined,
                        "half-line transform needs Im(lambda) < epsilon = " + format_double(f.decay_rate()) +
                            " at " + lambda_text(lambda));
        }
    }
    if (f.has_closed_form()) return f.closed_form_transform_scaled(lambda);
    return numeric_fourier_transform(f, lambda).value;
}

cplx fourier_transform(const SpectralContext& ctx, cplx lambda) {
    return fourier_transform_scaled(ctx, lambda).value();
}

cplx delta(cplx lambda) {
    return std::exp(-I * lambda) + alpha * std::exp(-I * alpha * lambda) +
           alpha2 * std::exp(-I * alpha2 * lambda);
}

int dominant_index(cplx lambda) {
    // |e^{−iα^jλ}| = e^{Im(α^jλ)}
    int best = 0;
    double top = lambda.imag();
    for (int j = 1; j < 3; ++j) {
        const double v = (alpha_pow(j) * lambda).imag();
        if (v > top) {
            top = v;
            best = j;
        }
    }
    return best;
}

cplx delta_scaled(cplx lambda, int j) {
    const cplx shift = I * alpha_pow(j) * lambda;
    cplx s{0.0};
    for (int k = 0; k < 3; ++k) s += alpha_pow(k) * std::exp(-I * alpha_pow(k) * lambda + shift);
    return s;
}

Scaled delta_scaled(cplx lambda) {
    const int j = dominant_index(lambda);
    return Scaled{delta_scaled(lambda, j), -I * alpha_pow(j) * lambda};
}

Scaled zeta_scaled(const SpectralContext& ctx, Branch sign, cplx lambda) {
    switch (ctx.problem) {
        case ProblemId::HalfLineKdV:
            if (sign == Branch::Minus) return fourier_transform_scaled(ctx, lambda);
            return alpha * fourier_transform_scaled(ctx, alpha * lambda) +
                   alpha2 * fourier_transform_scaled(ctx, alpha2 * lambda);
        case ProblemId::FiniteIntervalKdV: {
            const Scaled q0 = fourier_transform_scaled(ctx, lambda);
            const Scaled q1 = fourier_transform_scaled(ctx, alpha * lambda);
            const Scaled q2 = fourier_transform_scaled(ctx, alpha2 * lambda);
            if (sign == Branch::Minus) return -(q0 + alpha * q1 + alpha2 * q2);
            const Scaled e1 = alpha * Scaled::exp(-I * alpha * lambda);
            const Scaled e2 = alpha2 * Scaled::exp(-I * alpha2 * lambda);
            return q0 * (e1 + e2) - (alpha * q1 + alpha2 * q2) * Scaled::exp(-I * lambda);
        }
        case ProblemId::HalfLineHeat: break;
    }
    throw Error(ErrorCode::InvalidArgument, "zeta is defined for the KdV problems only");
}

cplx zeta(const SpectralContext& ctx, Branch sign, cplx lambda) {
    return zeta_scaled(ctx, sign, lambda).value();
}

void require_regular(cplx lambda) {
    if (lambda == cplx(0.0)) {
        throw Error(ErrorCode::KernelPole, "kernel evaluated at the double zero of Delta at lambda = 0");
    }
    if (std::abs(delta_scaled(lambda, dominant_index(lambda))) < 1e-12) {
        throw Error(ErrorCode::KernelPole, "kernel evaluated at a zero of Delta near " + lambda_text(lambda));
    }
}

cplx kernel_phi(const SpectralContext& ctx, Branch sign, double x, cplx lambda) {
    const double twopi = 2.0 * pi;
    switch (ctx.problem) {
        case ProblemId::HalfLineHeat:
            return std::sin(lambda * x) / twopi;
        case ProblemId::HalfLineKdV:
            if (x < 0.0) throw Error(ErrorCode::DomainMismatch, "x must be non-negative");
            if (sign == Branch::Minus) return std::exp(-I * lambda * x) / twopi;
            return (alpha * std::exp(-I * alpha * lambda * x) + alpha2 * std::exp(-I * alpha2 * lambda * x)) /
                   twopi;
        case ProblemId::FiniteIntervalKdV: {
            if (x < 0.0 || x > 1.0) throw Error(ErrorCode::DomainMismatch, "x must lie in [0,1]");
            require_regular(lambda);
            const Scaled d = delta_scaled(lambda);
            const Scaled ex = Scaled::exp(-I * lambda * x);
            const Scaled ax = alpha * Scaled::exp(-I * alpha * lambda * x);
            const Scaled a2x = alpha2 * Scaled::exp(-I * alpha2 * lambda * x);
            Scaled num;
            if (sign == Branch::Plus) {
                num = ex * (alpha * Scaled::exp(-I * alpha * lambda) + alpha2 * Scaled::exp(-I * alpha2 * lambda)) -
                      (ax + a2x) * Scaled::exp(-I * lambda);
            } else {
                num = -(Scaled::exp(-I * lambda) * (ex + ax + a2x));
            }
            return (num / d).value() / twopi;
        }
    }
    return 0.0;
}

}  // namespace utm
