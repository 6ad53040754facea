#include "utm/solver.hpp"

#include <algorithm>

#include "utm/quadrature.hpp"

namespace utm {

namespace {

void validate(const SolutionQuery& q) {
    if (q.datum.domain() != domain_of(q.problem)) {
        throw Error(ErrorCode::DomainMismatch, "datum domain does not match the problem");
    }
    const auto compat = check_compatibility(q.datum, q.problem, 1e-10);
    if (!compat.passed) {
        throw Error(ErrorCode::HypothesisFailed, "datum '" + q.datum.label() + "' violates the boundary conditions");
    }
    if (!(q.horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon T must be positive");
    for (double t : q.t_grid) {
        if (!(t >= 0.0) || t > q.horizon) throw Error(ErrorCode::InvalidArgument, "t outside [0, T]");
    }
    for (double x : q.x_grid) {
        const bool inside = q.problem == ProblemId::FiniteIntervalKdV ? (x >= 0.0 && x <= 1.0) : x >= 0.0;
        if (!inside) throw Error(ErrorCode::DomainMismatch, "x outside the spatial domain");
    }
    if (q.problem == ProblemId::HalfLineHeat) {
        throw Error(ErrorCode::InvalidArgument, "use solve_heat_sine for the heat problem");
    }
}

}  // namespace

SolutionField solve_utm(const SolutionQuery& query) {
    validate(query);
    SolutionField field;
    field.x = query.x_grid;
    field.t = query.t_grid;
    const std::size_t nx = field.x.size(), nt = field.t.size();
    field.values.assign(nx * nt, 0.0);
    field.error.assign(nx * nt, 0.0);
    field.converged.assign(nx * nt, true);

    ContourOptions copts = query.contour;
    if (query.problem == ProblemId::HalfLineKdV) copts.epsilon = query.datum.decay_rate();
    const TransformPair pair = make_transform_pair(query.problem, copts);

    const bool any_initial = std::any_of(field.t.begin(), field.t.end(), [](double t) { return t == 0.0; });
    if (any_initial) {
        double xmax = 1.0;
        for (double x : field.x) xmax = std::max(xmax, x);
        const SpectralData data = spectral_data(pair, query.datum, xmax);
        for (std::size_t j = 0; j < nt; ++j) {
            if (field.t[j] != 0.0) continue;
            for (std::size_t i = 0; i < nx; ++i) {
                const InverseValue v = inverse(pair, data, field.x[i]);
                field.values[i * nt + j] = v.value;
                field.error[i * nt + j] = v.tail_bound;
            }
        }
    }
    if (std::all_of(field.t.begin(), field.t.end(), [](double t) { return t == 0.0; })) return field;

    const SpectralContext ctx =
        make_context(query.problem, query.datum, query.problem == ProblemId::HalfLineKdV && query.delta != 0.0);
    const ContourPath plus = deform(pair.gamma_plus, query.delta, query.problem, Branch::Plus);
    const ContourPath minus = deform(pair.gamma_minus, query.delta, query.problem, Branch::Minus);
    const std::vector<cplx> carriers = spectral_carriers(query.problem);

    for (std::size_t j = 0; j < nt; ++j) {
        const double t = field.t[j];
        if (t == 0.0) continue;
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = field.x[i];
            IntegrateOptions io;
            io.abs_tol = query.abs_tol;
            io.rel_tol = query.rel_tol;
            io.tail = TailModel{x, t, carriers};
            cplx total{0.0};
            double err = 0.0;
            bool ok = true;
            for (Branch b : {Branch::Plus, Branch::Minus}) {
                auto h = [&](cplx l) {
                    return (Scaled::exp(I * l * x + I * l * l * l * t) * forward_scaled(ctx, l, b)).value();
                };
                const QuadratureResult r = integrate(b == Branch::Plus ? plus : minus, h, io);
                total += r.value;
                err += r.abs_error_estimate;
                ok = ok && r.converged;
            }
            field.values[i * nt + j] = total;
            field.error[i * nt + j] = err;
            field.converged[i * nt + j] = ok;
        }
    }
    return field;
}

namespace {

void require_uniform(const std::vector<double>& g, double h, const char* axis) {
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        if (std::abs((g[i + 1] - g[i]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
            throw Error(ErrorCode::InvalidArgument, std::string(axis) + " grid is not uniform with the given step");
        }
    }
}

}  // namespace

ResidualReport residual_check(const SolutionField& field, double h_x, double h_t, double max_hx, double max_ht) {
    const std::size_t nx = field.x.size(), nt = field.t.size();
    if (nx < 7 || nt < 3 || !(h_x > 0.0) || !(h_t > 0.0) || h_x > max_hx || h_t > max_ht) {
        throw Error(ErrorCode::InvalidArgument,
                    "grid too coarse for the residual stencils: need at least 7 x-points and 3 t-points with h_x <= " +
                        format_double(max_hx) + " and h_t <= " + format_double(max_ht));
    }
    require_uniform(field.x, h_x, "x");
    require_uniform(field.t, h_t, "t");
    ResidualReport rep;
    const double cx = 1.0 / (8.0 * h_x * h_x * h_x);
    for (std::size_t i = 3; i + 3 < nx; ++i) {
        for (std::size_t j = 1; j + 1 < nt; ++j) {
            const cplx qxxx = (-field.at(i + 3, j) + 8.0 * field.at(i + 2, j) - 13.0 * field.at(i + 1, j) +
                               13.0 * field.at(i - 1, j) - 8.0 * field.at(i - 2, j) + field.at(i - 3, j)) *
                              cx;
            const cplx qt = (field.at(i, j + 1) - field.at(i, j - 1)) / (2.0 * h_t);
            const double r = std::abs(qt + qxxx);
            ++rep.points;
            if (r > rep.max_residual || rep.points == 1) {
                rep.max_residual = r;
                rep.at_x = field.x[i];
                rep.at_t = field.t[j];
            }
        }
    }
    return rep;
}

cplx right_derivative(std::span<const cplx> q, double h) {
    if (q.size() < 5) throw Error(ErrorCode::InvalidArgument, "one-sided stencil needs five samples");
    const std::size_t n = q.size() - 1;
    return (25.0 * q[n] - 48.0 * q[n - 1] + 36.0 * q[n - 2] - 16.0 * q[n - 3] + 3.0 * q[n - 4]) / (12.0 * h);
}

namespace {

double heat_cutoff(const InitialDatum& f) {
    const double eps = f.decay_rate() > 0.0 ? f.decay_rate() : 1.0;
    return std::min(f.support_end(), 60.0 / eps);
}

cplx sine_quadrature(const std::function<cplx(double)>& g, const InitialDatum& f, double lambda) {
    const double end = heat_cutoff(f);
    quad::AdaptiveOptions o;
    o.abs_tol = 1e-16;
    o.rel_tol = 1e-14;
    const int panels = std::max(16, static_cast<int>(end * (std::abs(lambda) + 1.0) / 3.0));
    const auto r = quad::integrate([&](double x) { return std::sin(lambda * x) * g(x); }, 0.0, end, o, panels);
    if (!r.converged) throw Error(ErrorCode::QuadratureFailure, "sine transform did not converge");
    return r.value / (2.0 * pi);
}

}  // namespace

cplx sine_transform(const InitialDatum& f, double lambda) {
    if (f.domain() != Domain::HalfLine) throw Error(ErrorCode::DomainMismatch, "sine transform needs half-line data");
    if (lambda == 0.0) return 0.0;
    if (const auto* e = f.exp_sum()) {
        return (e->half_line_transform(-lambda) - e->half_line_transform(lambda)) / (2.0 * I) / (2.0 * pi);
    }
    return sine_quadrature([&](double x) { return f.value(x); }, f, lambda);
}

cplx solve_heat_sine(const InitialDatum& f, double x, double t, double* abs_error) {
    if (f.domain() != Domain::HalfLine) throw Error(ErrorCode::DomainMismatch, "heat problem needs half-line data");
    if (!(t >= 0.0) || !(x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need x >= 0 and t >= 0");
    if (std::abs(f.value(0.0)) > 1e-10) {
        throw Error(ErrorCode::HypothesisFailed, "heat datum must vanish at x = 0");
    }
    if (abs_error) *abs_error = 0.0;
    if (x == 0.0) return 0.0;
    const double cutoff = t > 0.0 ? std::min(400.0, std::sqrt(50.0 / t)) : 400.0;
    ContourPath path;
    path.truncation_radius = cutoff;
    path.segments = {Ray{0.0, 0.0, cutoff, false}};
    IntegrateOptions io;
    io.abs_tol = 1e-13;
    io.rel_tol = 1e-12;
    // sin(λx) = (e^{iλx} − e^{−iλx})/2i, i.e. carriers 0 and 2x around e^{iλx}.
    if (t == 0.0) io.tail = TailModel{x, 0.0, {0.0, 2.0 * x}};
    const auto r = integrate(path, [&](cplx l) {
        const double lam = l.real();
        return 4.0 * std::sin(lam * x) * std::exp(-lam * lam * t) * sine_transform(f, lam);
    }, io);
    if (!r.converged) throw Error(ErrorCode::QuadratureFailure, "heat inversion did not converge");
    if (abs_error) *abs_error = r.abs_error_estimate;
    return r.value;
}

cplx heat_image_solution(const InitialDatum& f, double x, double t) {
    if (t == 0.0) return f.value(x);
    const double width = std::sqrt(4.0 * t);
    const double end = std::min(x + 9.0 * width, f.support_end());
    auto G = [t](double z) { return std::exp(-z * z / (4.0 * t)) / std::sqrt(4.0 * pi * t); };
    quad::AdaptiveOptions o;
    o.abs_tol = 1e-15;
    o.rel_tol = 1e-14;
    const int panels = std::max(8, static_cast<int>(end / width) * 2);
    const auto r = quad::integrate([&](double y) { return (G(x - y) - G(x + y)) * f.value(y); }, 0.0, end, o, panels);
    return r.value;
}

double generalized_eig_check(const InitialDatum& f, double lambda) {
    if (f.domain() != Domain::HalfLine) throw Error(ErrorCode::DomainMismatch, "needs half-line data");
    if (lambda == 0.0) return 0.0;
    const cplx lhs = sine_quadrature([&](double x) { return -f.derivative(2, x); }, f, lambda);
    const cplx rhs = lambda * lambda * sine_quadrature([&](double x) { return f.value(x); }, f, lambda);
    return std::abs(lhs - rhs);
}

}  // namespace utm
