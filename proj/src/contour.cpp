#include "utm/contour.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>

#include "utm/quadrature.hpp"

namespace utm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

cplx unit(double angle) { return std::polar(1.0, angle); }

/// Ray length from `base` along `angle` to the circle |λ| = R.
double length_to_radius(cplx base, double angle, double R) {
    const cplx b = base * unit(-angle);
    const double disc = R * R - b.imag() * b.imag();
    if (disc <= 0.0) throw Error(ErrorCode::InvalidArgument, "ray does not reach the truncation radius");
    return -b.real() + std::sqrt(disc);
}

Ray make_ray(cplx base, double angle, double R, bool incoming) {
    return Ray{base, angle, length_to_radius(base, angle, R), incoming};
}

cplx far_end(const Ray& r) { return r.base + r.length * unit(r.angle); }

double piece_length(const PathPiece& p) {
    return std::visit(overloaded{[](const Ray& r) { return r.length; },
                                 [](const Arc& a) { return a.radius * std::abs(a.end_angle - a.start_angle); },
                                 [](const LineSegment& s) { return std::abs(s.b - s.a); }},
                      p);
}

}  // namespace

cplx piece_point(const PathPiece& p, double u) {
    return std::visit(overloaded{[u](const Ray& r) {
                                     const double s = r.incoming ? (1.0 - u) * r.length : u * r.length;
                                     return r.base + s * unit(r.angle);
                                 },
                                 [u](const Arc& a) {
                                     return a.center + a.radius * unit(a.start_angle + u * (a.end_angle - a.start_angle));
                                 },
                                 [u](const LineSegment& s) { return s.a + u * (s.b - s.a); }},
                      p);
}

cplx piece_tangent(const PathPiece& p, double u) {
    return std::visit(overloaded{[](const Ray& r) { return (r.incoming ? -r.length : r.length) * unit(r.angle); },
                                 [u](const Arc& a) {
                                     const double span = a.end_angle - a.start_angle;
                                     return I * a.radius * span * unit(a.start_angle + u * span);
                                 },
                                 [](const LineSegment& s) { return s.b - s.a; }},
                      p);
}

cplx piece_start(const PathPiece& p) { return piece_point(p, 0.0); }
cplx piece_end(const PathPiece& p) { return piece_point(p, 1.0); }

PathPiece reversed(const PathPiece& p) {
    return std::visit(overloaded{[](const Ray& r) -> PathPiece {
                                     Ray q = r;
                                     q.incoming = !r.incoming;
                                     return q;
                                 },
                                 [](const Arc& a) -> PathPiece {
                                     return Arc{a.center, a.radius, a.end_angle, a.start_angle};
                                 },
                                 [](const LineSegment& s) -> PathPiece { return LineSegment{s.b, s.a}; }},
                      p);
}

ContourPath reversed(const ContourPath& path) {
    ContourPath out = path;
    out.segments.clear();
    for (auto it = path.segments.rbegin(); it != path.segments.rend(); ++it) out.segments.push_back(reversed(*it));
    return out;
}

double max_gap(const ContourPath& path) {
    double gap = 0.0;
    const double R = path.truncation_radius;
    for (std::size_t i = 0; i + 1 < path.segments.size(); ++i) {
        const cplx a = piece_end(path.segments[i]);
        const cplx b = piece_start(path.segments[i + 1]);
        const bool at_infinity = R > 0.0 && std::abs(std::abs(a) - R) <= 1e-9 * R &&
                                 std::abs(std::abs(b) - R) <= 1e-9 * R;
        if (!at_infinity) gap = std::max(gap, std::abs(a - b));
    }
    return gap;
}

ContourPath build_contour(ProblemId problem, Branch sign, const ContourOptions& opts) {
    const double R = opts.R;
    if (!(R > 1.0) || !std::isfinite(R)) {
        throw Error(ErrorCode::InvalidArgument, "truncation radius must exceed 1");
    }
    ContourPath path;
    path.truncation_radius = R;
    path.nodes_per_wavelength = opts.nodes_per_wavelength;
    if (!(opts.nodes_per_wavelength > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "nodes_per_wavelength must be positive");
    }
    auto& s = path.segments;
    const double third = pi / 3.0;
    if (problem == ProblemId::FiniteIntervalKdV) {
        if (sign == Branch::Plus) {
            s.push_back(make_ray(unit(third), third, R, true));
            s.push_back(Arc{0.0, 1.0, third, 0.0});
            s.push_back(make_ray(1.0, 0.0, R, false));
            s.push_back(make_ray(-1.0, pi, R, true));
            s.push_back(Arc{0.0, 1.0, pi, 2 * third});
            s.push_back(make_ray(unit(2 * third), 2 * third, R, false));
        } else {
            s.push_back(make_ray(unit(-third), -third, R, true));
            s.push_back(Arc{0.0, 1.0, -third, -2 * third});
            s.push_back(make_ray(unit(-2 * third), -2 * third, R, false));
        }
        return path;
    }
    if (problem != ProblemId::HalfLineKdV) {
        throw Error(ErrorCode::InvalidArgument, "contours are defined for the KdV problems only");
    }
    if (sign == Branch::Plus) {
        s.push_back(make_ray(unit(2 * third), 2 * third, R, true));
        s.push_back(Arc{0.0, 1.0, 2 * third, third});
        s.push_back(make_ray(unit(third), third, R, false));
        return path;
    }
    const double r = opts.indent_radius > 0.0 ? opts.indent_radius : 0.5 * opts.epsilon;
    if (!(r > 0.0) || !(r < opts.epsilon) || !(r < R)) {
        throw Error(ErrorCode::InvalidArgument, "indentation radius must satisfy 0 < r < epsilon");
    }
    s.push_back(Ray{-r, pi, R - r, true});
    s.push_back(Arc{0.0, r, pi, opts.indent_below ? 2 * pi : 0.0});
    s.push_back(Ray{r, 0.0, R - r, false});
    return path;
}

ContourPath build_gamma(ProblemId problem, const ContourOptions& opts) {
    if (!(opts.R > 1.0)) throw Error(ErrorCode::InvalidArgument, "truncation radius must exceed 1");
    double r = 1.0;
    if (problem != ProblemId::FiniteIntervalKdV) {
        r = opts.indent_radius > 0.0 ? opts.indent_radius : 0.5 * opts.epsilon;
        if (!(r > 0.0) || !(r < opts.epsilon)) {
            throw Error(ErrorCode::InvalidArgument, "indentation radius must satisfy 0 < r < epsilon");
        }
    }
    ContourPath path;
    path.truncation_radius = opts.R;
    path.nodes_per_wavelength = opts.nodes_per_wavelength;
    path.segments = {Ray{-r, pi, opts.R - r, true}, Arc{0.0, r, pi, 0.0}, Ray{r, 0.0, opts.R - r, false}};
    return path;
}

ContourPath deform(const ContourPath& path, double delta, ProblemId, Branch) {
    if (!(std::abs(delta) <= pi / 12.0)) {
        throw Error(ErrorCode::InvalidArgument, "deformation angle must satisfy |delta| <= pi/12");
    }
    ContourPath out = path;
    if (delta == 0.0) return out;
    const double mag = std::abs(delta);
    for (auto& piece : out.segments) {
        if (auto* r = std::get_if<Ray>(&piece)) {
            const double sgn = std::sin(3.0 * (r->angle + mag)) > 0.0 ? 1.0 : -1.0;
            r->angle += sgn * delta;
            r->length = length_to_radius(r->base, r->angle, path.truncation_radius);
        }
    }
    return out;
}

cplx model_tail(cplx P, double theta, cplx nu, double t, int k) {
    if (t == 0.0 && nu == cplx(0.0)) return std::pow(P, 1.0 - k) / double(k - 1);
    double psi;
    double kappa;
    if (t > 0.0) {
        static constexpr std::array<double, 3> bisectors{pi / 6.0, 5.0 * pi / 6.0, -pi / 2.0};
        psi = bisectors[0];
        double best = 10.0;
        for (double b : bisectors) {
            const double d = std::abs(std::arg(unit(theta - b)));
            if (d < best) {
                best = d;
                psi = b;
            }
        }
        kappa = std::max(1.5 * std::norm(P) * t, 0.5 * std::abs(nu));
    } else {
        // Steepest decay of e^{iλν}.
        psi = pi / 2.0 - std::arg(nu);
        kappa = std::abs(nu);
    }
    const cplx e = unit(psi);
    const double sigma = 1.0 / std::max(kappa, 1e-3);
    auto g = [&](double v) -> cplx {
        const cplx w = sigma * v * e;
        const cplx cube = (3.0 * P * P + 3.0 * P * w + w * w) * w;
        return std::exp(I * nu * w + I * t * cube) * std::pow(P + w, -double(k)) * e * sigma;
    };
    quad::AdaptiveOptions o;
    o.abs_tol = 1e-17 * std::pow(std::abs(P), 1.0 - k);
    o.rel_tol = 1e-11;
    const auto res = quad::integrate_to_infinity(g, 0.0, o, 8);
    return std::exp(I * P * nu + I * P * P * P * t) * res.value;
}

TailEstimate fit_tail(const Ray& ray, const std::vector<cplx>& lambdas, const std::vector<cplx>& amplitudes,
                      const TailModel& model) {
    TailEstimate est;
    if (lambdas.empty()) return est;
    const cplx P = far_end(ray);
    const double R = std::abs(P);
    std::size_t iend = 0;
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (std::abs(lambdas[i]) > std::abs(lambdas[iend])) iend = i;
    const double log_mod = -P.imag() * model.x - (P * P * P).imag() * model.t;
    const double h_end = std::abs(amplitudes[iend]) * std::exp(log_mod);
    if (h_end * (1.0 + R) < 1e-20) return est;

    const cplx dir = unit(ray.angle);
    const double tol = 1e-12;
    if (model.t > 0.0 && std::sin(3.0 * ray.angle) < -tol) {
        est.magnitude = h_end * R;
        return est;
    }
    std::vector<cplx> carriers;
    for (cplx m : model.carriers) {
        if (((model.x - m) * dir).imag() >= -tol) carriers.push_back(m);
    }
    constexpr int kmin = 2, kmax = 6;
    const int nk = kmax - kmin + 1;
    const Eigen::Index rows = static_cast<Eigen::Index>(lambdas.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(carriers.size()) * nk;
    if (carriers.empty() || rows < cols) {
        est.magnitude = h_end * R;
        return est;
    }
    Eigen::MatrixXcd A(rows, cols);
    Eigen::VectorXcd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const cplx lam = lambdas[i];
        const cplx z = lam / R;
        for (std::size_t c = 0; c < carriers.size(); ++c) {
            const cplx carrier = std::exp(-I * lam * carriers[c]);
            for (int k = kmin; k <= kmax; ++k) A(i, c * nk + (k - kmin)) = carrier * std::pow(z, -double(k));
        }
        b(i) = amplitudes[i];
    }
    // Decaying carriers give columns spanning many orders of magnitude.
    Eigen::VectorXd scale(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        scale(j) = A.col(j).cwiseAbs().maxCoeff();
        if (scale(j) > 0.0) A.col(j) /= scale(j);
    }
    const Eigen::VectorXcd coef = A.colPivHouseholderQr().solve(b);
    cplx tail{0.0};
    for (std::size_t c = 0; c < carriers.size(); ++c) {
        const cplx nu = model.x - carriers[c];
        for (int k = kmin; k <= kmax; ++k) {
            const Eigen::Index j = c * nk + (k - kmin);
            if (!(scale(j) > 0.0) || coef(j) == cplx(0.0)) continue;
            const cplx a = coef(j) / scale(j) * std::pow(R, double(k));
            tail += a * model_tail(P, ray.angle, nu, model.t, k);
        }
    }
    est.value = ray.incoming ? -tail : tail;
    est.magnitude = std::abs(tail);
    est.applied = true;
    return est;
}

namespace {

/// Parameter range of a ray outside which the integrand stays below a
/// negligible fraction of the tolerance at every probe point.
std::pair<double, double> live_span(const PathPiece& piece, const std::function<cplx(cplx)>& integrand,
                                    double abs_tol) {
    constexpr int n = 256;
    const double scale = std::abs(piece_tangent(piece, 0.0));
    const double floor = 1e-4 * abs_tol;
    int lo = n + 1, hi = -1;
    for (int k = 0; k <= n; ++k) {
        const double u = double(k) / n;
        if (std::abs(integrand(piece_point(piece, u))) * scale >= floor) {
            lo = std::min(lo, k);
            hi = k;
        }
    }
    if (hi < 0) return {0.0, 0.0};
    return {std::max(0, lo - 2) / double(n), std::min(n, hi + 2) / double(n)};
}

}  // namespace

QuadratureResult integrate(const ContourPath& path, const std::function<cplx(cplx)>& integrand,
                           const IntegrateOptions& opts) {
    QuadratureResult out;
    const double x = opts.tail ? opts.tail->x : 1.0;
    const double t = opts.tail ? opts.tail->t : 0.0;
    const double phase_per_panel = 2.0 * pi * 21.0 / path.nodes_per_wavelength;
    std::vector<quad::Interval> initial;
    for (int i = 0; i < static_cast<int>(path.segments.size()); ++i) {
        const auto& piece = path.segments[i];
        auto [u, u_end] = std::holds_alternative<Ray>(piece) ? live_span(piece, integrand, opts.abs_tol)
                                                              : std::pair<double, double>{0.0, 1.0};
        int count = 0;
        const double min_step = 1e-6;
        const double max_step = 0.25;
        while (u < u_end) {
            const cplx lam = piece_point(piece, u);
            const double rate = (std::abs(x) + 1.0 + 3.0 * std::norm(lam) * t) * std::abs(piece_tangent(piece, u));
            double du = std::clamp(phase_per_panel / std::max(rate, 1e-300), min_step, max_step);
            if (u + du > u_end - 1e-12 || ++count > 200000) du = u_end - u;
            initial.push_back({i, u, u + du});
            u += du;
        }
    }
    auto f = [&](int piece, double u) {
        const auto& p = path.segments[piece];
        return integrand(piece_point(p, u)) * piece_tangent(p, u);
    };
    quad::AdaptiveOptions qo;
    qo.abs_tol = opts.abs_tol;
    qo.rel_tol = opts.rel_tol;
    qo.max_panels = std::max(opts.max_panels, 4 * static_cast<int>(initial.size()));
    const auto res = quad::integrate_panels(f, initial, qo);
    out.value = res.value;
    out.abs_error_estimate = res.abs_error;
    out.nodes_used = res.evaluations;
    out.converged = res.converged;

    const double R = path.truncation_radius;
    for (const auto& piece : path.segments) {
        const auto* ray = std::get_if<Ray>(&piece);
        if (!ray || R <= 0.0 || std::abs(std::abs(far_end(*ray)) - R) > 1e-9 * R) continue;
        if (opts.tail) {
            const TailModel& m = *opts.tail;
            if (std::abs(integrand(far_end(*ray))) * (1.0 + R) < 1e-20) continue;
            std::vector<cplx> lams, amps;
            constexpr int n = 48;
            for (int j = 0; j < n; ++j) {
                const double s = ray->length * (0.5 + 0.5 * j / (n - 1));
                const cplx lam = ray->base + s * unit(ray->angle);
                lams.push_back(lam);
                const cplx h = integrand(lam);
                const cplx e = -I * lam * m.x - I * lam * lam * lam * m.t;
                amps.push_back(h == cplx(0.0) ? cplx(0.0) : h / std::abs(h) * std::exp(std::log(std::abs(h)) + e));
            }
            out.nodes_used += n;
            const TailEstimate te = fit_tail(*ray, lams, amps, m);
            out.value += te.value;
            out.tail_bound += te.magnitude;
            continue;
        }
        // Algebraic extrapolation over the last decade of the ray.
        constexpr int n = 16;
        std::vector<double> lx, ly;
        double h_end = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = ray->length * std::pow(10.0, -1.0 + double(j) / (n - 1));
            const cplx lam = ray->base + s * unit(ray->angle);
            const double h = std::abs(integrand(lam));
            if (j == n - 1) h_end = h;
            if (h > 0.0) {
                lx.push_back(std::log(std::abs(lam)));
                ly.push_back(std::log(h));
            }
        }
        out.nodes_used += n;
        if (h_end == 0.0 || lx.size() < 2) continue;
        double mx = 0, my = 0;
        for (std::size_t j = 0; j < lx.size(); ++j) {
            mx += lx[j];
            my += ly[j];
        }
        mx /= lx.size();
        my /= lx.size();
        double sxy = 0, sxx = 0;
        for (std::size_t j = 0; j < lx.size(); ++j) {
            sxy += (lx[j] - mx) * (ly[j] - my);
            sxx += (lx[j] - mx) * (lx[j] - mx);
        }
        const double slope = sxx > 0 ? sxy / sxx : 0.0;
        out.tail_bound += slope < -1.0 ? h_end * R / (-slope - 1.0) : h_end * R;
    }
    return out;
}

std::vector<ContourNode> node_schedule(const ContourPath& path, double x_max) {
    const auto& rule = quad::gauss_legendre(20);
    const double freq = std::max(std::abs(x_max), 1.0) + 1.0;
    const double target = (20.0 / path.nodes_per_wavelength) * (2.0 * pi / freq);
    std::vector<ContourNode> nodes;
    auto emit = [&](int seg, const PathPiece& piece, double ua, double ub) {
        const double mid = 0.5 * (ua + ub), half = 0.5 * (ub - ua);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double u = mid + half * rule.nodes[i];
            nodes.push_back({piece_point(piece, u), rule.weights[i] * half * piece_tangent(piece, u), seg, u});
        }
    };
    for (int seg = 0; seg < static_cast<int>(path.segments.size()); ++seg) {
        const auto& piece = path.segments[seg];
        const double len = piece_length(piece);
        std::vector<double> cuts{0.0};
        if (const auto* r = std::get_if<Ray>(&piece)) {
            // Panels grow geometrically away from the base, where the amplitude varies fastest.
            std::vector<double> s{0.0};
            double h = std::min(target, 0.25);
            while (s.back() + h < len) {
                s.push_back(s.back() + h);
                h = std::min(h * 1.5, target);
            }
            if (len - s.back() < 0.25 * h && s.size() > 1) s.back() = len;
            else s.push_back(len);
            cuts.clear();
            for (double v : s) cuts.push_back(r->incoming ? 1.0 - v / len : v / len);
            std::sort(cuts.begin(), cuts.end());
        } else {
            const int n = std::max(2, static_cast<int>(std::ceil(len / std::min(target, 0.5))));
            for (int i = 1; i <= n; ++i) cuts.push_back(double(i) / n);
        }
        cuts.front() = 0.0;
        cuts.back() = 1.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) emit(seg, piece, cuts[i], cuts[i + 1]);
    }
    return nodes;
}

void write_contour_csv(std::ostream& os, const ContourPath& path, int samples_per_segment) {
    os << "seg_index,t_param,re,im\n";
    for (std::size_t i = 0; i < path.segments.size(); ++i) {
        for (int j = 0; j <= samples_per_segment; ++j) {
            const double u = double(j) / samples_per_segment;
            const cplx p = piece_point(path.segments[i], u);
            os << i << ',' << format_double(u) << ',' << format_double(p.real()) << ',' << format_double(p.imag())
               << '\n';
        }
    }
}

}  // namespace utm
