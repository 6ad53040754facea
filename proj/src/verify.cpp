#include "utm/verify.hpp"

#include <algorithm>
#include <random>

#include "utm/augeig.hpp"
#include "utm/quadrature.hpp"
#include "utm/solver.hpp"
#include "utm/zeros.hpp"

namespace utm {

namespace {

using Params = std::vector<std::pair<std::string, double>>;

struct Suite {
    const VerifyConfig& cfg;
    std::vector<CheckRecord>& out;

    CheckRecord& add(std::string id, Params params, double magnitude, double tol) {
        CheckRecord r;
        r.check_id = std::move(id);
        r.problem = std::string(to_string(cfg.problem));
        r.datum = cfg.datum.label();
        r.params = std::move(params);
        r.magnitude = magnitude;
        r.tolerance = tol;
        r.pass = std::isfinite(magnitude) && magnitude <= tol;
        out.push_back(std::move(r));
        return out.back();
    }

    bool interval() const { return cfg.problem == ProblemId::FiniteIntervalKdV; }
    bool kdv() const { return cfg.problem != ProblemId::HalfLineHeat; }

    ContourOptions contour() const {
        ContourOptions co = cfg.contour;
        if (cfg.datum.domain() == Domain::HalfLine) co.epsilon = cfg.datum.decay_rate();
        return co;
    }

    /// Interior grid on which inversion is claimed.
    std::vector<double> inversion_grid() const {
        std::vector<double> g;
        if (interval()) {
            for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
        } else {
            for (int i = 1; i <= 50; ++i) g.push_back(0.1 * i);
        }
        return g;
    }

    /// Ten interior points.
    std::vector<double> ten_points() const {
        std::vector<double> g;
        for (int i = 0; i < 10; ++i) g.push_back(interval() ? 0.05 + 0.1 * i : 0.25 + 0.5 * i);
        return g;
    }
};

std::vector<double> uniform(double a, double h, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + h * i;
    return g;
}

void datum_suite(Suite& s) {
    const InitialDatum& f = s.cfg.datum;
    const auto compat = check_compatibility(f, s.cfg.problem, 1e-10);
    double worst = 0.0;
    for (const auto& [label, r] : compat.satisfied) worst = std::max(worst, r);
    s.add("datum.compatibility", {}, worst, 1e-10);

    const double end = f.domain() == Domain::Interval ? 1.0 : std::min(10.0, f.support_end());
    const int top = std::min(3, f.max_derivative());
    const double h = 1e-5;
    double fd = 0.0;
    for (int k = 1; k <= top; ++k) {
        for (int i = 0; i < 50; ++i) {
            const double x = 0.02 * end + (0.96 * end) * i / 49.0;
            const cplx num = (f.derivative(k - 1, x + h) - f.derivative(k - 1, x - h)) / (2.0 * h);
            fd = std::max(fd, std::abs(num - f.derivative(k, x)));
        }
    }
    s.add("datum.derivative_fd", {{"step", h}, {"orders", double(top)}}, fd, 1e-6);

    if (f.domain() == Domain::HalfLine) {
        const auto d = check_decay_bound(f);
        auto& r = s.add("datum.decay_bound", {{"epsilon", f.decay_rate()}}, d.constant, 1e6);
        r.pass = d.passed;
    }
    if (f.has_closed_form()) {
        std::mt19937_64 rng(s.cfg.seed);
        const double top_im = f.domain() == Domain::HalfLine ? f.decay_rate() - 0.1 : 5.0;
        std::uniform_real_distribution<double> re(-20.0, 20.0), im(-2.0, top_im);
        double rel = 0.0;
        for (int i = 0; i < 20; ++i) {
            const cplx l(re(rng), im(rng));
            const cplx a = f.closed_form_transform(l);
            const cplx b = numeric_fourier_transform(f, l).value.value();
            rel = std::max(rel, std::abs(a - b) / std::max(std::abs(a), 1e-300));
        }
        s.add("datum.closed_form_transform", {{"samples", 20}}, rel, 1e-10);
    }
}

void transform_suite(Suite& s) {
    const InitialDatum& f = s.cfg.datum;
    const TransformPair pair = make_transform_pair(s.cfg.problem, s.contour());
    const auto inv = verify_inversion(pair, f, s.inversion_grid(), 1e-5);
    s.add("transform.inversion", {{"R", pair.options.R}, {"grid_points", double(inv.grid.size())}}, inv.sup_error,
          1e-5);

    const SpectralContext ctx = make_context(s.cfg.problem, f);
    std::mt19937_64 rng(s.cfg.seed);
    if (s.interval()) {
        std::uniform_real_distribution<double> rad(0.0, 30.0), ang(-pi, pi);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const cplx l = std::polar(rad(rng), ang(rng));
            const cplx qd = fourier_transform(ctx, l) * delta(l);
            const cplx lhs = zeta(ctx, Branch::Plus, l) - std::exp(-I * l) * zeta(ctx, Branch::Minus, l);
            worst = std::max(worst, std::abs(lhs - qd) / (1.0 + std::abs(qd)));
        }
        s.add("spectral.zeta_delta_identity", {{"samples", 50}, {"max_modulus", 30}}, worst, 1e-10);
    }

    double kernel = 0.0;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const ContourPath& path = b == Branch::Plus ? pair.gamma_plus : pair.gamma_minus;
        std::uniform_int_distribution<std::size_t> seg(0, path.segments.size() - 1);
        std::uniform_real_distribution<double> u(0.0, 0.5);
        for (int i = 0; i < 5; ++i) {
            const cplx l = piece_point(path.segments[seg(rng)], u(rng));
            const cplx a = forward(pair, f, l, b, ForwardMode::SpectralRatio);
            const cplx q = forward(pair, f, l, b, ForwardMode::KernelQuadrature);
            kernel = std::max(kernel, std::abs(a - q));
        }
    }
    s.add("transform.kernel_cross_check", {{"samples", 10}}, kernel, 1e-10);

    double gam = 0.0;
    for (double x : s.ten_points()) {
        const GammaInversion g = gamma_inversion(pair, f, x);
        gam = std::max({gam, std::abs(g.ratio_form - g.exact), std::abs(g.fourier_form - g.exact)});
    }
    s.add("transform.gamma_inversion", {{"points", 10}}, gam, 1e-5);
}

void solver_suite(Suite& s) {
    const InitialDatum& f = s.cfg.datum;
    SolutionQuery base;
    base.problem = s.cfg.problem;
    base.datum = f;
    base.contour = s.contour();
    double imag = 0.0;
    auto track = [&imag](const SolutionField& fl) {
        for (cplx v : fl.values) imag = std::max(imag, std::abs(v.imag()));
    };

    SolutionQuery q0 = base;
    q0.x_grid = s.inversion_grid();
    q0.t_grid = {0.0};
    const SolutionField init = solve_utm(q0);
    track(init);
    const TransformPair pair = make_transform_pair(s.cfg.problem, base.contour);
    const auto inv = verify_inversion(pair, f, q0.x_grid, 1e-5);
    double repro = 0.0, same = 0.0;
    for (std::size_t i = 0; i < q0.x_grid.size(); ++i) {
        repro = std::max(repro, std::abs(init.at(i, 0) - f.value(q0.x_grid[i])));
        same = std::max(same, std::abs(init.at(i, 0) - inv.reconstructed[i]));
    }
    s.add("solver.initial_reproduction", {{"t", 0.0}}, repro, 1e-5);
    s.add("solver.initial_matches_inversion", {{"t", 0.0}}, same, 1e-12);

    const std::vector<double> times{0.01, 0.05, 0.1};
    SolutionQuery qb = base;
    const double h = 0.01;
    qb.x_grid = {0.0};
    if (s.interval()) {
        for (int k = 4; k >= 0; --k) qb.x_grid.push_back(1.0 - k * h);
    }
    qb.t_grid = times;
    const SolutionField bnd = solve_utm(qb);
    track(bnd);
    double left = 0.0, right = 0.0, slope = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        left = std::max(left, std::abs(bnd.at(0, j)));
        if (s.interval()) {
            std::vector<cplx> tail;
            for (std::size_t i = 1; i < qb.x_grid.size(); ++i) tail.push_back(bnd.at(i, j));
            right = std::max(right, std::abs(tail.back()));
            slope = std::max(slope, std::abs(right_derivative(tail, h)));
        }
    }
    s.add("solver.boundary_left", {{"t_count", 3}}, left, 1e-6);
    if (s.interval()) {
        s.add("solver.boundary_right", {{"t_count", 3}}, right, 1e-6);
        s.add("solver.boundary_right_slope", {{"t_count", 3}, {"h", h}}, slope, 1e-4);
    }

    SolutionQuery qd = base;
    qd.x_grid = s.interval() ? std::vector<double>{0.25, 0.5, 0.75} : std::vector<double>{0.5, 1.5, 3.0};
    qd.t_grid = {0.01, 0.1};
    std::vector<SolutionField> fields;
    for (double d : {0.0, pi / 48.0, pi / 24.0}) {
        qd.delta = d;
        fields.push_back(solve_utm(qd));
        track(fields.back());
    }
    double spread = 0.0;
    for (std::size_t k = 1; k < fields.size(); ++k)
        for (std::size_t n = 0; n < fields[0].values.size(); ++n)
            spread = std::max(spread, std::abs(fields[k].values[n] - fields[0].values[n]));
    s.add("solver.deformation_invariance", {{"delta_max", pi / 24.0}}, spread, 1e-7);

    double trunc = 0.0;
    std::vector<SolutionField> byR;
    for (double R : {40.0, 80.0}) {
        qd.contour.R = R;
        byR.push_back(solve_utm(qd));
    }
    for (std::size_t n = 0; n < byR[0].values.size(); ++n)
        trunc = std::max(trunc, std::abs(byR[1].values[n] - byR[0].values[n]));
    s.add("solver.truncation_stability", {{"R_low", 40}, {"R_high", 80}}, trunc, 1e-8);

    SolutionQuery qr = base;
    double hx = 0.02, ht = 0.001;
    if (s.interval()) {
        qr.x_grid = uniform(0.2, hx, 31);
        qr.t_grid = uniform(0.05, ht, 51);
    } else {
        qr.x_grid = uniform(0.5, hx, 126);
        qr.t_grid = uniform(0.05, ht, 151);
    }
    const SolutionField field = solve_utm(qr);
    track(field);
    const ResidualReport res = residual_check(field, hx, ht);
    s.add("solver.pde_residual",
          {{"h_x", hx}, {"h_t", ht}, {"x_lo", qr.x_grid.front()}, {"x_hi", qr.x_grid.back()},
           {"t_lo", qr.t_grid.front()}, {"t_hi", qr.t_grid.back()}, {"worst_x", res.at_x}, {"worst_t", res.at_t}},
          res.max_residual, 5e-3);
    s.add("solver.reality", {}, imag, 1e-6);
}

void augeig_suite(Suite& s) {
    const InitialDatum& f = s.cfg.datum;
    const ProblemId p = s.cfg.problem;
    AugOptions opts;
    opts.contour = s.contour();
    const TransformPair pair = make_transform_pair(p, opts.contour);

    std::mt19937_64 rng(s.cfg.seed);
    double eig = 0.0;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const ContourPath& path = b == Branch::Plus ? pair.gamma_plus : pair.gamma_minus;
        std::uniform_int_distribution<std::size_t> seg(0, path.segments.size() - 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 20; ++i) {
            const cplx l = piece_point(path.segments[seg(rng)], u(rng));
            eig = std::max(eig, std::abs(eigen_relation_residual(p, f, l, b)));
        }
    }
    s.add("augeig.eigen_relation", {{"samples_per_branch", 20}}, eig, 1e-9);

    for (Branch b : {Branch::Plus, Branch::Minus}) {
        double worst = 0.0;
        for (double x : s.ten_points()) worst = std::max(worst, std::abs(typeII_vanishing(p, f, b, x, opts).value));
        s.add(b == Branch::Plus ? "augeig.typeII_vanishing_plus" : "augeig.typeII_vanishing_minus",
              {{"points", 10}, {"R", opts.contour.R}}, worst, 1e-6);
    }

    double diag = 0.0, diag_rhs = 0.0;
    for (double x : s.ten_points()) {
        const DiagonalisedInverse d = diagonalised_inverse_check(p, f, x, opts);
        diag = std::max(diag, std::abs(d.lhs - d.rhs));
        diag_rhs = std::max(diag_rhs, std::abs(d.rhs - f.value(x)));
    }
    s.add("augeig.diagonalised_inverse", {{"points", 10}}, diag, 1e-5);
    s.add("augeig.diagonalised_inverse_rhs", {{"points", 10}}, diag_rhs, 1e-5);

    const BoundaryTraces tr = boundary_traces(f);
    const std::vector<double> radii{20.0, 40.0, 80.0, 160.0};
    const auto probe = typeI_failure_probe(p, f, std::nullopt, 0.3, radii, opts);
    Params pp{{"x", 0.3}};
    for (std::size_t i = 0; i < radii.size(); ++i) pp.push_back({"R" + std::to_string(i), probe[i]});
    if (std::abs(tr.fx0) > 0.0) {
        double drop = 0.0;
        for (std::size_t i = 2; i < probe.size(); ++i) drop = std::max(drop, probe[i - 1] - probe[i]);
        auto& r = s.add("augeig.typeI_probe_growth", pp, drop, 0.0);
        r.note = "largest decrease between consecutive radii after the first";
    } else if (std::abs(tr.fxx0) == 0.0) {
        s.add("augeig.typeI_probe_null", pp, *std::max_element(probe.begin(), probe.end()), 1e-8);
    } else {
        auto& r = s.add("augeig.typeI_probe", pp, probe.back(), 0.0);
        r.asserted = false;
        r.pass = true;
        r.note = "f'(0) = 0 but f''(0) != 0: diagnostic only";
    }

    const SpectralData data = spectral_data(pair, f, 1.0);
    double fmax = 0.0;
    for (cplx v : data.values) fmax = std::max(fmax, std::abs(v));
    const double end = f.domain() == Domain::Interval ? 1.0 : std::min(f.support_end(), 60.0 / f.decay_rate());
    quad::AdaptiveOptions qo;
    const double l1 = quad::integrate([&](double x) { return cplx(std::abs(f.value(x))); }, 0.0, end, qo, 16)
                          .value.real();
    auto& cw = s.add("augeig.completeness_witness", {{"l1_norm", l1}, {"max_F", fmax}},
                     fmax > 0.0 ? 1e-3 * l1 / fmax : INFINITY, 1.0);
    cw.note = "1e-3*||f||_1 / max|F| over nodes";

    if (s.cfg.negative_control && p == ProblemId::HalfLineKdV) {
        AugOptions below = opts;
        below.indent_below = true;
        const double v = std::abs(typeII_vanishing(p, f, Branch::Minus, 0.5, below).value);
        auto& r = s.add("augeig.typeII_vanishing_below_origin", {{"x", 0.5}, {"R", opts.contour.R}}, v, 1e-6);
        r.expected_failure = true;
        r.note = "Gamma- detoured below 0 picks up the pole at the origin; failure is the designed outcome";
    }
}

void zeros_suite(Suite& s) {
    const double R = 40.0;
    const auto zs = find_zeros(R);
    double bad = 0.0;
    int count = 0;
    for (const auto& z : zs) {
        count += z.multiplicity;
        const bool origin = z.region == Region::Origin && z.multiplicity == 2;
        const bool inside = z.region != Region::Origin && z.region != Region::Elsewhere;
        if (!origin && !inside) bad += 1.0;
    }
    s.add("zeros.location", {{"R", R}, {"zeros", double(zs.size())}}, bad, 0.0);

    const Box box{-R, R, -R, R};
    const ZeroCount total = count_zeros(box);
    int refined = 0;
    for (const auto& z : find_zeros_in_box(total.box)) refined += z.multiplicity;
    s.add("zeros.argument_principle", {{"count", double(total.count)}, {"refined", double(refined)}},
          std::abs(total.count - refined), 0.0);

    double rot = 0.0, res = 0.0;
    for (const auto& z : zs) {
        if (z.region == Region::Origin) continue;
        double best = INFINITY;
        for (const auto& w : zs) best = std::min(best, std::abs(alpha * z.location - w.location));
        rot = std::max(rot, best);
        res = std::max(res, z.residual / std::max(1.0, z.derivative));
    }
    s.add("zeros.rotation_covariance", {{"R", R}}, rot, 1e-8);
    s.add("zeros.residual", {{"R", R}}, res, 1e-10);
    const auto cl = certify_contour_clearance(zs, R, 0.1);
    auto& r = s.add("zeros.contour_clearance", {{"R", R}}, cl.min_distance, 0.1);
    r.pass = cl.passed;
    r.note = "magnitude is the smallest zero-to-contour distance; tolerance is the required margin";
}

void heat_suite(Suite& s) {
    const InitialDatum& f = s.cfg.datum;
    double eig = 0.0;
    for (double l : {0.5, 1.0, 2.0, 5.0}) eig = std::max(eig, generalized_eig_check(f, l));
    s.add("heat.generalised_eigenfunction", {{"lambda_count", 4}}, eig, 1e-10);
    double diff = 0.0;
    for (double t : {0.01, 0.1, 0.5}) {
        for (int i = 0; i <= 39; ++i) {
            const double x = 0.1 + 0.1 * i;
            diff = std::max(diff, std::abs(solve_heat_sine(f, x, t) - heat_image_solution(f, x, t)));
        }
    }
    s.add("heat.image_method", {{"x_lo", 0.1}, {"x_hi", 4.0}}, diff, 1e-6);
    s.add("heat.initial_reproduction", {{"x", 1.0}}, std::abs(solve_heat_sine(f, 1.0, 0.0) - f.value(1.0)), 1e-6);
}

}  // namespace

std::vector<std::string> suite_names() { return {"datum", "transform", "solver", "augeig", "zeros", "heat", "all"}; }

std::vector<CheckRecord> run_suite(const std::string& suite, const VerifyConfig& cfg) {
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
    }
    if (cfg.datum.domain() != domain_of(cfg.problem)) {
        throw Error(ErrorCode::DomainMismatch, "datum '" + cfg.datum.label() + "' does not match the problem");
    }
    std::vector<CheckRecord> out;
    Suite s{cfg, out};
    const bool all = suite == "all";
    const bool kdv = s.kdv();
    if (!kdv && (suite == "transform" || suite == "solver" || suite == "augeig")) {
        throw Error(ErrorCode::InvalidArgument, "suite '" + suite + "' needs a KdV problem");
    }
    if (suite == "heat" && cfg.datum.domain() != Domain::HalfLine) {
        throw Error(ErrorCode::DomainMismatch, "the heat suite needs half-line data");
    }
    if (all || suite == "datum") datum_suite(s);
    if ((all && kdv) || suite == "transform") transform_suite(s);
    if ((all && kdv) || suite == "solver") solver_suite(s);
    if ((all && kdv) || suite == "augeig") augeig_suite(s);
    if (all || suite == "zeros") zeros_suite(s);
    if ((all && cfg.datum.domain() == Domain::HalfLine) || suite == "heat") heat_suite(s);
    return out;
}

bool all_passed(const std::vector<CheckRecord>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return !c.asserted || c.pass; });
}

}  // namespace utm
