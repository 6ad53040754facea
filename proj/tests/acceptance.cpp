#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "utm/augeig.hpp"
#include "utm/solver.hpp"
#include "utm/verify.hpp"
#include "utm/zeros.hpp"

using namespace utm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    /// A failure whose cause is understood and reported alongside it.
    bool known = false;
};

using Fn = double (*)(double);

struct Case {
    const char* name;
    ProblemId problem;
    Fn exact;
};

const std::array<Case, 4> kdv_cases{{{"fi_poly1", ProblemId::FiniteIntervalKdV, oracle::fi_poly1},
                                     {"fi_poly2", ProblemId::FiniteIntervalKdV, oracle::fi_poly2},
                                     {"hl_exp1", ProblemId::HalfLineKdV, oracle::hl_exp1},
                                     {"hl_exp2", ProblemId::HalfLineKdV, oracle::hl_exp2}}};

ContourOptions contour_for(const InitialDatum& f, double R = 60.0) {
    ContourOptions o;
    o.R = R;
    if (f.domain() == Domain::HalfLine) o.epsilon = f.decay_rate();
    return o;
}

std::vector<double> grid(double a, double h, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + h * i;
    return g;
}

std::vector<double> ten_points(ProblemId p) {
    return p == ProblemId::FiniteIntervalKdV ? grid(0.05, 0.1, 10) : grid(0.25, 0.5, 10);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

Outcome inversion() {
    double worst = 0.0;
    for (const Case& c : kdv_cases) {
        const InitialDatum f = builtin_datum(c.name);
        const TransformPair pair = make_transform_pair(c.problem, contour_for(f));
        const auto xs = c.problem == ProblemId::FiniteIntervalKdV ? grid(0.05, 0.05, 19) : grid(0.1, 0.1, 50);
        const SpectralData data = spectral_data(pair, f, xs.back());
        for (double x : xs) worst = std::max(worst, std::abs(inverse(pair, data, x).value - c.exact(x)));
    }
    return {worst <= 1e-5, "sup error " + sci(worst) + " (tol 1e-5)"};
}

Outcome algebraic_identity() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> r(0.0, 30.0), th(-pi, pi);
    double worst = 0.0;
    for (const char* name : {"fi_poly1", "fi_poly2", "fi_poly3"}) {
        const InitialDatum f = builtin_datum(name);
        const SpectralContext ctx = make_context(ProblemId::FiniteIntervalKdV, f);
        for (int i = 0; i < 50; ++i) {
            const cplx l = std::polar(r(rng), th(rng));
            const cplx qd = oracle::fourier([&](double x) { return f.value(x).real(); }, l, 1.0) * oracle::delta(l);
            const cplx lhs = zeta(ctx, Branch::Plus, l) - std::exp(-I * l) * zeta(ctx, Branch::Minus, l);
            worst = std::max(worst, std::abs(lhs - qd) / (1.0 + std::abs(qd)));
        }
    }
    return {worst <= 1e-10, "worst relative residual " + sci(worst) + " over 150 points (tol 1e-10)"};
}

Outcome solution_validity() {
    const std::vector<double> times{0.01, 0.05, 0.1};
    double repro = 0.0, bnd = 0.0, slope = 0.0, pde = 0.0;
    for (const Case& c : kdv_cases) {
        const InitialDatum f = builtin_datum(c.name);
        const bool fi = c.problem == ProblemId::FiniteIntervalKdV;
        SolutionQuery q;
        q.problem = c.problem;
        q.datum = f;
        q.contour = contour_for(f);

        q.x_grid = fi ? grid(0.05, 0.05, 19) : grid(0.1, 0.1, 50);
        q.t_grid = {0.0};
        const SolutionField init = solve_utm(q);
        for (std::size_t i = 0; i < q.x_grid.size(); ++i)
            repro = std::max(repro, std::abs(init.at(i, 0) - c.exact(q.x_grid[i])));

        const double h = 0.01;
        q.x_grid = fi ? std::vector<double>{0.0, 1.0 - 4 * h, 1.0 - 3 * h, 1.0 - 2 * h, 1.0 - h, 1.0}
                      : std::vector<double>{0.0};
        q.t_grid = times;
        const SolutionField b = solve_utm(q);
        for (std::size_t j = 0; j < times.size(); ++j) {
            bnd = std::max(bnd, std::abs(b.at(0, j)));
            if (!fi) continue;
            std::vector<cplx> tail;
            for (std::size_t i = 1; i < q.x_grid.size(); ++i) tail.push_back(b.at(i, j));
            bnd = std::max(bnd, std::abs(tail.back()));
            slope = std::max(slope, std::abs(right_derivative(tail, h)));
        }

        const double hx = 0.02, ht = 0.001;
        q.x_grid = fi ? grid(0.2, hx, 31) : grid(0.5, hx, 126);
        q.t_grid = grid(0.05, ht, fi ? 51 : 151);
        pde = std::max(pde, residual_check(solve_utm(q), hx, ht).max_residual);
    }
    const bool ok = repro <= 1e-5 && bnd <= 1e-6 && slope <= 1e-4 && pde <= 5e-3;
    return {ok, "t=0 " + sci(repro) + ", boundary " + sci(bnd) + ", q_x(1,t) " + sci(slope) + ", PDE residual " +
                    sci(pde)};
}

Outcome deformation_invariance() {
    double spread = 0.0;
    for (const Case& c : kdv_cases) {
        const InitialDatum f = builtin_datum(c.name);
        SolutionQuery q;
        q.problem = c.problem;
        q.datum = f;
        q.x_grid = c.problem == ProblemId::FiniteIntervalKdV ? std::vector<double>{0.1, 0.5, 0.9}
                                                             : std::vector<double>{0.3, 1.5, 4.0};
        q.t_grid = {0.01, 0.1, 0.5};
        std::vector<cplx> ref;
        for (double R : {40.0, 80.0})
            for (double d : {0.0, pi / 48.0, pi / 24.0}) {
                q.contour = contour_for(f, R);
                q.delta = d;
                const SolutionField s = solve_utm(q);
                if (ref.empty()) ref = s.values;
                for (std::size_t n = 0; n < ref.size(); ++n) spread = std::max(spread, std::abs(s.values[n] - ref[n]));
            }
    }
    return {spread <= 1e-7, "max spread over delta x R " + sci(spread) + " (tol 1e-7)"};
}

Outcome augmented_eigenfunctions() {
    double eig = 0.0, typeII = 0.0, diag = 0.0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const Case& c : kdv_cases) {
        const InitialDatum f = builtin_datum(c.name);
        AugOptions o;
        o.contour = contour_for(f);
        const TransformPair pair = make_transform_pair(c.problem, o.contour);
        for (Branch b : {Branch::Plus, Branch::Minus}) {
            const ContourPath& path = b == Branch::Plus ? pair.gamma_plus : pair.gamma_minus;
            for (const auto& seg : path.segments)
                for (int k = 0; k < 4; ++k)
                    eig = std::max(eig, std::abs(eigen_relation_residual(c.problem, f, piece_point(seg, u(rng)), b)));
            for (double x : ten_points(c.problem))
                typeII = std::max(typeII, std::abs(typeII_vanishing(c.problem, f, b, x, o).value));
        }
        for (double x : ten_points(c.problem)) {
            const DiagonalisedInverse d = diagonalised_inverse_check(c.problem, f, x, o);
            diag = std::max({diag, std::abs(d.lhs - d.rhs), std::abs(d.rhs - c.exact(x))});
        }
    }
    const bool ok = eig <= 1e-9 && typeII <= 1e-6 && diag <= 1e-5;
    return {ok, "eigen relation " + sci(eig) + ", type II " + sci(typeII) + ", diagonalised inverse " + sci(diag)};
}

Outcome typeI_probe() {
    const std::vector<double> radii{20.0, 40.0, 80.0, 160.0};
    const InitialDatum h = builtin_datum("hl_exp1");
    AugOptions o;
    o.contour = contour_for(h);
    const auto g = typeI_failure_probe(ProblemId::HalfLineKdV, h, std::nullopt, 0.3, radii, o);
    bool growth = true;
    for (std::size_t i = 2; i < g.size(); ++i) growth = growth && g[i] >= g[i - 1];

    double p2 = 0.0, p3 = 0.0;
    for (double x : {0.3, 0.5, 0.7}) {
        for (double v : typeI_failure_probe(ProblemId::FiniteIntervalKdV, builtin_datum("fi_poly2"), Branch::Plus, x, radii))
            p2 = std::max(p2, v);
        for (double v : typeI_failure_probe(ProblemId::FiniteIntervalKdV, builtin_datum("fi_poly3"), Branch::Plus, x, radii))
            p3 = std::max(p3, v);
    }
    const double fxx0 = std::abs(boundary_traces(builtin_datum("fi_poly2")).fxx0);
    std::string d = "hl_exp1 magnitudes";
    for (double v : g) d += " " + sci(v);
    d += growth ? " (non-decreasing)" : " (DECREASE)";
    d += "; fi_poly2 branch + max " + sci(p2) + " (tol 1e-8)";
    Outcome out{growth && p2 <= 1e-8, d};
    if (growth && p2 > 1e-8 && fxx0 > 0.0 && p3 <= 1e-8) {
        // The branch-+ remainder is −(i/2π)f″(0) + (λ/2π)f′(0); fi_poly2 = x²(1−x)³ has f″(0) = 2,
        // so the remainder is the constant −i/π and the probe cannot vanish. x³(1−x)² has both
        // traces zero and does.
        out.known = true;
        out.detail += "; fi_poly2 has f''(0) = " + sci(fxx0) +
                      " so its branch + remainder is a nonzero constant; fi_poly3 = x^3(1-x)^2 with f'(0) = f''(0) = 0 gives " +
                      sci(p3);
    }
    return out;
}

Outcome negative_control() {
    VerifyConfig cfg;
    cfg.problem = ProblemId::HalfLineKdV;
    cfg.datum = builtin_datum("hl_exp1");
    cfg.contour = contour_for(cfg.datum);
    cfg.negative_control = true;
    const auto checks = run_suite("augeig", cfg);
    double mag = 0.0;
    bool reported = false, others = true;
    for (const auto& r : checks) {
        if (r.check_id == "augeig.typeII_vanishing_below_origin") {
            mag = r.magnitude;
            reported = r.expected_failure && !r.pass;
        } else if (r.asserted) {
            others = others && r.pass;
        }
    }
    const bool ok = mag > 1e-3 && reported && !all_passed(checks) && others;
    return {ok, "below-origin integral " + sci(mag) + (reported ? ", reported as designed failure" : ", NOT reported") +
                    (others ? "" : ", other checks failed")};
}

Outcome zeros_of_delta() {
    const double R = 40.0;
    const auto zs = find_zeros(R);
    int bad = 0;
    double resid = 0.0, rot = 0.0;
    for (const auto& z : zs) {
        const cplx l = z.location;
        const bool origin = std::abs(l) < 1e-6 && z.multiplicity == 2;
        const bool sector = (l * l * l).imag() > 0.0 && std::abs(l) > 1.0 && z.multiplicity == 1;
        if (!origin && !sector) ++bad;
        if (origin) continue;
        resid = std::max(resid, std::abs(oracle::delta(l)) / std::exp(std::abs(l)));
        double best = INFINITY;
        for (const auto& w : zs) best = std::min(best, std::abs(w.location - alpha * l));
        rot = std::max(rot, best);
    }
    const Box box{-R, R, -R, R};
    const ZeroCount total = count_zeros(box);
    int refined = 0;
    for (const auto& z : find_zeros_in_box(total.box)) refined += z.multiplicity;
    const bool ok = bad == 0 && total.count == refined && rot <= 1e-8 && resid <= 1e-12;
    return {ok, std::to_string(zs.size()) + " zeros with |lambda| <= 40, " + std::to_string(bad) +
                    " misplaced, winding count " + std::to_string(total.count) + " vs refined " +
                    std::to_string(refined) + ", rotation " + sci(rot) + ", scaled residual " + sci(resid)};
}

Outcome heat_baseline() {
    const InitialDatum f = builtin_datum("heat_exp");
    auto sine = [](const std::function<double(double)>& g, double l) {
        return oracle::integrate([&](double x) { return oracle::cd(std::sin(l * x) * g(x)); }, 0.0, 60.0).real() /
               (2 * double(oracle::pi_l));
    };
    double eig = 0.0;
    for (double l : {0.5, 1.0, 2.0, 5.0}) {
        eig = std::max(eig, generalized_eig_check(f, l));
        // −f″ = (2 − x)e^{−x} for f = x e^{−x}.
        const double lhs = sine([](double x) { return (2.0 - x) * std::exp(-x); }, l);
        eig = std::max(eig, std::abs(lhs - l * l * sine(oracle::hl_exp1, l)));
        eig = std::max(eig, std::abs(sine_transform(f, l).real() - sine(oracle::hl_exp1, l)));
    }
    double diff = 0.0;
    for (double x : grid(0.1, 0.1, 40))
        for (double t : {0.01, 0.1, 0.5})
            diff = std::max(diff, std::abs(solve_heat_sine(f, x, t) - oracle::heat_images(oracle::hl_exp1, x, t)));
    return {eig <= 1e-10 && diff <= 1e-6, "eigen residual " + sci(eig) + ", image-method gap " + sci(diff)};
}

std::string run_cli(const std::string& args, int& status) {
    const std::string cmd = std::string(UTM_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    if (!p) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    status = pclose(p);
    return out;
}

Outcome determinism() {
    const std::vector<std::string> runs{
        "solve --problem fi --datum fi_poly1 --x-grid 9 --t 0,0.05",
        "solve --problem hl --datum hl_exp2 --x 0.5,2 --t 0.1",
        "transform --problem fi --datum fi_poly2 --R 30",
        "verify --problem fi --datum fi_poly1 --suite transform --seed 17",
        "zeros --radius 20",
    };
    int same = 0;
    for (const auto& r : runs) {
        int s1 = 0, s2 = 0;
        const std::string a = run_cli(r, s1), b = run_cli(r, s2);
        if (s1 == 0 && s2 == 0 && !a.empty() && a == b) ++same;
    }
    return {same == int(runs.size()),
            std::to_string(same) + "/" + std::to_string(runs.size()) + " commands byte-identical across two runs"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"inversion", inversion},
        {"algebraic identity", algebraic_identity},
        {"solution validity", solution_validity},
        {"contour deformation invariance", deformation_invariance},
        {"augmented eigenfunctions", augmented_eigenfunctions},
        {"type I failure probe", typeI_probe},
        {"negative control", negative_control},
        {"zeros of Delta", zeros_of_delta},
        {"heat baseline", heat_baseline},
        {"determinism", determinism},
    };
    int unexpected = 0, known = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].first << ": " << o.detail;
        if (!o.pass && o.known) std::cout << " [known failure]";
        std::cout << std::endl;
        if (!o.pass) (o.known ? known : unexpected)++;
    }
    std::cout << criteria.size() - unexpected - known << " passed, " << known << " known failure(s), " << unexpected
              << " unexpected failure(s)" << std::endl;
    return unexpected == 0 ? 0 : 1;
}
