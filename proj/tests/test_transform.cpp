#include <doctest.h>

#include "oracles.hpp"
#include "utm/transform.hpp"

using namespace utm;

namespace {

cplx invert_at(const TransformPair& pair, const InitialDatum& f, double x) {
    const SpectralData F = spectral_data(pair, f, std::max(1.0, x));
    return inverse(pair, F, x).value;
}

}  // namespace

TEST_SUITE("transform") {
    TEST_CASE("inversion examples") {
        const TransformPair fi = make_transform_pair(ProblemId::FiniteIntervalKdV);
        CHECK(std::abs(invert_at(fi, builtin_datum("fi_poly1"), 0.5) - 0.125) <= 1e-8);
        ContourOptions o;
        o.epsilon = 1.0;
        const TransformPair hl = make_transform_pair(ProblemId::HalfLineKdV, o);
        CHECK(std::abs(invert_at(hl, builtin_datum("hl_exp1"), 1.0) - std::exp(-1.0)) <= 1e-8);
        CHECK(std::abs(invert_at(fi, builtin_datum("fi_zero"), 0.3)) == 0.0);
    }

    TEST_CASE("inversion report on grids") {
        const TransformPair fi = make_transform_pair(ProblemId::FiniteIntervalKdV);
        std::vector<double> grid;
        for (int i = 1; i < 20; ++i) grid.push_back(i / 20.0);
        for (const char* name : {"fi_poly1", "fi_poly2", "fi_poly3"}) {
            const InversionReport r = verify_inversion(fi, builtin_datum(name), grid, 1e-8);
            CHECK_MESSAGE(r.passed, name);
            CHECK(r.sup_error <= 1e-8);
        }
        CHECK_THROWS_AS(verify_inversion(fi, builtin_datum("fi_sin"), grid, 1e-8), Error);
        CHECK_THROWS_AS(verify_inversion(fi, builtin_datum("fi_one"), grid, 1e-8), Error);
    }

    TEST_CASE("linearity") {
        const TransformPair fi = make_transform_pair(ProblemId::FiniteIntervalKdV);
        const InitialDatum f = builtin_datum("fi_poly1"), g = builtin_datum("fi_poly3");
        const InitialDatum h = linear_combination({{2.0, f}, {cplx(0.0, -3.0), g}});
        for (cplx l : {cplx(3.0, 2.0), cplx(-5.0, -4.0)}) {
            for (Branch b : {Branch::Plus, Branch::Minus}) {
                const cplx lhs = forward(fi, h, l, b);
                const cplx rhs = 2.0 * forward(fi, f, l, b) - 3.0 * I * forward(fi, g, l, b);
                CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
            }
        }
    }

    TEST_CASE("kernel quadrature agrees with the spectral ratio") {
        const TransformPair fi = make_transform_pair(ProblemId::FiniteIntervalKdV);
        const TransformPair hl = make_transform_pair(ProblemId::HalfLineKdV);
        const InitialDatum f = builtin_datum("fi_poly2"), g = builtin_datum("hl_exp2");
        for (cplx l : {cplx(3.0, 2.0), cplx(-4.0, 1.0), cplx(2.5, -3.0)}) {
            const cplx a = forward(fi, f, l, Branch::Plus, ForwardMode::SpectralRatio);
            const cplx b = forward(fi, f, l, Branch::Plus, ForwardMode::KernelQuadrature);
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
        }
        for (cplx l : {cplx(0.3, 0.1), cplx(-0.2, 0.05)}) {
            const cplx a = forward(hl, g, l, Branch::Plus, ForwardMode::SpectralRatio);
            const cplx b = forward(hl, g, l, Branch::Plus, ForwardMode::KernelQuadrature);
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
        }
        // The half-line Γ⁻ transform is q̂₀/2π.
        const cplx l(1.5, -0.5);
        CHECK(std::abs(2 * pi * forward(hl, g, l, Branch::Minus) - oracle::fourier(oracle::hl_exp2, l, 60.0)) <= 1e-12);
        CHECK_THROWS_AS(forward(fi, f, 0.0, Branch::Plus), Error);
    }

    TEST_CASE("deformation onto the real line") {
        const TransformPair fi = make_transform_pair(ProblemId::FiniteIntervalKdV);
        const GammaInversion g = gamma_inversion(fi, builtin_datum("fi_poly1"), 0.4);
        CHECK(std::abs(g.ratio_form - g.exact) <= 1e-8);
        CHECK(std::abs(g.fourier_form - g.exact) <= 1e-8);
        const TransformPair hl = make_transform_pair(ProblemId::HalfLineKdV);
        const GammaInversion h = gamma_inversion(hl, builtin_datum("hl_exp1"), 0.8);
        CHECK(std::abs(h.ratio_form - h.exact) <= 1e-8);
        CHECK(std::abs(h.fourier_form - h.exact) <= 1e-8);
    }

    TEST_CASE("heat problem has no contour pair") {
        CHECK_THROWS_AS(make_transform_pair(ProblemId::HalfLineHeat), Error);
    }
}
