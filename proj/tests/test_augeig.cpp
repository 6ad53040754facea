#include <doctest.h>

#include "oracles.hpp"
#include "utm/augeig.hpp"

using namespace utm;

TEST_SUITE("augeig") {
    TEST_CASE("the spatial operator") {
        const InitialDatum s = apply_S(builtin_datum("hl_exp1"));
        for (double x : {0.0, 0.5, 2.0}) CHECK(std::abs(s.value(x) - I * (3.0 - x) * std::exp(-x)) <= 1e-14);
        const InitialDatum p = apply_S(builtin_datum("fi_poly1"));
        for (double x : {0.1, 0.9}) CHECK(std::abs(p.value(x) - 6.0 * I) <= 1e-13);
        CHECK(apply_S(builtin_datum("fi_zero")).value(0.4) == cplx(0.0));
    }

    TEST_CASE("boundary traces") {
        const BoundaryTraces b = boundary_traces(builtin_datum("fi_poly2"));
        CHECK(std::abs(b.fx0) <= 1e-15);
        CHECK(std::abs(b.fxx0 - 2.0) <= 1e-13);
        CHECK(std::abs(b.fxx1) <= 1e-13);
        const BoundaryTraces h = boundary_traces(builtin_datum("hl_exp1"));
        CHECK(std::abs(h.fx0 - 1.0) <= 1e-15);
        CHECK(std::abs(h.fxx0 + 2.0) <= 1e-15);
    }

    TEST_CASE("remainder family") {
        CHECK_THROWS_AS(remainder_family(ProblemId::HalfLineHeat), Error);
        const RemainderFamily fi = remainder_family(ProblemId::FiniteIntervalKdV);
        const BoundaryTraces b{1.0, 2.0, 3.0};
        const cplx l(2.0, 1.0);
        CHECK(std::abs(fi.remainder(Branch::Plus, l, b) - (-I * 2.0 + l * 1.0) / (2 * pi)) <= 1e-15);
        CHECK(std::abs(fi.remainder(Branch::Minus, l, b) + std::exp(-I * l) * I * 3.0 / (2 * pi)) <= 1e-15);
        // Polynomial in λ (times e^{−iλ}): the ∂/∂λ̄ difference quotient vanishes.
        for (Branch br : {Branch::Plus, Branch::Minus}) {
            const double h = 1e-6;
            const cplx dbar = 0.5 * ((fi.remainder(br, l + h, b) - fi.remainder(br, l - h, b)) / (2 * h) +
                                     I * (fi.remainder(br, l + I * h, b) - fi.remainder(br, l - I * h, b)) / (2 * h));
            CHECK(std::abs(dbar) <= 1e-8);
        }
        CHECK(RemainderFamily::z(l) == l * l * l);
    }

    TEST_CASE("augmented eigen relation") {
        for (Branch br : {Branch::Plus, Branch::Minus}) {
            CHECK(std::abs(eigen_relation_residual(ProblemId::HalfLineKdV, builtin_datum("hl_exp1"), cplx(0.0, 0.3), br)) <=
                  1e-10);
            CHECK(std::abs(eigen_relation_residual(ProblemId::FiniteIntervalKdV, builtin_datum("fi_poly2"),
                                                   cplx(4.0, 2.5), br)) <= 1e-10);
        }
        CHECK(std::abs(eigen_relation_residual(ProblemId::HalfLineKdV, builtin_datum("hl_exp1"), cplx(3.0, -2.0),
                                               Branch::Minus, ForwardMode::SpectralRatio)) <= 1e-10);
    }

    TEST_CASE("type II remainders integrate to zero") {
        for (Branch br : {Branch::Plus, Branch::Minus}) {
            const auto r = typeII_vanishing(ProblemId::FiniteIntervalKdV, builtin_datum("fi_poly1"), br, 0.5);
            CHECK(std::abs(r.value) <= 1e-8);
            CHECK(r.converged);
            const auto h = typeII_vanishing(ProblemId::HalfLineKdV, builtin_datum("hl_exp2"), br, 0.7);
            CHECK(std::abs(h.value) <= 1e-8);
        }
    }

    TEST_CASE("detour below the origin picks up the residue") {
        AugOptions o;
        o.indent_below = true;
        const auto r = typeII_vanishing(ProblemId::HalfLineKdV, builtin_datum("hl_exp1"), Branch::Minus, 0.5, o);
        CHECK(std::abs(r.value) > 1e-2);
    }

    TEST_CASE("type I probe") {
        const std::vector<double> radii{10.0, 20.0, 40.0};
        for (double v : typeI_failure_probe(ProblemId::FiniteIntervalKdV, builtin_datum("fi_zero"), std::nullopt, 0.5, radii))
            CHECK(v == 0.0);
        for (double v : typeI_failure_probe(ProblemId::FiniteIntervalKdV, builtin_datum("fi_poly3"), Branch::Plus, 0.5, radii))
            CHECK(v <= 1e-8);
        const std::vector<double> doubling{20.0, 40.0, 80.0, 160.0};
        const auto g = typeI_failure_probe(ProblemId::HalfLineKdV, builtin_datum("hl_exp1"), std::nullopt, 0.3, doubling);
        REQUIRE(g.size() == 4);
        for (std::size_t i = 2; i < g.size(); ++i) CHECK(g[i] >= g[i - 1]);
        // Γ⁺ closes through the arc π/3 → 2π/3 and Γ⁻ is the real segment, with R⁻ = −R⁺.
        const double x = 0.3, Rr = 40.0;
        auto r = [](cplx l) { return -I / pi - l / (2 * pi); };
        const cplx line = oracle::integrate([&](double s) { return -std::exp(I * s * x) * r(s); }, -Rr, Rr);
        const cplx arc = oracle::integrate([&](double th) {
            const cplx l = std::polar(Rr, th);
            return std::exp(I * l * x) * r(l) * I * l;
        }, pi / 3, 2 * pi / 3);
        CHECK(std::abs(std::abs(line - arc) - g[1]) <= 1e-8 * g[1]);
    }

    TEST_CASE("diagonalised inverse") {
        const auto h = diagonalised_inverse_check(ProblemId::HalfLineKdV, builtin_datum("hl_exp1"), 0.7);
        CHECK(std::abs(h.lhs - h.rhs) <= 1e-8);
        CHECK(std::abs(h.rhs - 0.7 * std::exp(-0.7)) <= 1e-8);
        const auto f = diagonalised_inverse_check(ProblemId::FiniteIntervalKdV, builtin_datum("fi_poly1"), 0.5);
        CHECK(std::abs(f.lhs - f.rhs) <= 1e-8);
        CHECK(std::abs(f.rhs - 0.125) <= 1e-8);
    }

    TEST_CASE("missing derivatives are reported") {
        InitialDatum::Derivatives d{[](double x) { return cplx(x * (1 - x) * (1 - x)); }};
        const InitialDatum f = InitialDatum::from_functions(Domain::Interval, d, 0.0, "values_only");
        CHECK_THROWS_AS(apply_S(f), Error);
        CHECK_THROWS_AS(boundary_traces(f), Error);
    }
}
