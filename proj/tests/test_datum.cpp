#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "utm/datum.hpp"

using namespace utm;

TEST_SUITE("datum") {
    TEST_CASE("compatibility reports") {
        const auto a = check_compatibility(builtin_datum("fi_poly1"), ProblemId::FiniteIntervalKdV, 1e-12);
        CHECK(a.passed);
        CHECK(a.satisfied.size() == 3);
        CHECK(check_compatibility(builtin_datum("hl_exp1"), ProblemId::HalfLineKdV, 1e-12).passed);
        const auto s = check_compatibility(builtin_datum("fi_sin"), ProblemId::FiniteIntervalKdV, 1e-10);
        CHECK_FALSE(s.passed);
        double worst = 0.0;
        for (const auto& [label, r] : s.satisfied) worst = std::max(worst, r);
        CHECK(worst == doctest::Approx(pi).epsilon(1e-12));
        CHECK_THROWS_AS(check_compatibility(builtin_datum("hl_exp1"), ProblemId::FiniteIntervalKdV, 1e-10), Error);
    }

    TEST_CASE("built-in transforms at the origin") {
        CHECK(std::abs(builtin_datum("hl_exp1").closed_form_transform(0.0) - 1.0) < 1e-15);
        CHECK(std::abs(builtin_datum("fi_poly1").closed_form_transform(0.0) - 1.0 / 12.0) < 1e-15);
        CHECK(builtin_datum("hl_exp1").value(0.0) == cplx(0.0));
        CHECK(std::abs(builtin_datum("hl_exp1").closed_form_transform(cplx(0.0, 0.5)) - 4.0) < 1e-14);
        CHECK(std::abs(builtin_datum("fi_one").closed_form_transform(0.0) - 1.0) < 1e-15);
    }

    TEST_CASE("values agree with hand-coded data") {
        for (double x : {0.1, 0.37, 0.8}) {
            CHECK(std::abs(builtin_datum("fi_poly1").value(x) - oracle::fi_poly1(x)) < 1e-15);
            CHECK(std::abs(builtin_datum("fi_poly2").value(x) - oracle::fi_poly2(x)) < 1e-15);
            CHECK(std::abs(builtin_datum("hl_exp1").value(5 * x) - oracle::hl_exp1(5 * x)) < 1e-15);
            CHECK(std::abs(builtin_datum("hl_exp2").value(5 * x) - oracle::hl_exp2(5 * x)) < 1e-15);
        }
    }

    TEST_CASE("analytic derivatives match central differences") {
        const double h = 1e-5;
        for (const auto& name : builtin_names()) {
            const InitialDatum f = builtin_datum(name);
            const double end = f.domain() == Domain::Interval ? 1.0 : 10.0;
            double worst = 0.0;
            for (int k = 1; k <= 3; ++k) {
                for (int i = 0; i < 50; ++i) {
                    const double x = 0.01 * end + 0.98 * end * i / 49.0;
                    const cplx num = (f.derivative(k - 1, x + h) - f.derivative(k - 1, x - h)) / (2 * h);
                    worst = std::max(worst, std::abs(num - f.derivative(k, x)));
                }
            }
            CHECK_MESSAGE(worst <= 1e-6, name);
            CHECK(f.derivative(0, 0.3) == f.value(0.3));
        }
    }

    TEST_CASE("half-line data satisfy the decay bound") {
        for (const auto& name : builtin_names()) {
            const InitialDatum f = builtin_datum(name);
            if (f.domain() != Domain::HalfLine) continue;
            CHECK_MESSAGE(check_decay_bound(f).passed, name);
            CHECK(f.decay_rate() == 0.5);
        }
    }

    TEST_CASE("closed forms agree with independent quadrature") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> re(-15.0, 15.0), im(-1.5, 0.4);
        for (const auto& name : builtin_names()) {
            const InitialDatum f = builtin_datum(name);
            if (!f.has_closed_form()) continue;
            const double b = f.domain() == Domain::Interval ? 1.0 : 90.0;
            for (int i = 0; i < 20; ++i) {
                const cplx l(re(rng), im(rng));
                const cplx a = f.closed_form_transform(l);
                const cplx o = oracle::fourier([&](double x) { return f.value(x).real(); }, l, b);
                if (std::abs(f.value(0.3).imag()) > 0.0) continue;
                CHECK_MESSAGE(std::abs(a - o) <= 1e-10 * std::max(1.0, std::abs(a)), name);
            }
        }
    }

    TEST_CASE("unknown names are rejected") {
        CHECK_THROWS_AS(builtin_datum("nope"), Error);
        try {
            builtin_datum("nope");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnknownDatum);
        }
    }

    TEST_CASE("tabulated data interpolate") {
        const std::string path = "datum_table_test.txt";
        {
            std::ofstream os(path);
            os << "# x f f' f'' f'''\n";
            for (int i = 0; i <= 200; ++i) {
                const double x = i / 200.0;
                os << format_double(x) << ", " << format_double(oracle::fi_poly1(x)) << " "
                   << format_double(1 - 4 * x + 3 * x * x) << " " << format_double(6 * x - 4) << " 6\n";
            }
        }
        const InitialDatum f = InitialDatum::from_table(Domain::Interval, Table::load(path), 0.0, "table");
        std::remove(path.c_str());
        CHECK(std::abs(f.value(0.3337) - oracle::fi_poly1(0.3337)) < 1e-9);
        CHECK(std::abs(f.derivative(1, 0.71) - (1 - 4 * 0.71 + 3 * 0.71 * 0.71)) < 1e-6);
        CHECK(check_compatibility(f, ProblemId::FiniteIntervalKdV, 1e-12).passed);
        CHECK_THROWS_AS(Table::load("does_not_exist.txt"), Error);
    }

    TEST_CASE("linear combinations stay closed-form") {
        const InitialDatum a = builtin_datum("fi_poly1"), b = builtin_datum("fi_poly2");
        const InitialDatum c = linear_combination({{2.0, a}, {-1.0, b}});
        CHECK(c.has_closed_form());
        const cplx l(3.0, -1.0);
        CHECK(std::abs(c.closed_form_transform(l) - (2.0 * a.closed_form_transform(l) - b.closed_form_transform(l))) <
              1e-14);
    }
}
