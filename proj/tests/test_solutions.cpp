#include <cmath>

#include <doctest.h>

#include <ssflow/errors.hpp>
#include <ssflow/solutions.hpp>

#include "test_utils.hpp"

using namespace ssflow;
using ssflow_test::close;
using ssflow_test::error_code_of;
using ssflow_test::uniform;

TEST_CASE("PME Barenblatt, m=2 n=1")
{
    const auto prof = barenblatt_pme(2, 1, 1);
    const auto &params = std::get<PMEParams>(prof.params());
    CHECK(close(params.beta(), 1.0 / 3, 1e-15));
    CHECK(close(alpha_from(params), 1.0 / 3, 1e-15));
    REQUIRE(prof.support_end());
    CHECK(close(*prof.support_end(), std::sqrt(6.0), 1e-15));
    CHECK(prof.f(0) == 1);
    CHECK(close(prof.f(1), 5.0 / 6, 1e-15));
    CHECK(close(prof.fprime(1), -1.0 / 3, 1e-15));
    CHECK(close(prof.fsecond(1), -1.0 / 3, 1e-15));
    CHECK_FALSE(prof.evaluate(2.5));
    CHECK(error_code_of([&] { prof.f(2.5); }) == ErrorCode::OutsideSupport);
    CHECK(max_abs_residual(prof) < 1e-13);
}

TEST_CASE("PLE Barenblatt solves the first integral")
{
    const auto prof = barenblatt_ple(3, 1, 1);
    const auto &params = std::get<PLEParams>(prof.params());
    CHECK(close(params.beta(), 0.25, 1e-15));
    CHECK(close(*prof.support_end(), std::pow(6.0, 2.0 / 3), 1e-14));
    for (double eta : interior_points(prof, 40)) {
        const auto v = *prof.evaluate(eta);
        CHECK(std::abs(std::abs(v.fprime) * v.fprime + 0.25 * eta * v.f) < 1e-13);
    }
    CHECK(max_abs_residual(prof) < 1e-12);
    CHECK(max_abs_residual(barenblatt_ple(2.5, 3, 1)) < 1e-10);
    CHECK(error_code_of([] { barenblatt_ple(1.5, 4, 1); }) == ErrorCode::Domain);
    CHECK(error_code_of([] { barenblatt_pme(2, 1, 0); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("residuals of the explicit families (property)")
{
    for (int i = 0; i < 100; ++i) {
        const double m = uniform(1.2, 4);
        const double n = uniform(0.5, 5);
        CHECK(max_abs_residual(barenblatt_pme(m, n, uniform(0.5, 2)), 20) < 1e-9);
        const double p = uniform(2.2, 4);
        CHECK(max_abs_residual(barenblatt_ple(p, n, uniform(0.5, 2)), 20) < 1e-9);
    }
    for (double m : {1.5, 2.0, 3.0}) {
        CHECK(max_abs_residual(dipole_pme(m, 1, 1)) < 1e-9);
    }
    CHECK(max_abs_residual(dipole_derivative_ple(3, 1, 1)) < 1e-9);
    CHECK(max_abs_residual(dipole_derivative_ple(2.5, 1, 1)) < 1e-9);
    for (double n : {3.0, 4.0, 5.0, 6.5}) {
        CHECK(max_abs_residual(loewner_nirenberg_pme(n, 1)) < 1e-10);
        CHECK(max_abs_residual(loewner_nirenberg_pme(n, 0.3)) < 1e-9);
        CHECK(max_abs_residual(yamabe_ple(n, 1)) < 1e-10);
        CHECK(max_abs_residual(yamabe_ple(n, 2)) < 1e-9);
    }
}

TEST_CASE("dipoles")
{
    const auto d = dipole_pme(2, 1, 1);
    CHECK(close(std::get<PMEParams>(d.params()).beta(), 0.25, 1e-15));
    // f = eta^{1/2} (1 - eta^{3/2}/b)_+ here.
    REQUIRE(d.support_end());
    const double b = reduction_b(std::get<PMEParams>(d.params()));
    CHECK(close(*d.support_end(), std::pow(b, 2.0 / 3), 1e-14));

    const auto g = dipole_derivative_ple(3, 1, 1);
    CHECK(alpha_from(g.params()) == 0);
    REQUIRE(g.support_end());
    // f vanishes at the right end of the support, f' is the closed form.
    const double end = *g.support_end();
    CHECK(std::abs(g.f(end * (1 - 1e-9))) < 1e-8);
    CHECK(g.derivative_only());
    const double eta = 0.4 * end;
    const double h = 1e-4;
    CHECK(std::abs((g.f(eta + h) - g.f(eta - h)) / (2 * h) - g.fprime(eta)) < 1e-7);
}

TEST_CASE("Loewner-Nirenberg and Yamabe profiles")
{
    const auto ln = loewner_nirenberg_pme(3, 1);
    CHECK(close(ln.f(0), 1, 1e-15));
    CHECK(close(loewner_nirenberg_pme(4, 0.5).f(0), std::pow(0.5, -3), 1e-14));
    CHECK_FALSE(ln.support_end());
    CHECK(close(std::get<PMEParams>(ln.params()).m(), 0.2, 1e-15));

    const auto y = yamabe_ple(3, 1);
    CHECK(close(y.constants().at("C"), 5.1739792122684128, 1e-14));
    CHECK(close(y.f(0), 5.1739792122684128, 1e-14));
    CHECK(close(std::get<PLEParams>(y.params()).p(), 1.2, 1e-15));

    CHECK(error_code_of([] { loewner_nirenberg_pme(2, 1); }) == ErrorCode::Domain);
    CHECK(error_code_of([] { yamabe_ple(1.5, 1); }) == ErrorCode::Domain);
    CHECK(error_code_of([] { yamabe_ple(3, 0); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("derivatives agree with central differences at second order")
{
    for (const auto &prof : {barenblatt_pme(2, 1, 1), barenblatt_ple(3, 2, 1), loewner_nirenberg_pme(3, 1),
                             yamabe_ple(4, 1), dipole_pme(3, 1, 1)}) {
        const double eta = prof.support_end() ? 0.5 * *prof.support_end() : 0.7;
        double prev1 = 0;
        double prev2 = 0;
        for (double h : {1e-2, 5e-3, 2.5e-3}) {
            const double d1 = std::abs((prof.f(eta + h) - prof.f(eta - h)) / (2 * h) - prof.fprime(eta));
            const double d2 = std::abs((prof.fprime(eta + h) - prof.fprime(eta - h)) / (2 * h) - prof.fsecond(eta));
            if (prev1 > 1e-12) {
                CHECK(d1 / prev1 == doctest::Approx(0.25).epsilon(0.1));
            }
            if (prev2 > 1e-12) {
                CHECK(d2 / prev2 == doctest::Approx(0.25).epsilon(0.1));
            }
            prev1 = d1;
            prev2 = d2;
        }
    }
}

TEST_CASE("non-solutions leave a residual")
{
    const PMEParams params(2, 1, 1.0 / 3);
    // A constant is not a Type I solution unless alpha = 0.
    const auto c = power_law(params, 2, 0);
    CHECK(close(pme_residual(c, params, 0.5), 2.0 / 3, 1e-15));

    // Perturbing the Barenblatt constant k breaks the equation.
    auto form = barenblatt_pme(2, 1, 1).form();
    form.B *= 1.01;
    const ClosedFormProfile off(ProfileKind::PowerLaw, params, {}, form);
    CHECK(max_abs_residual(off) > 1e-3);

    CHECK(error_code_of([&] { pme_residual(ProfileValue{1, 0, 0}, 0, params); }) == ErrorCode::Domain);
    CHECK(error_code_of([&] { pme_residual(ProfileValue{0, 0, 0}, 1, params); }) == ErrorCode::OutsideSupport);
    CHECK(error_code_of([] { ple_residual(ProfileValue{1, 0, 0}, 1, PLEParams(3, 1, 0.2)); })
          == ErrorCode::SingularEvaluation);
}

TEST_CASE("self-similar solution and its mass")
{
    const auto prof = barenblatt_pme(2, 1, 1);
    const auto &params = prof.params();
    CHECK(close(selfsimilar_value(params, prof, 0, 1), 1, 1e-15));
    CHECK(close(selfsimilar_value(params, prof, 0, 8), 0.5, 1e-15));
    CHECK(selfsimilar_value(params, prof, 3, 1) == 0);
    CHECK(error_code_of([&] { selfsimilar_value(params, prof, 0, 0); }) == ErrorCode::Domain);

    const auto y = yamabe_ple(3, 1);
    CHECK(error_code_of([&] { selfsimilar_value(y.params(), y, 1, 0.5); }) == ErrorCode::InvalidParameter);
    CHECK(error_code_of([&] { selfsimilar_value(y.params(), y, 1, 2, 1.0); }) == ErrorCode::Domain);
    CHECK(close(selfsimilar_value(y.params(), y, 0, 0, 1.0), y.f(0), 1e-15));

    const double mass = 4 * std::sqrt(6.0) / 3;
    CHECK(close(radial_mass(prof, 1), mass, 1e-10));
    CHECK(close(radial_mass(prof, 2), mass, 1e-10));
    // Conservation in n = 3 as well.
    const auto p3 = barenblatt_pme(2, 3, 1);
    CHECK(close(radial_mass(p3, 1), radial_mass(p3, 5), 1e-9));
}

TEST_CASE("quadrature")
{
    CHECK(close(integrate_adaptive([](double x) { return x * x; }, 0, 3), 9, 1e-14));
    CHECK(close(integrate_adaptive([](double x) { return std::exp(-x); }, 0, INFINITY), 1, 1e-10));
}
