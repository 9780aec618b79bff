#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "openlab/boundstate.hpp"
#include "openlab/errors.hpp"
#include "openlab/liouville.hpp"

using namespace openlab;

TEST_CASE("adiabatic q") {
    CHECK(adiabatic_q(p2(0.0, 0.3)) == doctest::Approx(0.3));
    EnvParams p = p2(0.0, 1.0);
    p.m = 2.0;
    p.nu = 0.25;
    CHECK(adiabatic_q(p) == doctest::Approx(2.0));
    CHECK_THROWS_AS(adiabatic_q(p2()), DomainError);
}

TEST_CASE("regions") {
    CHECK(region_of(-1.0, 0.5) == Region::A);
    CHECK(region_of(1.0, 0.5) == Region::C);
    CHECK(region_of(0.0, 0.5) == Region::B);
    CHECK(region_of(0.0, -0.5) == Region::D);
}

TEST_CASE("bound state closed forms") {
    const EnvParams p = p2(0.0, 0.3);
    const BoundStateAC b = bound_state(p);
    CHECK(b.q == doctest::Approx(0.3));
    CHECK(b.window == doctest::Approx(0.25 * decoherence_length(p)));
    for (double x = -3.0; x <= 3.0; x += 0.25) CHECK(std::abs(b(x, 0.0) - std::exp(-0.3 * std::abs(x))) < 1e-15);
    for (double x : {0.4, 1.5})
        for (double xd : {-0.6, 0.2, 0.7}) CHECK(std::abs(b.rho_A(-x, -xd) - b.rho_C(x, xd)) < 1e-15);

    // region A value against a direct evaluation of the P2, q = 1 state
    const BoundStateAC b1 = bound_state(p, 1.0);
    const cplx expect = std::pow(cplx{1.0, 0.25}, 2) * std::exp(cplx{-1.0 - 0.25 / 3.2, -0.375});
    CHECK(std::abs(b1(-1.0, 0.5) - expect) < 1e-14);

    CHECK_THROWS_AS(bound_state(p2(0.1, 0.3)), UnsupportedConfiguration);
    CHECK_THROWS_AS(bound_state(p, -1.0), DomainError);
    CHECK_THROWS_AS(b(0.0, 0.9 * decoherence_length(p)), DomainError);
}

TEST_CASE("continuation is continuous across x+ = 0 and hermitian") {
    const BoundStateAC b = bound_state(p2(0.0, 0.3));
    for (double xd : {0.05, 0.2}) {
        const double x0 = -xd / 2;  // x+ = 0, x- = -xd
        const cplx inA = b(x0 - 1e-9, xd), inB = b(x0 + 1e-9, xd);
        CHECK(std::abs(inA - inB) < 1e-8);
        CHECK(std::abs(b(0.01, xd) - std::conj(b(0.01, -xd))) < 1e-12);
    }
}

TEST_CASE("consistency residual extrapolates to zero") {
    const EnvParams p = p2(0.0, 0.3);
    const ConsistencyReport r = consistency_residual(bound_state(p).as_state(), p);
    CHECK(r.relative() < 1e-6);
    REQUIRE(r.raw.size() == 5);
    // raw residuals fall like h^2
    CHECK(std::abs(r.raw[3]) / std::abs(r.raw[4]) == doctest::Approx(4.0).epsilon(0.05));
    const ConsistencyReport s = symmetric_matching_defect(bound_state(p).as_state(), p);
    CHECK(s.relative() < 1e-6);
}

TEST_CASE("consistency residual is lambda independent for reflection symmetric states") {
    const EnvParams p = p2(0.0, 0.3), p2l = p2(0.0, 0.6);
    const StateFn rho = bound_state(p).as_state();
    const ConsistencyReport a = consistency_residual(rho, p), b = consistency_residual(rho, p2l);
    CHECK(std::abs(a.value - b.value) < 1e-10);
}

TEST_CASE("closed dynamics: textbook jump condition") {
    EnvParams p;
    p.lambda = 0.3;
    auto jump = [&](double q) {
        const StateFn s = [q](double x, double xd) {
            return cplx{std::exp(-q * std::abs(x + xd / 2) - q * std::abs(x - xd / 2))};
        };
        return jump_residuals(s, p, 1e-4, 1.0);
    };
    CHECK(jump(0.3).on_plus < 1e-6);
    CHECK(jump(0.3).on_minus < 1e-6);
    CHECK(jump(0.4).on_plus > 1e-2);
}

TEST_CASE("jump residuals vanish without a delta") {
    const EnvParams p = p2();
    const JumpResiduals j = jump_residuals(tunneling(p, 0.5, 0.0), p, 1e-3, 1.0);
    CHECK(j.on_plus < 1e-5);
    CHECK(j.on_minus < 1e-5);
}

TEST_CASE("A|B jump residual of the continuation refines as h^2") {
    const EnvParams p = p2(0.0, 0.3);
    const StateFn s = bound_state(p).as_state();
    const double r1 = jump_residuals(s, p, 2e-3).on_plus, r2 = jump_residuals(s, p, 1e-3).on_plus;
    CHECK(r2 < r1);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("master equation holds inside A and C") {
    EnvParams p = p2(0.0, 0.3);
    const StateFn s = bound_state(p).as_state();
    p.lambda = 0.0;  // delta lines are not part of the region interiors
    auto res = [&](std::size_t n) {
        const Grid2D g = Grid2D::make(-4, 0, n, 1, n);
        const Field2D f = sample(g, [&](double x, double xd) { return s(x - 1.0, xd); });
        return eigen_residual(f, p, 0.0, 2);
    };
    const double r1 = res(33), r2 = res(65);
    CHECK(r1 / r2 > 3.5);
}
