#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "openlab/errors.hpp"
#include "openlab/laplace.hpp"
#include <Eigen/Dense>

#include "openlab/liouville.hpp"

using namespace openlab;

TEST_CASE("inhomogeneous term") {
    BoundaryData bd;
    bd.rho0 = [](double) { return cplx{1.0}; };
    bd.rho1 = [](double) { return cplx{1.0}; };
    bd.drho0 = [](double) { return cplx{0.0}; };
    CHECK(std::abs(inhomogeneous_term(bd, p2(), 1.0, 0.0) - cplx{0.5}) < 1e-15);

    EnvParams closed = p2();
    closed.d2 = 0.0;
    closed.nu = 0.0;
    BoundaryData flat;
    flat.rho0 = [](double) { return cplx{2.0}; };
    flat.rho1 = [](double) { return cplx{0.3}; };
    for (double y : {-1.0, 0.5}) CHECK(std::abs(inhomogeneous_term(flat, closed, 1.0, y)) < 1e-9);

    // numerical rho0' when drho0 is absent
    BoundaryData g;
    g.rho0 = [](double y) { return std::exp(cplx{-y * y, 0.4 * y}); };
    g.rho1 = g.rho0;
    BoundaryData gd = g;
    gd.drho0 = [](double y) { return cplx{-2 * y, 0.4} * std::exp(cplx{-y * y, 0.4 * y}); };
    for (double y : {-0.8, 0.3}) CHECK(std::abs(inhomogeneous_term(g, p2(), 1.0, y) - inhomogeneous_term(gd, p2(), 1.0, y)) < 1e-9);
}

TEST_CASE("homogeneous boundary data gives phi times rho(0)") {
    const EnvParams p = p2();
    const double q = 0.9, Om = 0.2;
    const TunnelingState phi = tunneling(p, q, Om);
    BoundaryData bd;
    bd.rho0 = [](double) { return cplx{0.0}; };
    bd.rho1 = [](double) { return cplx{0.0}; };
    bd.drho0 = bd.rho0;
    const XdSolution s = solve_xd_ode(bd, p, q, Om, cplx{1.5, -0.5});
    for (double y : {-2.0, 0.0, 1.3}) CHECK(std::abs(s(y) - cplx{1.5, -0.5} * phi(0.0, y)) < 1e-14);
}

TEST_CASE("boundary data from phi and q phi is consistent") {
    const EnvParams p = p2();
    const double q = 0.9, Om = 0.2;
    const TunnelingState phi = tunneling(p, q, Om);
    BoundaryData bd;
    bd.rho0 = [&](double y) { return phi(0.0, y); };
    bd.rho1 = [&](double y) { return q * phi(0.0, y); };
    CHECK(bd.hermiticity_defect() < 1e-14);
    const XdSolution s = solve_xd_ode(bd, p, q, Om, 1.0);
    for (double y : {-1.5, 0.7, 2.0}) CHECK(std::abs(xd_ode_residual(s, y)) < 1e-7);
}

TEST_CASE("derivative-family oracle") {
    const EnvParams p = p2(0.1);
    const double q0 = 1.0, Om = tunneling_level(p, q0, 0) - 0.2, q = 1.7;
    const TunnelingState r0 = tunneling(p, q0, Om), r1 = tunneling(p, q0, Om, 1);
    BoundaryData bd;
    bd.rho0 = [&](double y) { return r1(0.0, y); };
    bd.rho1 = [&](double y) { return r0(0.0, y) + q0 * r1(0.0, y); };
    const XdSolution sol = solve_xd_ode(bd, p, q, Om, 1.0 / ((q - q0) * (q - q0)));
    for (double y : {-2.0, -0.7, 0.4, 1.5, 2.5}) {
        const cplx ex = r0(0.0, y) / ((q - q0) * (q - q0)) + r1(0.0, y) / (q - q0);
        CHECK(std::abs(sol(y) - ex) < 1e-8 * std::abs(ex));
        CHECK(std::abs(xd_ode_residual(sol, y)) < 1e-6 * std::abs(ex));
    }
}

TEST_CASE("polynomial reconstruction") {
    const EnvParams p = p2();
    const double q0 = 1.0, Om = 0.0;
    for (double x : {-1.0, 0.5})
        for (double xd : {-0.6, 1.1})
            CHECK(std::abs(polynomial_reconstruction({}, p, q0, Om, x, xd) - tunneling(p, q0, Om)(x, xd)) < 1e-15);

    const StateFn s = reconstruction_state({0.7}, p, q0, Om);
    for (double x : {-2.0, 0.0, 1.5}) CHECK(std::abs(s(x, 0.0) - (1 + 0.7 * x) * std::exp(x)) < 1e-12 * std::exp(x));

    // coefficients recovered by least squares over rho_{n,q0,Omega}
    const std::vector<double> kap{0.4, -0.3, 0.2};
    std::vector<cplx> target;
    std::vector<std::vector<cplx>> basis(4);
    for (double x : {-1.0, -0.2, 0.6, 1.3})
        for (double xd : {-1.2, 0.0, 0.5, 1.7}) {
            target.push_back(polynomial_reconstruction(kap, p, q0, Om, x, xd));
            for (int n = 0; n <= 3; ++n) basis[n].push_back(tunneling(p, q0, Om, n)(x, xd));
        }
    Eigen::MatrixXcd A(target.size(), 4);
    Eigen::VectorXcd b(target.size());
    for (std::size_t r = 0; r < target.size(); ++r) {
        b(r) = target[r];
        for (int n = 0; n <= 3; ++n) A(r, n) = basis[n][r];
    }
    const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
    const double expect[4] = {1.0, 0.4, -0.3 / 2, 0.2 / 6};
    for (int n = 0; n <= 3; ++n) CHECK(std::abs(c(n) - expect[n]) < 1e-10);
}

TEST_CASE("reconstruction is annihilated by L - Omega") {
    const EnvParams p = p2();
    const double q0 = 1.0, Om = 0.3;
    for (const std::vector<double>& k : {std::vector<double>{0.7}, std::vector<double>{0.2, -0.4, 0.1}}) {
        const StateFn s = reconstruction_state(k, p, q0, Om);
        const double r1 = eigen_residual(sample(Grid2D::make(-4, 4, 65, 4, 65), s), p, Om);
        const double r2 = eigen_residual(sample(Grid2D::make(-4, 4, 129, 4, 129), s), p, Om);
        CHECK(r1 / r2 > 3.5);
    }
}

TEST_CASE("reconstruction is linear in kappa") {
    const EnvParams p = p2();
    const cplx base = tunneling(p, 1.0, 0.0)(0.4, 0.9);
    const cplx a = polynomial_reconstruction({0.3, -0.2}, p, 1.0, 0.0, 0.4, 0.9) - base;
    const cplx b = polynomial_reconstruction({-0.1, 0.5}, p, 1.0, 0.0, 0.4, 0.9) - base;
    const cplx ab = polynomial_reconstruction({0.2, 0.3}, p, 1.0, 0.0, 0.4, 0.9) - base;
    CHECK(std::abs(ab - a - b) < 1e-14 * std::abs(ab));
    CHECK_THROWS_AS(polynomial_reconstruction(std::vector<double>(9, 0.1), p, 1.0, 0.0, 0.0, 0.0), DomainError);
}
