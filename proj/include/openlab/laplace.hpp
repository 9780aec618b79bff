// laplace.hpp: tunneling solutions with general boundary data at x = 0

#pragma once

#include <functional>
#include <vector>

#include "openlab/model.hpp"
#include "openlab/numerics.hpp"
#include "openlab/stationary.hpp"

namespace openlab {

using XdFn = std::function<cplx(double xd)>;

struct BoundaryData {
    XdFn rho0;                        // rho(0, x_d)
    XdFn rho1;                        // d_x rho(0, x_d)
    XdFn drho0;                       // d_{x_d} rho0; empty -> fourth-order central difference
    std::vector<double> kappa_poly;   // kappa_1..kappa_N of kappa(x) = sum kappa_n x^n/n!

    // max |rho0(-x_d) - conj rho0(x_d)| over samples in (0, extent]
    double hermiticity_defect(double extent = 2.0, int samples = 16) const;
};

// (i hbar/m) rho0' + i x_d (d2 nu/m - xi) rho0 + (hbar d2/2m^2)(q rho0 + rho1)
cplx inhomogeneous_term(const BoundaryData& data, const EnvParams& p, double q, double xd);

// rho_q(x_d) = rho_q(0) phi_q [1 - (i m/hbar q) int_0^{x_d} kappa_q/((1 + i m nu y/hbar q) rho_q(0) phi_q) dy]
struct XdSolution {
    BoundaryData data;
    EnvParams params;
    double q{1.0};
    double Omega{0.0};
    cplx rho_q0{1.0, 0.0};
    TunnelingState phi;  // phi_q = rho_{0,q,Omega}(0, x_d)

    cplx operator()(double xd) const;  // throws QuadratureError, DomainError on |phi| underflow
};

XdSolution solve_xd_ode(const BoundaryData& data, const EnvParams& p, double q, double Omega, cplx rho_q_at_0);

// (i hbar q/m - nu x_d) rho' + [hbar d2 q^2/2m^2 - Omega + i x_d (f/hbar + q c) - D x_d^2] rho - kappa_q,
// c = d2 nu/m - xi, rho' by central difference with step h
cplx xd_ode_residual(const XdSolution& s, double xd, double h = 1e-4);

// [1 + kappa(d_q)] e^{qx} phi_q(x_d) at q = q0, i.e. sum_n kappa_n/n! rho_{n,q0,Omega}
cplx polynomial_reconstruction(const std::vector<double>& kappa_poly, const EnvParams& p, double q0, double Omega,
                               double x, double xd);
StateFn reconstruction_state(const std::vector<double>& kappa_poly, const EnvParams& p, double q0, double Omega);

}  // namespace openlab
