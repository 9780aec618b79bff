#include "openlab/laplace.hpp"

#include <cmath>

#include "openlab/errors.hpp"

namespace openlab {

double BoundaryData::hermiticity_defect(double extent, int samples) const {
    double worst = 0.0;
    for (int i = 1; i <= samples; ++i) {
        const double y = extent * i / samples;
        worst = std::max(worst, std::abs(rho0(-y) - std::conj(rho0(y))));
    }
    return worst;
}

namespace {

cplx derivative(const XdFn& f, double y) {
    const double h = 2e-3;
    return (8.0 * (f(y + h) - f(y - h)) - (f(y + 2 * h) - f(y - 2 * h))) / (12.0 * h);
}

}  // namespace

cplx inhomogeneous_term(const BoundaryData& data, const EnvParams& p, double q, double xd) {
    const double m = p.m, hb = p.hbar;
    const cplx r0 = data.rho0(xd);
    const cplx d0 = data.drho0 ? data.drho0(xd) : derivative(data.rho0, xd);
    const cplx r1 = data.rho1(xd);
    const double c = p.d2 * p.nu / m - p.xi;
    return I * (hb / m) * d0 + I * xd * c * r0 + (hb * p.d2 / (2.0 * m * m)) * (q * r0 + r1);
}

cplx XdSolution::operator()(double xd) const {
    const double m = params.m, hb = params.hbar, nu = params.nu;
    const cplx base = rho_q0 * phi(0.0, xd);
    if (xd == 0.0) return base;
    auto integrand = [&](double y) {
        const cplx ph = phi(0.0, y);
        if (std::abs(ph) < 1e-280)
            throw DomainError("solve_xd_ode: |phi_q| underflows at x_d = " + std::to_string(y) + "; restrict the range");
        return inhomogeneous_term(data, params, q, y) / ((cplx{1.0, m * nu * y / (hb * q)}) * rho_q0 * ph);
    };
    const QuadResult r = integrate(integrand, 0.0, xd, 1e-12);
    return base * (1.0 - I * (m / (hb * q)) * r.value);
}

XdSolution solve_xd_ode(const BoundaryData& data, const EnvParams& p, double q, double Omega, cplx rho_q_at_0) {
    if (q == 0.0) throw DomainError("solve_xd_ode needs q != 0");
    if (rho_q_at_0 == cplx{0.0, 0.0}) throw DomainError("solve_xd_ode needs rho_q(0) != 0");
    if (!data.rho0 || !data.rho1) throw DomainError("solve_xd_ode needs rho0 and rho1");
    XdSolution s;
    s.data = data;
    s.params = p;
    s.q = q;
    s.Omega = Omega;
    s.rho_q0 = rho_q_at_0;
    s.phi = tunneling(p, q, Omega);
    return s;
}

cplx xd_ode_residual(const XdSolution& s, double xd, double h) {
    const EnvParams& p = s.params;
    const double m = p.m, hb = p.hbar, q = s.q;
    const double c = p.d2 * p.nu / m - p.xi;
    const cplx d = (s(xd + h) - s(xd - h)) / (2.0 * h);
    const cplx B = hb * p.d2 * q * q / (2.0 * m * m) - s.Omega + I * xd * (p.f / hb + q * c) - xd2_rate(p) * xd * xd;
    return cplx{-p.nu * xd, hb * q / m} * d + B * s(xd) - inhomogeneous_term(s.data, p, q, xd);
}

cplx polynomial_reconstruction(const std::vector<double>& kappa_poly, const EnvParams& p, double q0, double Omega,
                               double x, double xd) {
    if (kappa_poly.size() > 8) throw DomainError("polynomial_reconstruction supports degree N <= 8");
    cplx v = tunneling(p, q0, Omega)(x, xd);
    double fact = 1.0;
    for (std::size_t n = 1; n <= kappa_poly.size(); ++n) {
        fact *= double(n);
        if (kappa_poly[n - 1] == 0.0) continue;
        v += kappa_poly[n - 1] / fact * tunneling(p, q0, Omega, int(n))(x, xd);
    }
    return v;
}

StateFn reconstruction_state(const std::vector<double>& kappa_poly, const EnvParams& p, double q0, double Omega) {
    if (kappa_poly.size() > 8) throw DomainError("polynomial_reconstruction supports degree N <= 8");
    std::vector<TunnelingState> terms;
    std::vector<double> coef;
    terms.push_back(tunneling(p, q0, Omega));
    coef.push_back(1.0);
    double fact = 1.0;
    for (std::size_t n = 1; n <= kappa_poly.size(); ++n) {
        fact *= double(n);
        terms.push_back(tunneling(p, q0, Omega, int(n)));
        coef.push_back(kappa_poly[n - 1] / fact);
    }
    return [terms, coef](double x, double xd) {
        cplx v = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (coef[i] != 0.0) v += coef[i] * terms[i](x, xd);
        return v;
    };
}

}  // namespace openlab
