// stationary.hpp: closed-form stationary states and their quadrature oracles

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "openlab/model.hpp"
#include "openlab/numerics.hpp"

namespace openlab {

using StateFn = std::function<cplx(double x, double xd)>;

// rho(x_d) = (x_d/ell0)^(-Omega/nu) exp(-x_d^2/2ell^2 + i k_f x_d), x-independent.
// Negative x_d take the principal branch of the power.
struct PropagatingState {
    EnvParams params;
    double Omega{0.0};
    double ell0{1.0};
    double ell_dec{1.0};
    double k_f{0.0};

    // nullopt marks the singular point x_d = 0 when Omega != 0
    std::optional<cplx> try_value(double xd) const;
    cplx operator()(double x, double xd) const;  // throws SingularPoint
};

PropagatingState propagating(const EnvParams& p, double Omega = 0.0, std::optional<double> ell0 = {});

// Integrates the exponent [-Omega + i y f/hbar - D y^2]/(nu y) from 0 (Omega = 0)
// or from +-ell0 (Omega != 0) and exponentiates.
cplx propagating_quadrature_oracle(const EnvParams& p, double Omega, double xd,
                                   std::optional<double> ell0 = {});

// Fourier transform of the Omega = 0 propagating state:
// w(k) = sqrt(2 pi) ell_dec exp(-(ell_dec^2/2)(k - k_f)^2)
struct GaussianK {
    double center{0.0};
    double variance{1.0};
    double amplitude{1.0};
    double operator()(double k) const { return amplitude * std::exp(-0.5 * (k - center) * (k - center) / variance); }
};

GaussianK propagating_wigner(const EnvParams& p);

// Tr[p^2 rho]/Tr[rho] = hbar^2/ell_dec^2 + f^2/nu^2 for the relaxed state
double momentum_second_moment(const EnvParams& p);

// rho = d^n/dq^n [(1 + i r x_d)^p exp(a + q x - x_d^2/2ell^2 + i k x_d)]
struct TunnelingState {
    EnvParams params;
    double q{1.0};
    double Omega{0.0};
    int n{0};
    double a{0.0};
    double r{0.0}, p{0.0}, k{0.0};
    double ell_dec{1.0};

    cplx operator()(double x, double xd) const;
    // exponent of the n = 0 state
    cplx log_value(double x, double xd) const;
};

TunnelingState tunneling(const EnvParams& p, double q, double Omega, int n = 0, double a = 0.0);

// p(q, Omega) and the level Omega_n with p(Omega_n) = n
double tunneling_exponent(const EnvParams& p, double q, double Omega);
double tunneling_level(const EnvParams& p, double q, int n);

// phi(x_d) from quadrature of its first-order ODE along [0, x_d]
cplx tunneling_quadrature_oracle(const EnvParams& p, double q, double Omega, double xd);

struct TunnelingFlux {
    cplx p_of_x;
    double J_of_x{0.0};
};

// p(x) = (hbar q (d2 - i m)/(2m) - Omega m/q) e^{qx}, J(x) = -e^{qx} Omega/q
TunnelingFlux tunneling_flux(const TunnelingState& s, double x);

enum class LimitMode { propagating, tunneling };

// g -> 0 forms: Gaussian with ell*^2 = 2 hbar tilde_nu/tilde_d0, or e^{qx}
StateFn g_limit_states(const ScaledParams& s, LimitMode mode, double q = 0.0);

std::string state_descriptor(const PropagatingState& s);
std::string state_descriptor(const TunnelingState& s);

}  // namespace openlab
