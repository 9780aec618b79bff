// wigner.hpp: Wigner transform and the k-space oscillator picture of stationary states

#pragma once

#include <vector>

#include "openlab/liouville.hpp"
#include "openlab/stationary.hpp"

namespace openlab {

// w(x, k) = int dx_d e^{-i k x_d} rho(x, x_d); k_m = 2 pi m/(nxd hxd), |m| <= (nxd-1)/2.
// With this k grid the rectangle sum and its inverse form an exact discrete pair.
struct WignerField {
    Grid2D source;              // grid of the transformed field
    std::vector<double> x, k;
    std::vector<cplx> values;   // values[i * nk + m]
    bool boundary_warning{false};
    double boundary_ratio{0.0}; // max |rho| on the x_d edges / max |rho|

    double at(std::size_t i, std::size_t m) const { return values[i * k.size() + m].real(); }
    double max_imag() const;
    double dk() const { return k.size() > 1 ? k[1] - k[0] : 0.0; }
};

WignerField transform(const Field2D& rho);
Field2D inverse_transform(const WignerField& w);

struct OscillatorMap {
    double E{0.0};
    double mu{0.0};
    double omega{0.0};
    double k0{0.0};       // Hermite argument center
    double k_gauss{0.0};  // Gaussian center, k_f - q (d0 - d2 nu^2)/(2 m nu^2)
    double k_gauss_literal{0.0};
    double ell{0.0};      // ell^2 = mu omega / hbar = ell_dec^2 / 2
    double q{0.0};
    double gauge_linear{0.0};     // chi = exp(q x + gauge_linear k - gauge_quadratic k^2) kappa
    double gauge_quadratic{0.0};
    EnvParams params;

    double Omega_of_n(int n) const;
};

OscillatorMap oscillator_map(const EnvParams& p, double q, double Omega);

// Omega_n = d0 hbar q^2/(2 m^2 nu^2) - f q/(m nu) - n nu
double spectrum(const EnvParams& p, double q, int n);

struct KSpaceModes {
    std::vector<double> k;
    std::vector<double> eigenvalues;               // largest real part first
    std::vector<std::vector<double>> eigenvectors; // chi over k, max-abs entry positive
    std::vector<int> sign_changes;
    bool extrapolated{false};  // eigenvalues Richardson-combined with a 2 nk + 1 grid
};

// window k0 +- 8/ell_dec, nk interior nodes, Dirichlet ends
KSpaceModes kspace_eigensolve(const EnvParams& p, double q, int n_max, int nk = 512, bool extrapolate = false);

// H_n(ell (k - k0)) exp(q x - (ell_dec^2/2)(k - k_gauss)^2)
double hermite_wigner(const EnvParams& p, double q, int n, double x, double k);

// int (w_n / G)(w_m / G) dk at x = 0 with G the literal gauge factor
double oscillator_inner_product(const EnvParams& p, double q, int n, int m);

struct ShiftedState {
    StateFn base;
    double p_shift{0.0};
    double Omega{0.0};
    double r{0.0};       // tunneling: 1 + i r x_d factor
    double ell0{0.0};    // propagating: (i x_d/ell0) factor
    bool tunneling{true};

    cplx operator()(double x, double xd) const;
};

ShiftedState frequency_shift(const TunnelingState& s, double p_shift);
ShiftedState frequency_shift(const PropagatingState& s, double p_shift);

}  // namespace openlab
