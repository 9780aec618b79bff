// wavepacket.hpp: driven Gaussian-state parameter flow and wave-packet observables

#pragma once

#include <functional>
#include <vector>

#include "openlab/model.hpp"
#include "openlab/numerics.hpp"

namespace openlab {

struct FlowInit {
    cplx a_i{0.0, 0.0};
    cplx d_i{0.0, 0.0};
    cplx k_i{0.0, 0.0};
    cplx r_i{0.0, 0.0};
};

// rho = (1 + i r x_d)^p exp(a + q x - d x_d^2/2 + i k x_d) with fixed q, p
struct FlowParams {
    cplx a, d, k, r;
    cplx q, p;
    FlowInit init;
};

// Closed-form solution of the parameter flow. Regular as nu -> 0.
FlowParams flow(const EnvParams& params, cplx q, cplx p, const FlowInit& init, double t);

// The a(t), k(t) closed forms taken literally. They differ from flow() when
// xi != 0 (k and a) or f != 0 (a); kept for discrepancy reports.
FlowParams flow_literal(const EnvParams& params, cplx q, cplx p, const FlowInit& init, double t);

// Adaptive Dormand-Prince integration of the coefficient ODEs
FlowParams flow_ode_oracle(const EnvParams& params, cplx q, cplx p, const FlowInit& init, double t,
                           double tol = 1e-13);

// Plane wave e^{i k_i x} evolved to time t
struct PlaneWaveDecoherence {
    double width_coef{0.0};  // rho = exp(-width_coef x_d^2 + i k x_d)
    double k{0.0};
    cplx operator()(double xd) const { return std::exp(cplx{-width_coef * xd * xd, k * xd}); }
    std::vector<cplx> operator()(const std::vector<double>& xd) const;
};
PlaneWaveDecoherence plane_wave_decoherence(const EnvParams& params, double k_i, double t);

struct PacketObservables {
    double t{0.0};
    double sigma{1.0};
    double X{0.0};
    double Dx2{0.0};
    double inv_ell_eff2{0.0};
    double k_eff{0.0};
    double Q2{0.0};
    double kappa2{0.0};
    double N{0.0};
    double v_f{0.0};
    double a_f{0.0};
    // literal forms that disagree with the Gaussian integral
    double Q2_literal{0.0};
    double inv_ell_eff2_literal{0.0};

    // rho(x, x_d) normalized to 1 at (X, 0)
    cplx density_matrix(double x, double xd) const;
    // J(x) = (hbar/m)[k_eff + Q2 (x - X)] e^{-(x-X)^2/Dx2}
    double current(double x, double hbar, double m) const;
};

PacketObservables packet_observables(const EnvParams& params, double sigma, double t);

struct PacketFit {
    PacketObservables obs;
    double misfit{0.0};      // rms log-residual of the quadratic fit
    double node_change{0.0}; // max relative change of observables when the rule doubles
};

// Gauss-Hermite evaluation of the (k+, k-) Gaussian integral of flow() states,
// followed by a least-squares quadratic fit of log rho near the packet center.
PacketFit packet_integral_oracle(const EnvParams& params, double sigma, double t, int nodes = 64,
                                 bool check_doubling = false);

// Same integral, evaluated pointwise
cplx packet_integral_density(const EnvParams& params, double sigma, double t, double x, double xd, int nodes = 64);

struct ClosedReference {
    double X0{0.0};
    double Dx2_0{0.0};
    double kappa0_2{0.0};
    std::function<double(double)> j;
};

ClosedReference closed_reference(double sigma, double k0, double t, double m = 1.0, double hbar = 1.0);

// Long-time reference curves: Dx2 ~ 2 hbar d0 t/(m nu)^2, Q2 ~ m/(2 hbar t),
// kappa2 ~ m (d0 - d2 nu^2)/(2 hbar d0 t)
struct PacketAsymptotes {
    double Dx2{0.0};
    double Q2{0.0};
    double kappa2{0.0};
};
PacketAsymptotes packet_asymptotes(const EnvParams& params, double t);

}  // namespace openlab
