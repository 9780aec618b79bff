// boundstate.hpp: delta-line matching and the equilibrium bound state

#pragma once

#include <optional>
#include <vector>

#include "openlab/model.hpp"
#include "openlab/numerics.hpp"
#include "openlab/stationary.hpp"

namespace openlab {

// q_d = lambda m / hbar^2; throws DomainError for lambda <= 0
double adiabatic_q(const EnvParams& p);

enum class Region { A, B, C, D };

// x+ = x + x_d/2, x- = x - x_d/2. A: both < 0, C: both > 0,
// B: x+ > 0 > x- (x_d > 0), D: x- > 0 > x+ (x_d < 0).
Region region_of(double x, double xd);

// rho_A = rho_{0,q,0}, rho_C = rho_{0,-q,0}; B and D come from a Taylor
// continuation of rho_A across x+ = 0 (B) and x- = 0 (D) that satisfies the
// master equation and the jump condition to the truncation order.
struct BoundStateAC {
    EnvParams params;
    double q{0.0};
    TunnelingState A, C;
    int order{4};
    double window{0.0};  // |x_d| bound for B/D evaluation

    cplx rho_A(double x, double xd) const { return A(x, xd); }
    cplx rho_C(double x, double xd) const { return C(x, xd); }
    // throws DomainError in B/D outside the continuation window
    cplx operator()(double x, double xd) const;
    StateFn as_state() const;
};

BoundStateAC bound_state(const EnvParams& p);
BoundStateAC bound_state(const EnvParams& p, double q);

struct ConsistencyReport {
    cplx value;           // Richardson-extrapolated residual
    double error{0.0};    // extrapolation error estimate
    double scale{0.0};    // largest term magnitude at the finest step
    std::vector<double> h;
    std::vector<cplx> raw;
    double relative() const { return scale > 0 ? std::abs(value) / scale : std::abs(value); }
};

// [d-d+ rho_A - K/(1 - i d2/m) d- rho_A] - [d+d- rho_C + K/(1 + i d2/m) d+ rho_C] at the origin,
// K = 2 m lambda/hbar^2, one-sided second-order differences, steps h0, h0/2, ...
ConsistencyReport consistency_residual(const StateFn& rho, const EnvParams& p, double h0 = 0.05, int levels = 5);

// |i (d2/2m) d_x rho - d_{x_d} rho| at the origin from inside A
ConsistencyReport symmetric_matching_defect(const StateFn& rho, const EnvParams& p, double h0 = 0.05,
                                            int levels = 5);

struct JumpResiduals {
    double on_plus{0.0};   // line x+ = 0, x- < 0
    double on_minus{0.0};  // line x- = 0, x+ > 0
    double gap_plus{0.0};  // max |rho| discontinuity across each line; a gap makes the residual grow like 1/h
    double gap_minus{0.0};
    double h{0.0};
};

// max over 8 sampled points at distance (1..8)/8 * extent from the origin.
// Default extent: 0.2 ell_dec (keeps bound-state B/D samples inside the window), 0.5 if ell_dec is undefined.
JumpResiduals jump_residuals(const StateFn& rho, const EnvParams& p, double h = 1e-3,
                             std::optional<double> extent = {});

}  // namespace openlab
