// liouville.hpp: grid discretization of the master equation, time stepping, currents

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "openlab/model.hpp"
#include "openlab/numerics.hpp"

namespace openlab {

struct Grid2D {
    double x_min{-4.0}, x_max{4.0};
    double xd_min{-4.0}, xd_max{4.0};
    std::size_t nx{257}, nxd{257};

    // Checks nx, nxd >= 8, x = 0 and x_d = 0 on nodes, symmetric x_d range.
    static Grid2D make(double x_min, double x_max, std::size_t nx, double xd_max, std::size_t nxd);
    void check() const;

    double hx() const { return (x_max - x_min) / double(nx - 1); }
    double hxd() const { return (xd_max - xd_min) / double(nxd - 1); }
    double x(std::size_t i) const { return x_min + double(i) * hx(); }
    double xd(std::size_t j) const { return xd_min + double(j) * hxd(); }
    std::size_t ix0() const;   // index of x = 0
    std::size_t jxd0() const { return (nxd - 1) / 2; }
    Grid2D refined() const;    // spacings halved, same window
    bool same_as(const Grid2D& o, double tol = 1e-12) const;
};

struct Field2D {
    Grid2D grid;
    std::vector<cplx> values;  // values[i * nxd + j], i over x, j over x_d

    Field2D() = default;
    explicit Field2D(const Grid2D& g) : grid(g), values(g.nx * g.nxd) {}

    cplx& at(std::size_t i, std::size_t j) { return values[i * grid.nxd + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return values[i * grid.nxd + j]; }

    double norm() const;                        // discrete L2 norm with cell weights
    double hermiticity_defect() const;          // max |rho(x,xd) - conj(rho(x,-xd))|
    void enforce_hermiticity();
    bool all_finite() const;
};

Field2D sample(const Grid2D& g, const std::function<cplx(double x, double xd)>& fn);

// Number of worker threads for grid kernels. OPENLAB_THREADS overrides the value passed here.
void set_threads(int n);
int threads();

void apply_liouvillian(const Field2D& rho, const EnvParams& p, Field2D& out);
Field2D apply_liouvillian(const Field2D& rho, const EnvParams& p);

// ||L rho - Omega rho|| / ||rho|| on nodes at least `margin` away from every edge
double eigen_residual(const Field2D& rho, const EnvParams& p, cplx omega, std::size_t margin = 1);

// Im(<rho, L rho>) / <rho, rho> over the interior
double spectrum_imag_probe(const Field2D& rho, const EnvParams& p, std::size_t margin = 1);

// Largest dt accepted by evolve for safety factor C
double stability_bound(const Grid2D& g, const EnvParams& p, double safety = 0.25);

struct Trajectory {
    std::vector<double> times;
    std::vector<Field2D> snapshots;
};

struct EvolveOptions {
    double safety{0.25};
    std::size_t stride{1};         // snapshot every stride steps
    bool store{true};              // keep snapshots in the returned trajectory
    bool check_growth{true};
    double growth_limit{1e6};
    std::function<void(double t, const Field2D&)> observer;  // called at every snapshot
    // Optional Dirichlet data on all four edges. Without it the edges follow the
    // one-sided stencils, which lets e^{qx}-type modes of the truncated box grow.
    std::function<cplx(double t, double x, double xd)> edge_values;
};

// Fixed-step RK4. The step is t_end / ceil(t_end / dt).
Trajectory evolve(const Field2D& rho0, const EnvParams& p, double t_end, double dt,
                  const EvolveOptions& opt = {});

struct CurrentPair {
    std::vector<double> x;
    std::vector<double> n;
    std::vector<double> j;
    std::vector<double> J;
};

CurrentPair density_and_currents(const Field2D& rho, const EnvParams& p);

struct ContinuityReport {
    double value{0.0};        // max |dn/dt + dJ/dx| * t_span / max|n|
    double max_abs{0.0};      // unnormalized maximum
    double max_n{0.0};
    double t_span{0.0};
    double x_at_max{0.0};
    double t_at_max{0.0};
    std::size_t snapshots{0};
};

// Streaming form: feed uniformly spaced snapshots, read the result at the end.
// With lambda != 0 the strip |x| <= hxd/2 + 2hx around the delta is excluded.
class ContinuityMonitor {
public:
    explicit ContinuityMonitor(const EnvParams& p) : p_(p) {}
    void push(double t, const Field2D& rho);
    ContinuityReport report() const;

private:
    EnvParams p_;
    std::vector<double> t_;
    std::vector<std::vector<double>> n_, divJ_;
    std::vector<double> x_;
    double hx_{0.0}, excl_{-1.0};
    ContinuityReport r_;
    double t_first_{0.0}, t_last_{0.0}, dt_{0.0};
    std::size_t count_{0};
};

ContinuityReport continuity_residual(const Trajectory& traj, const EnvParams& p);

}  // namespace openlab
