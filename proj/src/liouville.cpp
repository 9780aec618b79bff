#include "openlab/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "openlab/errors.hpp"

namespace openlab {

namespace {

int g_threads = 1;

bool on_node(double a, double h) {
    double r = a / h;
    return std::abs(r - std::round(r)) < 1e-9;
}

}  // namespace

void set_threads(int n) { g_threads = std::max(1, n); }

int threads() {
    if (const char* env = std::getenv("OPENLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return g_threads;
}

Grid2D Grid2D::make(double x_min, double x_max, std::size_t nx, double xd_max, std::size_t nxd) {
    Grid2D g{x_min, x_max, -xd_max, xd_max, nx, nxd};
    g.check();
    return g;
}

void Grid2D::check() const {
    if (nx < 8 || nxd < 8) throw GridError("grid needs at least 8 nodes per axis");
    if (!(x_max > x_min) || !(xd_max > xd_min)) throw GridError("grid range is empty");
    if (std::abs(xd_min + xd_max) > 1e-12 * xd_max) throw GridError("x_d range must be symmetric about 0");
    if (nxd % 2 == 0) throw GridError("nxd must be odd so that x_d = 0 is a node (got " + std::to_string(nxd) + ")");
    if (x_min > 0 || x_max < 0 || !on_node(x_min, hx()))
        throw GridError("x = 0 must be a grid node: choose x_min as a multiple of hx");
}

std::size_t Grid2D::ix0() const { return std::size_t(std::llround(-x_min / hx())); }

Grid2D Grid2D::refined() const {
    Grid2D g = *this;
    g.nx = 2 * nx - 1;
    g.nxd = 2 * nxd - 1;
    return g;
}

bool Grid2D::same_as(const Grid2D& o, double tol) const {
    return nx == o.nx && nxd == o.nxd && std::abs(x_min - o.x_min) <= tol &&
           std::abs(x_max - o.x_max) <= tol && std::abs(xd_min - o.xd_min) <= tol &&
           std::abs(xd_max - o.xd_max) <= tol;
}

double Field2D::norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s * grid.hx() * grid.hxd());
}

double Field2D::hermiticity_defect() const {
    double d = 0.0;
    const std::size_t nxd = grid.nxd;
    for (std::size_t i = 0; i < grid.nx; ++i)
        for (std::size_t j = 0; j < nxd; ++j)
            d = std::max(d, std::abs(at(i, j) - std::conj(at(i, nxd - 1 - j))));
    return d;
}

void Field2D::enforce_hermiticity() {
    const std::size_t nxd = grid.nxd;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        for (std::size_t j = 0; j <= nxd / 2; ++j) {
            std::size_t jm = nxd - 1 - j;
            cplx a = 0.5 * (at(i, j) + std::conj(at(i, jm)));
            at(i, j) = a;
            at(i, jm) = std::conj(a);
        }
    }
}

bool Field2D::all_finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

Field2D sample(const Grid2D& g, const std::function<cplx(double, double)>& fn) {
    Field2D f(g);
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.nxd; ++j) f.at(i, j) = fn(g.x(i), g.xd(j));
    return f;
}

namespace {

// First and second derivatives of a strided line, second order with one-sided edges.
inline cplx d1(const cplx* f, std::size_t k, std::size_t n, std::size_t s, double h) {
    if (k == 0) return (-3.0 * f[0] + 4.0 * f[s] - f[2 * s]) / (2.0 * h);
    if (k == n - 1) {
        const cplx* e = f + (n - 1) * s;
        return (3.0 * e[0] - 4.0 * e[-std::ptrdiff_t(s)] + e[-2 * std::ptrdiff_t(s)]) / (2.0 * h);
    }
    const cplx* c = f + k * s;
    return (c[s] - c[-std::ptrdiff_t(s)]) / (2.0 * h);
}

inline cplx d2(const cplx* f, std::size_t k, std::size_t n, std::size_t s, double h) {
    const double h2 = h * h;
    if (k == 0) return (2.0 * f[0] - 5.0 * f[s] + 4.0 * f[2 * s] - f[3 * s]) / h2;
    if (k == n - 1) {
        const cplx* e = f + (n - 1) * s;
        const auto S = std::ptrdiff_t(s);
        return (2.0 * e[0] - 5.0 * e[-S] + 4.0 * e[-2 * S] - e[-3 * S]) / h2;
    }
    const cplx* c = f + k * s;
    return (c[s] - 2.0 * c[0] + c[-std::ptrdiff_t(s)]) / h2;
}

struct DeltaHit {
    std::size_t i;
    double w;  // weight / hx
};

// Nodes that carry a line at position s, split linearly between neighbours
void delta_nodes(const Grid2D& g, double s, std::vector<DeltaHit>& out) {
    const double hx = g.hx();
    double u = (s - g.x_min) / hx;
    if (u < -1e-12 || u > double(g.nx - 1) + 1e-12) return;
    double fl = std::floor(u + 1e-12);
    auto i0 = std::size_t(std::max(0.0, fl));
    double w = std::clamp(u - fl, 0.0, 1.0);
    if (i0 >= g.nx - 1) {
        out.push_back({g.nx - 1, 1.0 / hx});
        return;
    }
    if (w < 1e-12) {
        out.push_back({i0, 1.0 / hx});
        return;
    }
    out.push_back({i0, (1.0 - w) / hx});
    out.push_back({i0 + 1, w / hx});
}

}  // namespace

void apply_liouvillian(const Field2D& rho, const EnvParams& p, Field2D& out) {
    const Grid2D& g = rho.grid;
    g.check();
    const std::size_t nx = g.nx, nxd = g.nxd;
    const double hx = g.hx(), hxd = g.hxd();
    if (!out.grid.same_as(g) || out.values.size() != rho.values.size()) out = Field2D(g);

    const cplx c_mix = I * p.hbar / p.m;
    const cplx c_pot = I * p.f / p.hbar;
    const double c_dec = xd2_rate(p);
    const cplx c_adv = I * (p.d2 * p.nu / p.m - p.xi);
    const double c_nu = p.nu;
    const double c_diff = p.hbar * p.d2 / (2.0 * p.m * p.m);
    const cplx c_delta = I * p.lambda / p.hbar;

    // D_xd rho, needed for the mixed term and the -nu x_d d/dx_d term
    std::vector<cplx> dd(nx * nxd);
    const cplx* r = rho.values.data();
#pragma omp parallel for num_threads(threads()) schedule(static)
    for (std::ptrdiff_t ii = 0; ii < std::ptrdiff_t(nx); ++ii) {
        auto i = std::size_t(ii);
        for (std::size_t j = 0; j < nxd; ++j) dd[i * nxd + j] = d1(r + i * nxd, j, nxd, 1, hxd);
    }

#pragma omp parallel for num_threads(threads()) schedule(static)
    for (std::ptrdiff_t ii = 0; ii < std::ptrdiff_t(nx); ++ii) {
        auto i = std::size_t(ii);
        for (std::size_t j = 0; j < nxd; ++j) {
            const double y = g.xd(j);
            const cplx v = r[i * nxd + j];
            cplx acc = c_mix * d1(dd.data() + j, i, nx, nxd, hx);
            acc += (c_pot * y - c_dec * y * y) * v;
            if (c_adv != 0.0) acc += c_adv * y * d1(r + j, i, nx, nxd, hx);
            if (c_nu != 0.0) acc -= c_nu * y * dd[i * nxd + j];
            if (c_diff != 0.0) acc += c_diff * d2(r + j, i, nx, nxd, hx);
            out.values[i * nxd + j] = acc;
        }
    }

    if (p.lambda != 0.0) {
        std::vector<DeltaHit> hits;
        for (std::size_t j = 0; j < nxd; ++j) {
            const double y = g.xd(j);
            hits.clear();
            delta_nodes(g, -0.5 * y, hits);  // x_+ = 0
            std::size_t split = hits.size();
            delta_nodes(g, 0.5 * y, hits);   // x_- = 0
            for (std::size_t h = 0; h < hits.size(); ++h) {
                const double sgn = h < split ? 1.0 : -1.0;
                out.at(hits[h].i, j) += sgn * c_delta * hits[h].w * rho.at(hits[h].i, j);
            }
        }
    }
}

Field2D apply_liouvillian(const Field2D& rho, const EnvParams& p) {
    Field2D out(rho.grid);
    apply_liouvillian(rho, p, out);
    return out;
}

double eigen_residual(const Field2D& rho, const EnvParams& p, cplx omega, std::size_t margin) {
    Field2D L = apply_liouvillian(rho, p);
    const Grid2D& g = rho.grid;
    double num = 0.0, den = 0.0;
    for (std::size_t i = margin; i + margin < g.nx; ++i)
        for (std::size_t j = margin; j + margin < g.nxd; ++j) {
            num += std::norm(L.at(i, j) - omega * rho.at(i, j));
            den += std::norm(rho.at(i, j));
        }
    return std::sqrt(num / den);
}

double spectrum_imag_probe(const Field2D& rho, const EnvParams& p, std::size_t margin) {
    Field2D L = apply_liouvillian(rho, p);
    const Grid2D& g = rho.grid;
    cplx num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t i = margin; i + margin < g.nx; ++i)
        for (std::size_t j = margin; j + margin < g.nxd; ++j) {
            num += std::conj(rho.at(i, j)) * L.at(i, j);
            den += std::norm(rho.at(i, j));
        }
    return num.imag() / den;
}

double stability_bound(const Grid2D& g, const EnvParams& p, double safety) {
    const double hx = g.hx(), hxd = g.hxd(), y = g.xd_max;
    double b = hx * hxd * p.m / p.hbar;
    if (p.d2 > 0) b = std::min(b, p.m * p.m * hx * hx / (p.hbar * p.d2));
    // x_d-weighted terms grow with the window; RK4 tolerates |z| of about 2.8
    double rate = std::abs(xd2_rate(p)) * y * y + p.nu * y / hxd +
                  std::abs(p.d2 * p.nu / p.m - p.xi) * y / hx + std::abs(p.f) * y / p.hbar;
    if (rate > 0) b = std::min(b, 4.0 / rate);
    return safety * b;
}

Trajectory evolve(const Field2D& rho0, const EnvParams& p, double t_end, double dt,
                  const EvolveOptions& opt) {
    rho0.grid.check();
    if (!(t_end >= 0) || !(dt > 0)) throw DomainError("evolve needs t_end >= 0 and dt > 0");
    const double bound = stability_bound(rho0.grid, p, opt.safety);
    if (dt > bound * (1.0 + 1e-12))
        throw StabilityError("dt = " + std::to_string(dt) + " exceeds the stability bound " +
                                 std::to_string(bound),
                             bound);
    const std::size_t nsteps = t_end == 0 ? 0 : std::size_t(std::ceil(t_end / dt - 1e-9));
    const double h = nsteps ? t_end / double(nsteps) : 0.0;
    const std::size_t stride = std::max<std::size_t>(1, opt.stride);

    Trajectory traj;
    Field2D y = rho0;
    y.enforce_hermiticity();
    const double n0 = std::max(y.norm(), 1e-300);
    auto snap = [&](double t) {
        if (opt.observer) opt.observer(t, y);
        if (opt.store) {
            traj.times.push_back(t);
            traj.snapshots.push_back(y);
        }
    };
    snap(0.0);

    const Grid2D& g = y.grid;
    std::vector<std::size_t> edge;
    if (opt.edge_values) {
        for (std::size_t i = 0; i < g.nx; ++i)
            for (std::size_t j = 0; j < g.nxd; ++j)
                if (i == 0 || j == 0 || i + 1 == g.nx || j + 1 == g.nxd) edge.push_back(i * g.nxd + j);
    }
    // edge rates d/dt of the prescribed data, by a centered difference in t
    auto pin_rate = [&](Field2D& k, double t) {
        const double dl = 1e-5 * std::max(1.0, std::abs(t));
        for (std::size_t q : edge) {
            const double x = g.x(q / g.nxd), xd = g.xd(q % g.nxd);
            k.values[q] = (opt.edge_values(t + dl, x, xd) - opt.edge_values(t - dl, x, xd)) / (2.0 * dl);
        }
    };
    auto pin_value = [&](double t) {
        for (std::size_t q : edge) y.values[q] = opt.edge_values(t, g.x(q / g.nxd), g.xd(q % g.nxd));
    };
    if (!edge.empty()) pin_value(0.0);

    Field2D k1(y.grid), k2(y.grid), k3(y.grid), k4(y.grid), tmp(y.grid);
    const std::size_t N = y.values.size();
    for (std::size_t s = 1; s <= nsteps; ++s) {
        const double t0 = double(s - 1) * h;
        apply_liouvillian(y, p, k1);
        if (!edge.empty()) pin_rate(k1, t0);
        for (std::size_t q = 0; q < N; ++q) tmp.values[q] = y.values[q] + 0.5 * h * k1.values[q];
        apply_liouvillian(tmp, p, k2);
        if (!edge.empty()) pin_rate(k2, t0 + 0.5 * h);
        for (std::size_t q = 0; q < N; ++q) tmp.values[q] = y.values[q] + 0.5 * h * k2.values[q];
        apply_liouvillian(tmp, p, k3);
        if (!edge.empty()) pin_rate(k3, t0 + 0.5 * h);
        for (std::size_t q = 0; q < N; ++q) tmp.values[q] = y.values[q] + h * k3.values[q];
        apply_liouvillian(tmp, p, k4);
        if (!edge.empty()) pin_rate(k4, t0 + h);
        for (std::size_t q = 0; q < N; ++q)
            y.values[q] += h / 6.0 * (k1.values[q] + 2.0 * k2.values[q] + 2.0 * k3.values[q] + k4.values[q]);
        y.enforce_hermiticity();

        const double t = double(s) * h;
        if (!edge.empty()) pin_value(t);
        if (!y.all_finite()) throw IntegratorError("non-finite values at t = " + std::to_string(t));
        if (opt.check_growth && y.norm() > opt.growth_limit * n0)
            throw IntegratorError("norm grew beyond " + std::to_string(opt.growth_limit) +
                                  " x initial at t = " + std::to_string(t));
        if (s % stride == 0 || s == nsteps) snap(t);
    }
    return traj;
}

CurrentPair density_and_currents(const Field2D& rho, const EnvParams& p) {
    const Grid2D& g = rho.grid;
    const std::size_t j0 = g.jxd0(), nx = g.nx;
    const double hxd = g.hxd(), hx = g.hx();
    CurrentPair c;
    c.x.resize(nx);
    c.n.resize(nx);
    c.j.resize(nx);
    c.J.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        c.x[i] = g.x(i);
        c.n[i] = rho.at(i, j0).real();
        cplx dd = (rho.at(i, j0 + 1) - rho.at(i, j0 - 1)) / (2.0 * hxd);
        c.j[i] = p.hbar / p.m * dd.imag();
    }
    const double cd = p.hbar * p.d2 / (2.0 * p.m * p.m);
    for (std::size_t i = 0; i < nx; ++i) {
        double dn;
        if (i == 0)
            dn = (-3.0 * c.n[0] + 4.0 * c.n[1] - c.n[2]) / (2.0 * hx);
        else if (i == nx - 1)
            dn = (3.0 * c.n[i] - 4.0 * c.n[i - 1] + c.n[i - 2]) / (2.0 * hx);
        else
            dn = (c.n[i + 1] - c.n[i - 1]) / (2.0 * hx);
        c.J[i] = c.j[i] - cd * dn;
    }
    return c;
}

void ContinuityMonitor::push(double t, const Field2D& rho) {
    const Grid2D& g = rho.grid;
    CurrentPair c = density_and_currents(rho, p_);
    const std::size_t nx = g.nx;
    const double hx = g.hx();
    const double cd = p_.hbar * p_.d2 / (2.0 * p_.m * p_.m);
    // divergence of J in flux form: J lives on half nodes, so dJ/dx = D1 j - cd D2 n
    std::vector<double> div(nx, 0.0);
    for (std::size_t i = 1; i + 1 < nx; ++i)
        div[i] = (c.j[i + 1] - c.j[i - 1]) / (2.0 * hx) -
                 cd * (c.n[i + 1] - 2.0 * c.n[i] + c.n[i - 1]) / (hx * hx);

    if (count_ == 0) {
        x_ = c.x;
        hx_ = hx;
        excl_ = p_.lambda != 0.0 ? 0.5 * g.hxd() + 2.0 * hx : -1.0;
        t_first_ = t;
    } else if (count_ == 1) {
        dt_ = t - t_last_;
        if (!(dt_ > 0)) throw DomainError("snapshot times must increase");
    } else if (std::abs((t - t_last_) - dt_) > 1e-9 * std::max(1.0, std::abs(dt_))) {
        throw DomainError("continuity residual needs uniformly spaced snapshots");
    }
    t_last_ = t;
    for (double v : c.n) r_.max_n = std::max(r_.max_n, std::abs(v));
    n_.push_back(std::move(c.n));
    divJ_.push_back(std::move(div));
    if (n_.size() > 3) {
        n_.erase(n_.begin());
        divJ_.erase(divJ_.begin());
    }
    ++count_;
    if (n_.size() == 3) {
        const double tm = t - dt_;
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            if (std::abs(x_[i]) <= excl_) continue;
            double res = std::abs((n_[2][i] - n_[0][i]) / (2.0 * dt_) + divJ_[1][i]);
            if (res > r_.max_abs) {
                r_.max_abs = res;
                r_.x_at_max = x_[i];
                r_.t_at_max = tm;
            }
        }
    }
}

ContinuityReport ContinuityMonitor::report() const {
    if (count_ < 3) throw DomainError("continuity residual needs at least 3 snapshots");
    ContinuityReport r = r_;
    r.snapshots = count_;
    r.t_span = t_last_ - t_first_;
    r.value = r.max_n > 0 ? r.max_abs * r.t_span / r.max_n : r.max_abs;
    return r;
}

ContinuityReport continuity_residual(const Trajectory& traj, const EnvParams& p) {
    ContinuityMonitor mon(p);
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) mon.push(traj.times[k], traj.snapshots[k]);
    return mon.report();
}

}  // namespace openlab
