#include "openlab/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "openlab/errors.hpp"

namespace openlab {

double WignerField::max_imag() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
}

WignerField transform(const Field2D& rho) {
    const Grid2D& g = rho.grid;
    g.check();
    const std::size_t nx = g.nx, nxd = g.nxd;
    const double hxd = g.hxd();
    const long half = long(nxd - 1) / 2;
    WignerField w;
    w.source = g;
    w.x.resize(nx);
    w.k.resize(nxd);
    for (std::size_t i = 0; i < nx; ++i) w.x[i] = g.x(i);
    const double dk = 2.0 * std::numbers::pi / (double(nxd) * hxd);
    for (long m = -half; m <= half; ++m) w.k[std::size_t(m + half)] = dk * double(m);

    // e^{-i k_m xd_j} depends only on (m (j - half)) mod nxd
    std::vector<cplx> phase(nxd);
    for (std::size_t s = 0; s < nxd; ++s)
        phase[s] = std::polar(1.0, -2.0 * std::numbers::pi * double(s) / double(nxd));

    w.values.assign(nx * nxd, cplx{});
#pragma omp parallel for num_threads(threads()) schedule(static)
    for (std::ptrdiff_t ii = 0; ii < std::ptrdiff_t(nx); ++ii) {
        auto i = std::size_t(ii);
        for (long m = -half; m <= half; ++m) {
            cplx s{0.0, 0.0};
            for (long j = -half; j <= half; ++j) {
                long idx = ((m * j) % long(nxd) + long(nxd)) % long(nxd);
                s += phase[std::size_t(idx)] * rho.at(i, std::size_t(j + half));
            }
            w.values[i * nxd + std::size_t(m + half)] = s * hxd;
        }
    }

    double mx = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nxd; ++j) mx = std::max(mx, std::abs(rho.at(i, j)));
        edge = std::max({edge, std::abs(rho.at(i, 0)), std::abs(rho.at(i, nxd - 1))});
    }
    w.boundary_ratio = mx > 0 ? edge / mx : 0.0;
    w.boundary_warning = w.boundary_ratio > 1e-6;
    return w;
}

Field2D inverse_transform(const WignerField& w) {
    const Grid2D& g = w.source;
    const std::size_t nx = g.nx, nxd = g.nxd;
    const long half = long(nxd - 1) / 2;
    std::vector<cplx> phase(nxd);
    for (std::size_t s = 0; s < nxd; ++s)
        phase[s] = std::polar(1.0, 2.0 * std::numbers::pi * double(s) / double(nxd));
    const double pref = w.dk() / (2.0 * std::numbers::pi);
    Field2D rho(g);
#pragma omp parallel for num_threads(threads()) schedule(static)
    for (std::ptrdiff_t ii = 0; ii < std::ptrdiff_t(nx); ++ii) {
        auto i = std::size_t(ii);
        for (long j = -half; j <= half; ++j) {
            cplx s{0.0, 0.0};
            for (long m = -half; m <= half; ++m) {
                long idx = ((m * j) % long(nxd) + long(nxd)) % long(nxd);
                s += phase[std::size_t(idx)] * w.values[i * nxd + std::size_t(m + half)];
            }
            rho.at(i, std::size_t(j + half)) = s * pref;
        }
    }
    return rho;
}

double spectrum(const EnvParams& p, double q, int n) { return tunneling_level(p, q, n); }

double OscillatorMap::Omega_of_n(int n) const { return spectrum(params, q, n); }

OscillatorMap oscillator_map(const EnvParams& p, double q, double Omega) {
    const double m = p.m, hb = p.hbar, nu = p.nu;
    const double Dp = p.d0 + p.d2 * nu * nu - 2.0 * m * nu * p.xi;
    if (!(Dp > 0)) throw DomainError("d0 + d2 nu^2 - 2 m nu xi must be positive for the oscillator map");
    if (!(nu > 0)) throw SingularLimit("oscillator map needs nu > 0");
    OscillatorMap o;
    o.params = p;
    o.q = q;
    o.E = p.d0 * hb * q * q / (2.0 * m * m * nu * nu) + (nu - 2.0 * Omega) / 2.0 - p.f * q / (m * nu);
    o.mu = hb * hb * hb / Dp;
    o.omega = nu / hb;
    const double kf = p.f / (hb * nu);
    o.k0 = kf - p.d0 * q / (m * nu * nu) + q * p.xi / nu;
    o.k_gauss = kf - q * (p.d0 - p.d2 * nu * nu) / (2.0 * m * nu * nu);
    o.k_gauss_literal = kf + q * (p.d0 - p.d2 * nu * nu) / (2.0 * m * nu * nu);
    o.ell = std::sqrt(o.mu * o.omega / hb);
    o.gauge_linear = (p.d2 * hb * q * nu + p.f * m - hb * p.xi * m * q) / (m * Dp);
    o.gauge_quadratic = hb * nu / (2.0 * Dp);
    return o;
}

namespace {

struct TridiagModes {
    std::vector<double> k;
    std::vector<std::pair<double, std::vector<double>>> modes;
};

// conservative form (1/W) d_k (D W d_k) + V with W = exp(int b/D), b = nu k + drift0;
// sqrt(W) scaling makes the three-point matrix symmetric
TridiagModes solve_tridiag(const EnvParams& p, double q, int n_max, int nk) {
    const OscillatorMap om = oscillator_map(p, q, 0.0);
    const double m = p.m, hb = p.hbar, nu = p.nu;
    const double D = xd2_rate(p);
    const double L = 8.0 / decoherence_length(p);
    const double center = om.k0;
    const double h = 2.0 * L / double(nk + 1);
    const double drift0 = -p.f / hb - q * (p.d2 * nu / m - p.xi);
    const double V0 = nu + hb * p.d2 * q * q / (2.0 * m * m);
    auto phi = [&](double k) { return (0.5 * nu * k * k + drift0 * k) / D; };

    TridiagModes out;
    out.k.resize(nk);
    Eigen::VectorXd d(nk), e(nk - 1), logs(nk);
    for (int i = 0; i < nk; ++i) {
        const double k = center - L + h * (i + 1);
        out.k[i] = k;
        const double c = phi(k);
        d(i) = -D / (h * h) * (std::exp(phi(k + 0.5 * h) - c) + std::exp(phi(k - 0.5 * h) - c)) - hb * k * q / m + V0;
        logs(i) = -0.5 * c;
    }
    for (int i = 0; i + 1 < nk; ++i)
        e(i) = D / (h * h) * std::exp(phi(out.k[i] + 0.5 * h) - 0.5 * (phi(out.k[i]) + phi(out.k[i + 1])));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw NumericalError("tridiagonal eigen solve did not converge (nk = " + std::to_string(nk) +
                             ", h = " + std::to_string(h) + ")");
    const double shift = logs.maxCoeff();
    for (int c = nk - 1; c >= 0 && int(out.modes.size()) < n_max; --c) {
        std::vector<double> v(nk);
        for (int i = 0; i < nk; ++i) v[i] = es.eigenvectors()(i, c) * std::exp(logs(i) - shift);
        out.modes.push_back({es.eigenvalues()(c), std::move(v)});
    }
    return out;
}

}  // namespace

KSpaceModes kspace_eigensolve(const EnvParams& p, double q, int n_max, int nk, bool extrapolate) {
    if (n_max < 1 || nk < 16) throw DomainError("kspace_eigensolve needs n_max >= 1 and nk >= 16");
    if (n_max > nk) throw DomainError("kspace_eigensolve: n_max exceeds the number of k nodes");
    TridiagModes t = solve_tridiag(p, q, n_max, nk);

    KSpaceModes out;
    out.k = t.k;
    if (extrapolate) {
        // nested grid with half the spacing, h^2 error removed
        const TridiagModes fine = solve_tridiag(p, q, n_max, 2 * nk + 1);
        for (std::size_t c = 0; c < t.modes.size(); ++c)
            t.modes[c].first = (4.0 * fine.modes[c].first - t.modes[c].first) / 3.0;
        out.extrapolated = true;
    }
    for (auto& [lam, v] : t.modes) {
        auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
        const double s = *it;
        for (double& x : v) x /= s;
        int changes = 0, last = 0;
        for (double x : v) {
            if (std::abs(x) < 1e-8) continue;
            int sg = x > 0 ? 1 : -1;
            if (last != 0 && sg != last) ++changes;
            last = sg;
        }
        out.eigenvalues.push_back(lam);
        out.eigenvectors.push_back(std::move(v));
        out.sign_changes.push_back(changes);
    }
    return out;
}

double hermite_wigner(const EnvParams& p, double q, int n, double x, double k) {
    const OscillatorMap om = oscillator_map(p, q, 0.0);
    const double l2 = 1.0 / inv_ell_dec2(p);
    const double u = k - om.k_gauss;
    return hermite(n, om.ell * (k - om.k0)) * std::exp(q * x - 0.5 * l2 * u * u);
}

double oscillator_inner_product(const EnvParams& p, double q, int n, int m) {
    const OscillatorMap om = oscillator_map(p, q, 0.0);
    const GaussRule gh = gauss_hermite(64);
    // oscillator functions decay like e^{-ell^2 (k-k0)^2 / 2}; the rule absorbs e^{-ell^2 (k-k0)^2}
    double s = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        const double k = om.k0 + gh.nodes[i] / om.ell;
        const double G = std::exp(om.gauge_linear * k - om.gauge_quadratic * k * k);
        const double a = hermite_wigner(p, q, n, 0.0, k) / G;
        const double b = hermite_wigner(p, q, m, 0.0, k) / G;
        s += gh.weights[i] * std::exp(gh.nodes[i] * gh.nodes[i]) * a * b;
    }
    return s / om.ell;
}

cplx ShiftedState::operator()(double x, double xd) const {
    if (p_shift == 0.0) return base(x, xd);
    if (tunneling) return base(x, xd) * std::exp(p_shift * log1p_i(r * xd));
    return base(x, xd) * std::pow(cplx{0.0, xd / ell0}, p_shift);
}

ShiftedState frequency_shift(const TunnelingState& s, double p_shift) {
    ShiftedState out;
    out.base = [s](double x, double xd) { return s(x, xd); };
    out.p_shift = p_shift;
    out.Omega = s.Omega - s.params.nu * p_shift;
    out.r = s.r;
    out.tunneling = true;
    return out;
}

ShiftedState frequency_shift(const PropagatingState& s, double p_shift) {
    ShiftedState out;
    out.base = [s](double x, double xd) { return s(x, xd); };
    out.p_shift = p_shift;
    out.Omega = s.Omega - s.params.nu * p_shift;
    out.ell0 = s.ell0;
    out.tunneling = false;
    return out;
}

}  // namespace openlab
