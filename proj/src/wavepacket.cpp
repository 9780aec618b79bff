#include "openlab/wavepacket.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "openlab/errors.hpp"

namespace openlab {

namespace {

// Time integrals that stay regular as nu -> 0
struct Kernels {
    double E, E2;  // e^{-nu t}, e^{-2 nu t}
    double e1;     // (1 - E)/nu
    double e2;     // (1 - E^2)/(2 nu)
    double h2n;    // (nu t - 1 + E)/nu^2
    double g3n;    // (2 nu t - 3 + 4E - E^2)/nu^3
    double em1;    // (e^{nu t} - 1)/nu
};

Kernels kernels(double nu, double t) {
    Kernels k{};
    const double x = nu * t;
    k.E = std::exp(-x);
    k.E2 = std::exp(-2.0 * x);
    if (nu == 0.0) {
        k.e1 = t;
        k.e2 = t;
        k.h2n = 0.5 * t * t;
        k.g3n = 2.0 * t * t * t / 3.0;
        k.em1 = t;
        return k;
    }
    k.e1 = one_minus_exp(x) / nu;
    k.e2 = one_minus_exp(2.0 * x) / (2.0 * nu);
    k.h2n = h2(x) / (nu * nu);
    k.g3n = g3(x) / (nu * nu * nu);
    k.em1 = std::expm1(x) / nu;
    return k;
}

cplx r_of_t(const EnvParams& P, cplx q, cplx r_i, const Kernels& K, double t) {
    if (r_i == 0.0) return 0.0;
    const cplx s = P.hbar * q / P.m;
    const cplx den = std::exp(P.nu * t) - r_i * s * K.em1;
    if (std::abs(den) < 1e-14 * std::abs(std::exp(P.nu * t))) {
        cplx ratio = P.nu == 0.0 ? cplx{} : r_i / (r_i - P.m * P.nu / (P.hbar * q));
        double tc = P.nu == 0.0 ? std::real(1.0 / (r_i * s)) : std::log(std::real(ratio)) / P.nu;
        throw PoleError("r(t) has a pole at t = " + std::to_string(tc), tc);
    }
    return r_i / den;
}

}  // namespace

FlowParams flow(const EnvParams& P, cplx q, cplx p, const FlowInit& in, double t) {
    const double m = P.m, hb = P.hbar, D = xd2_rate(P);
    const Kernels K = kernels(P.nu, t);
    const cplx s = hb * q / m;
    const cplx F = P.f / hb + q * (P.d2 * P.nu / m - P.xi);
    FlowParams out;
    out.q = q;
    out.p = p;
    out.init = in;
    out.d = in.d_i * K.E2 + 2.0 * D * K.e2;
    out.k = in.k_i * K.E + F * K.e1 - s * (in.d_i * K.E * K.e1 + D * K.e1 * K.e1);
    out.r = r_of_t(P, q, in.r_i, K, t);
    const cplx lg = in.r_i == 0.0 ? cplx{} : p * std::log(1.0 - in.r_i * s * K.e1);
    out.a = hb * q * q / (4.0 * m * m) * (P.d0 * K.g3n + 2.0 * P.d2 * K.e2 + 2.0 * in.d_i * hb * K.e1 * K.e1) -
            P.f * q / m * K.h2n - in.k_i * s * K.e1 + hb * q * q * P.xi * K.e1 * K.e1 / (2.0 * m) + lg + in.a_i;
    return out;
}

FlowParams flow_literal(const EnvParams& P, cplx q, cplx p, const FlowInit& in, double t) {
    if (P.nu == 0.0) throw SingularLimit("literal flow formulas need nu > 0");
    FlowParams out = flow(P, q, p, in, t);
    const double m = P.m, hb = P.hbar, nu = P.nu, E = std::exp(-nu * t), E2 = E * E;
    const double kf = drift_wavenumber(P);
    out.k = in.k_i * E + kf * (1.0 - E) -
            q / (2.0 * m * nu * nu) *
                (P.d0 * (1.0 - E) * (1.0 - E) - P.d2 * nu * nu * (1.0 - E2) - 2.0 * P.xi * nu * m * (1.0 - E) +
                 2.0 * hb * nu * in.d_i * E * (1.0 - E));
    out.a = hb * q * q / (4.0 * m * m * nu * nu * nu) *
                (P.d0 * (-3.0 + 2.0 * nu * t + 4.0 * E - E2) + P.d2 * nu * nu * (1.0 - E2) +
                 2.0 * in.d_i * hb * nu * (1.0 - 2.0 * E + E2)) +
            P.f * q / (m * m) * (1.0 - t * nu - E) - in.k_i * hb * q / (m * nu) * (1.0 - E) +
            2.0 * m * P.xi * nu * (1.0 - E) * (1.0 - E) +
            p * std::log(1.0 - in.r_i * hb * q / (m * nu) * (1.0 - E)) + in.a_i;
    return out;
}

FlowParams flow_ode_oracle(const EnvParams& P, cplx q, cplx p, const FlowInit& in, double t, double tol) {
    // Substituting the ansatz into the master equation and collecting the
    // (1 + i r x_d)^{-1}, x_d^0, x_d^1 and x_d^2 coefficients gives
    //   r' = -nu r + s r^2
    //   d' = 2D - 2 nu d
    //   k' = -s d - nu k + f/hbar + q (d2 nu/m - xi)
    //   a' = -s (k + p r) + hbar d2 q^2 / (2 m^2)
    // with s = hbar q / m and D the x_d^2 rate.
    using State = std::array<double, 8>;
    const double D = xd2_rate(P), nu = P.nu;
    const cplx s = P.hbar * q / P.m;
    const cplx F = P.f / P.hbar + q * (P.d2 * nu / P.m - P.xi);
    const cplx c0 = P.hbar * P.d2 * q * q / (2.0 * P.m * P.m);
    auto sys = [&](const State& y, State& dy, double) {
        const cplx a{y[0], y[1]}, d{y[2], y[3]}, k{y[4], y[5]}, r{y[6], y[7]};
        (void)a;
        const cplx da = -s * (k + p * r) + c0;
        const cplx dd = 2.0 * D - 2.0 * nu * d;
        const cplx dk = -s * d - nu * k + F;
        const cplx dr = -nu * r + s * r * r;
        dy = {da.real(), da.imag(), dd.real(), dd.imag(), dk.real(), dk.imag(), dr.real(), dr.imag()};
    };
    State y{in.a_i.real(), in.a_i.imag(), in.d_i.real(), in.d_i.imag(),
            in.k_i.real(), in.k_i.imag(), in.r_i.real(), in.r_i.imag()};
    namespace ode = boost::numeric::odeint;
    if (t > 0) {
        auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
        try {
            ode::integrate_adaptive(stepper, sys, y, 0.0, t, std::min(1e-3, t));
        } catch (const std::exception& e) {
            throw IntegratorError(std::string("flow ODE integration failed: ") + e.what());
        }
        for (double v : y)
            if (!std::isfinite(v)) throw IntegratorError("flow ODE integration produced non-finite values");
    }
    FlowParams out;
    out.q = q;
    out.p = p;
    out.init = in;
    out.a = {y[0], y[1]};
    out.d = {y[2], y[3]};
    out.k = {y[4], y[5]};
    out.r = {y[6], y[7]};
    return out;
}

std::vector<cplx> PlaneWaveDecoherence::operator()(const std::vector<double>& xd) const {
    std::vector<cplx> out;
    out.reserve(xd.size());
    for (double y : xd) out.push_back((*this)(y));
    return out;
}

PlaneWaveDecoherence plane_wave_decoherence(const EnvParams& P, double k_i, double t) {
    if (!(P.nu > 0)) throw SingularLimit("plane-wave decoherence curve needs nu > 0");
    PlaneWaveDecoherence w;
    const double E = std::exp(-P.nu * t);
    w.width_coef = xd2_rate(P) / (2.0 * P.nu) * one_minus_exp(2.0 * P.nu * t);
    w.k = k_i * E + drift_wavenumber(P) * one_minus_exp(P.nu * t);
    return w;
}

namespace {

// Coefficients of the packet exponent after the (k+, k-) integral
struct PacketCoefs {
    double A2, beta, B, det, d, E;
    Kernels K;
};

PacketCoefs packet_coefs(const EnvParams& P, double sigma, double t) {
    const double m = P.m, hb = P.hbar, D = xd2_rate(P);
    PacketCoefs c{};
    c.K = kernels(P.nu, t);
    const Kernels& K = c.K;
    c.E = K.E;
    c.A2 = hb / (4.0 * m * m) * (P.d0 * K.g3n + 2.0 * P.d2 * K.e2) + hb * P.xi * K.e1 * K.e1 / (2.0 * m);
    c.beta = hb * K.e1 / m;
    c.B = P.d0 * K.e1 * K.e1 / (2.0 * m) - P.d2 * (1.0 - K.E2) / (2.0 * m) - P.xi * K.e1 + 2.0 * P.xi * K.e2;
    const double s2 = sigma * sigma;
    c.det = s2 * (s2 / 4.0 + c.A2) + c.beta * c.beta / 4.0;
    c.d = 2.0 * D * K.e2;
    return c;
}

}  // namespace

cplx PacketObservables::density_matrix(double x, double xd) const {
    const double u = x - X;
    return std::exp(cplx{-0.5 * xd * xd * inv_ell_eff2 - u * u / Dx2, k_eff * xd + kappa2 * u * xd});
}

double PacketObservables::current(double x, double hbar, double m) const {
    const double u = x - X;
    return hbar / m * (k_eff + Q2 * u) * std::exp(-u * u / Dx2);
}

PacketObservables packet_observables(const EnvParams& P, double sigma, double t) {
    if (!(sigma > 0)) throw DomainError("sigma must be positive");
    const double m = P.m, hb = P.hbar, nu = P.nu;
    const PacketCoefs c = packet_coefs(P, sigma, t);
    const double s2 = sigma * sigma, E = c.E;
    PacketObservables o;
    o.t = t;
    o.sigma = sigma;
    o.a_f = P.f / m;
    o.v_f = nu > 0 ? P.f / (m * nu) : 0.0;
    o.X = P.f / m * c.K.h2n;
    o.Dx2 = 4.0 * c.det / s2;
    o.N = 4.0 * m * m * nu * nu * nu * c.det;
    o.k_eff = P.f / hb * c.K.e1;
    o.kappa2 = (c.beta * E + 2.0 * s2 * c.B) / (4.0 * c.det);
    o.inv_ell_eff2 = c.d + ((s2 / 4.0 + c.A2) * E * E - c.beta * E * c.B - s2 * c.B * c.B) / (2.0 * c.det);
    o.Q2 = o.kappa2 + P.d2 / (m * o.Dx2);

    if (nu > 0) {
        const double om = 1.0 - E, E2 = E * E, om2 = 1.0 - E2, N = o.N;
        const double d0 = P.d0, d2 = P.d2, xi = P.xi;
        o.Q2_literal = m * nu / N * (d0 * s2 * om * om + d2 * nu * nu * s2 + hb * nu * E * om);
        const double nt = nu * t;
        o.inv_ell_eff2_literal =
            1.0 / (2.0 * N * hb * nu) *
            (hb * m * m * s2 * nu * nu * nu * nu + d2 * om2 * nu * nu * nu * (hb * hb + m * m * s2 * s2 * nu * nu) +
             d0 * (om2 * m * m * s2 * s2 * nu * nu * nu + hb * hb * nu * (1.0 - 4.0 * E + E2 * (2.0 * nt - 3.0))) +
             2.0 * d0 * d2 * om2 * hb * s2 * t * nu * nu * nu +
             2.0 * d0 * d0 * hb * s2 * om * (nt - 2.0 + E * (nt + 2.0)) -
             2.0 * m * nu * xi *
                 (hb * hb * nu * om * om + m * m * s2 * s2 * nu * nu * nu * om2 +
                  2.0 * d0 * hb * s2 * om * (nt - 2.0 + E * (nt + 2.0)) - 4.0 * xi * xi * hb * m * m * s2 * nu * nu * om * om));
    }
    return o;
}

cplx packet_integral_density(const EnvParams& P, double sigma, double t, double x, double xd, int nodes) {
    const GaussRule gh = gauss_hermite(nodes);
    const double s2 = sigma * sigma;
    // Exponent coefficients read off flow(): a contains -i beta K Delta and -A2 Delta^2
    // (K = (k+ + k-)/2, Delta = k+ - k-, q = i Delta).
    FlowInit one;
    one.k_i = 1.0;
    const double beta = -(flow(P, 1.0, 0.0, one, t).a - flow(P, 1.0, 0.0, {}, t).a).real();
    const double w = s2 / 4.0 - flow(P, I, 0.0, {}, t).a.real();
    // The integrand is entire in K, so the K contour is shifted by -i beta Delta/(2 sigma^2).
    // That removes the K*Delta coupling and leaves weights e^{-sigma^2 K'^2} and e^{-w_eff Delta^2}.
    const double w_eff = w + beta * beta / (4.0 * s2);
    const double sK = 1.0 / sigma, sD = 1.0 / std::sqrt(w_eff);
    cplx sum{0.0, 0.0};
    for (int iv = 0; iv < nodes; ++iv) {
        const double v = gh.nodes[iv];
        const double Dl = v * sD;
        const cplx q{0.0, Dl};
        for (int iu = 0; iu < nodes; ++iu) {
            const double u = gh.nodes[iu];
            const cplx K = u * sK - I * beta * Dl / (2.0 * s2);
            FlowInit in;
            in.k_i = K;
            const FlowParams fp = flow(P, q, 0.0, in, t);
            const cplx G = -s2 * K * K - s2 * Dl * Dl / 4.0 + fp.a + q * x + I * fp.k * xd - 0.5 * fp.d * xd * xd;
            sum += gh.weights[iu] * gh.weights[iv] * std::exp(G + u * u + v * v);
        }
    }
    return sum * sK * sD / (2.0 * std::numbers::pi);
}

namespace {

PacketObservables fit_packet(const EnvParams& P, double sigma, double t, int nodes, double& misfit) {
    const PacketObservables ref = packet_observables(P, sigma, t);
    const double sx = 0.6 * std::sqrt(ref.Dx2);
    const double sd = 0.3 / std::sqrt(std::max(ref.inv_ell_eff2, 1e-6));
    const double X0 = ref.X;
    const int M = 5;
    std::vector<std::array<double, 2>> pts;
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) pts.push_back({sx * (a - 2) / 2.0, sd * (b - 2) / 2.0});
    const cplx c0 = packet_integral_density(P, sigma, t, X0, 0.0, nodes);
    Eigen::MatrixXcd A(pts.size(), 6);
    Eigen::VectorXcd y(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double dx = pts[k][0], xd = pts[k][1];
        A.row(k) << 1.0, dx, xd, dx * dx, dx * xd, xd * xd;
        y(k) = std::log(packet_integral_density(P, sigma, t, X0 + dx, xd, nodes) / c0);
    }
    Eigen::VectorXcd c = A.colPivHouseholderQr().solve(y);
    misfit = std::sqrt((A * c - y).squaredNorm() / double(pts.size()));
    PacketObservables o = ref;
    o.Dx2 = -1.0 / c(3).real();
    const double dX = c(1).real() * o.Dx2 / 2.0;
    o.X = X0 + dX;
    o.kappa2 = c(4).imag();
    o.k_eff = c(2).imag() + o.kappa2 * dX;
    o.inv_ell_eff2 = -2.0 * c(5).real();
    o.Q2 = o.kappa2 + P.d2 / (P.m * o.Dx2);
    return o;
}

double rel_change(const PacketObservables& a, const PacketObservables& b) {
    auto rc = [](double u, double v) { return std::abs(u - v) / std::max(1e-300, std::max(std::abs(u), std::abs(v))); };
    double r = 0.0;
    r = std::max(r, rc(a.Dx2, b.Dx2));
    r = std::max(r, rc(a.inv_ell_eff2, b.inv_ell_eff2));
    r = std::max(r, std::abs(a.kappa2 - b.kappa2) / std::max(1e-12, std::abs(a.kappa2)));
    r = std::max(r, std::abs(a.X - b.X) / std::max(1.0, std::abs(a.X)));
    r = std::max(r, std::abs(a.k_eff - b.k_eff) / std::max(1e-12, std::abs(a.k_eff) + 1e-3));
    return r;
}

}  // namespace

PacketFit packet_integral_oracle(const EnvParams& P, double sigma, double t, int nodes, bool check_doubling) {
    PacketFit fit;
    fit.obs = fit_packet(P, sigma, t, nodes, fit.misfit);
    if (check_doubling) {
        double m2 = 0.0;
        PacketObservables o2 = fit_packet(P, sigma, t, 2 * nodes, m2);
        fit.node_change = rel_change(fit.obs, o2);
    }
    return fit;
}

ClosedReference closed_reference(double sigma, double k0, double t, double m, double hbar) {
    ClosedReference r;
    const double s2 = sigma * sigma;
    r.X0 = hbar * k0 / m * t;
    r.Dx2_0 = s2 + hbar * hbar * t * t / (m * m * s2);
    r.kappa0_2 = hbar * m * t / (m * m * s2 * s2 + hbar * hbar * t * t);
    const double X = r.X0, D = r.Dx2_0, kap = r.kappa0_2;
    r.j = [=](double x) { return hbar / m * (k0 + kap * (x - X)) * std::exp(-(x - X) * (x - X) / D); };
    return r;
}

PacketAsymptotes packet_asymptotes(const EnvParams& P, double t) {
    PacketAsymptotes a;
    const double m = P.m, hb = P.hbar, nu = P.nu;
    a.Dx2 = 2.0 * hb * P.d0 / (m * m * nu * nu) * t;
    a.Q2 = t > 0 ? m / (2.0 * hb * t) : 0.0;
    a.kappa2 = t > 0 && P.d0 > 0 ? m * (P.d0 - P.d2 * nu * nu) / (2.0 * hb * P.d0 * t) : 0.0;
    return a;
}

}  // namespace openlab
