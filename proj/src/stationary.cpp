#include "openlab/stationary.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "openlab/errors.hpp"

namespace openlab {

std::optional<cplx> PropagatingState::try_value(double xd) const {
    const double il2 = 1.0 / (ell_dec * ell_dec);
    cplx base = std::exp(cplx{-0.5 * xd * xd * il2, k_f * xd});
    if (Omega == 0.0) return base;
    if (xd == 0.0) return std::nullopt;
    const double s = -Omega / params.nu;
    cplx pref = std::pow(std::abs(xd) / ell0, s);
    if (xd < 0) pref *= std::exp(cplx{0.0, std::numbers::pi * s});
    return pref * base;
}

cplx PropagatingState::operator()(double, double xd) const {
    auto v = try_value(xd);
    if (!v) throw SingularPoint("propagating state with Omega != 0 is singular at x_d = 0");
    return *v;
}

PropagatingState propagating(const EnvParams& p, double Omega, std::optional<double> ell0) {
    PropagatingState s;
    s.params = p;
    s.Omega = Omega;
    s.ell_dec = decoherence_length(p);
    s.k_f = drift_wavenumber(p);
    s.ell0 = ell0.value_or(s.ell_dec);
    if (!(s.ell0 > 0)) throw DomainError("ell0 must be positive");
    return s;
}

cplx propagating_quadrature_oracle(const EnvParams& p, double Omega, double xd, std::optional<double> ell0) {
    const double nu = p.nu, D = xd2_rate(p);
    if (nu == 0.0) throw SingularLimit("propagating states need nu > 0");
    auto integrand = [&](double y) { return cplx{-Omega - D * y * y, y * p.f / p.hbar} / (nu * y); };
    if (Omega == 0.0) {
        // removable 1/y: integrate the regular part
        auto reg = [&](double y) { return cplx{-D * y, p.f / p.hbar} / nu; };
        return std::exp(integrate(reg, 0.0, xd).value);
    }
    if (xd == 0.0) throw SingularPoint("propagating oracle is singular at x_d = 0");
    PropagatingState s = propagating(p, Omega, ell0);
    const double y0 = xd > 0 ? s.ell0 : -s.ell0;
    cplx anchor = *s.try_value(y0);
    return anchor * std::exp(integrate(integrand, y0, xd).value);
}

double tunneling_exponent(const EnvParams& p, double q, double Omega) {
    const double m = p.m, nu = p.nu;
    return p.d0 * p.hbar * q * q / (2.0 * m * m * nu * nu * nu) - p.f * q / (m * nu * nu) - Omega / nu;
}

double tunneling_level(const EnvParams& p, double q, int n) {
    const double m = p.m, nu = p.nu;
    return p.d0 * p.hbar * q * q / (2.0 * m * m * nu * nu) - p.f * q / (m * nu) - n * nu;
}

GaussianK propagating_wigner(const EnvParams& p) {
    const double l = decoherence_length(p);
    GaussianK g;
    g.center = drift_wavenumber(p);
    g.variance = 1.0 / (l * l);
    g.amplitude = std::sqrt(2.0 * std::numbers::pi) * l;
    return g;
}

double momentum_second_moment(const EnvParams& p) {
    const double kf = drift_wavenumber(p);
    return p.hbar * p.hbar * (inv_ell_dec2(p) + kf * kf);
}

TunnelingState tunneling(const EnvParams& p, double q, double Omega, int n, double a) {
    if (q == 0.0) throw DomainError("tunneling state needs q != 0; use propagating() for q = 0");
    if (p.nu == 0.0) throw SingularLimit("tunneling states need nu > 0");
    if (n < 0) throw DomainError("derivative order n must be >= 0");
    TunnelingState s;
    s.params = p;
    s.q = q;
    s.Omega = Omega;
    s.n = n;
    s.a = a;
    s.ell_dec = decoherence_length(p);
    const double m = p.m, nu = p.nu;
    s.r = m * nu / (p.hbar * q);
    s.p = tunneling_exponent(p, q, Omega);
    s.k = drift_wavenumber(p) - q * (p.d0 - p.d2 * nu * nu) / (2.0 * m * nu * nu);
    return s;
}

cplx TunnelingState::log_value(double x, double xd) const {
    const double il2 = 1.0 / (ell_dec * ell_dec);
    return a + q * x + p * log1p_i(r * xd) + cplx{-0.5 * xd * xd * il2, k * xd};
}

cplx TunnelingState::operator()(double x, double xd) const {
    const cplx e0 = log_value(x, xd);
    if (n == 0) return std::exp(e0);

    // q-derivatives of the exponent E(q), then the complete Bell polynomial Y_n
    const EnvParams& P = params;
    const double m = P.m, nu = P.nu;
    const double A = P.d0 * P.hbar / (2.0 * m * m * nu * nu * nu);
    const double dp = 2.0 * A * q - P.f / (m * nu * nu);
    const double ddp = 2.0 * A;
    const double dk = -(P.d0 - P.d2 * nu * nu) / (2.0 * m * nu * nu);
    const cplx z{q, m * nu / P.hbar * xd};
    const cplx g = log1p_i(r * xd);

    std::vector<cplx> gd(n + 1);  // g^{(j)}, j >= 1
    double fact = 1.0;
    for (int j = 1; j <= n; ++j) {
        if (j > 1) fact *= (j - 1);
        double sgn = (j % 2) ? 1.0 : -1.0;
        gd[j] = sgn * fact * (std::pow(z, -j) - std::pow(q, -j));
    }
    std::vector<cplx> E(n + 1);
    E[1] = x + dp * g + p * gd[1] + I * dk * xd;
    if (n >= 2) E[2] = ddp * g + 2.0 * dp * gd[1] + p * gd[2];
    for (int j = 3; j <= n; ++j) E[j] = 0.5 * j * (j - 1) * ddp * gd[j - 2] + double(j) * dp * gd[j - 1] + p * gd[j];

    std::vector<cplx> Y(n + 1);
    Y[0] = 1.0;
    for (int k1 = 0; k1 < n; ++k1) {
        cplx s{0.0, 0.0};
        double binom = 1.0;
        for (int i = 0; i <= k1; ++i) {
            s += binom * Y[k1 - i] * E[i + 1];
            binom = binom * (k1 - i) / (i + 1);
        }
        Y[k1 + 1] = s;
    }
    return std::exp(e0) * Y[n];
}

cplx tunneling_quadrature_oracle(const EnvParams& p, double q, double Omega, double xd) {
    if (q == 0.0) throw DomainError("tunneling oracle needs q != 0");
    const double m = p.m, hb = p.hbar, nu = p.nu, D = xd2_rate(p);
    const double c0 = Omega - hb * p.d2 * q * q / (2.0 * m * m);
    const double c1 = p.f / hb + q * (p.d2 * nu / m - p.xi);
    auto integrand = [&](double y) { return cplx{c0 + D * y * y, -c1 * y} / cplx{-nu * y, hb * q / m}; };
    return std::exp(integrate(integrand, 0.0, xd).value);
}

TunnelingFlux tunneling_flux(const TunnelingState& s, double x) {
    if (s.n != 0) throw DomainError("tunneling_flux is defined for n = 0 states");
    const EnvParams& P = s.params;
    const double e = std::exp(s.q * x + s.a);
    TunnelingFlux fl;
    fl.p_of_x = (P.hbar * s.q * cplx{P.d2, -P.m} / (2.0 * P.m) - s.Omega * P.m / s.q) * e;
    fl.J_of_x = -e * s.Omega / s.q;
    return fl;
}

StateFn g_limit_states(const ScaledParams& s, LimitMode mode, double q) {
    if (mode == LimitMode::tunneling) return [q](double x, double) { return cplx{std::exp(q * x), 0.0}; };
    if (!(s.tilde_nu > 0 && s.tilde_d0 > 0)) throw DomainError("g-limit Gaussian needs tilde_nu, tilde_d0 > 0");
    const double a = s.tilde_d0 / (4.0 * s.hbar * s.tilde_nu);
    const double kf = s.tilde_f / (s.hbar * s.tilde_nu);
    return [a, kf](double, double xd) { return std::exp(cplx{-a * xd * xd, kf * xd}); };
}

std::string state_descriptor(const PropagatingState& s) {
    nlohmann::ordered_json j;
    j["type"] = "propagating";
    j["Omega"] = s.Omega;
    j["ell0"] = s.ell0;
    j["params_hash"] = params_hash(s.params);
    return j.dump();
}

std::string state_descriptor(const TunnelingState& s) {
    nlohmann::ordered_json j;
    j["type"] = "tunneling";
    j["q"] = s.q;
    j["Omega"] = s.Omega;
    j["n"] = s.n;
    j["a"] = s.a;
    j["params_hash"] = params_hash(s.params);
    return j.dump();
}

}  // namespace openlab
