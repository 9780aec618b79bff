#include "openlab/boundstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "openlab/errors.hpp"

namespace openlab {

double adiabatic_q(const EnvParams& p) {
    if (!(p.lambda > 0.0)) throw DomainError("no bound state for lambda <= 0 (q_d -> 0 is the no-binding limit)");
    return p.lambda * p.m / (p.hbar * p.hbar);
}

Region region_of(double x, double xd) {
    const double xp = x + 0.5 * xd, xm = x - 0.5 * xd;
    if (xp <= 0.0 && xm <= 0.0) return Region::A;
    if (xp >= 0.0 && xm >= 0.0) return Region::C;
    return xp > 0.0 ? Region::B : Region::D;
}

namespace {

using Series2 = std::vector<std::vector<cplx>>;  // c[i][j] of (dx+)^i (dx-)^j, total degree <= N

Series2 zeros(int N) { return Series2(N + 1, std::vector<cplx>(N + 1, cplx{0.0, 0.0})); }

cplx at(const Series2& s, int i, int j) {
    const int N = int(s.size()) - 1;
    if (i < 0 || j < 0 || i + j > N) return {0.0, 0.0};
    return s[i][j];
}

// Taylor coefficients of the n = 0 tunneling state about (x+, x-) = (xp0, xm0)
Series2 taylor_state(const TunnelingState& s, double xp0, double xm0, int N) {
    const double w0 = xp0 - xm0, x0 = 0.5 * (xp0 + xm0);
    const double il2 = 1.0 / (s.ell_dec * s.ell_dec);
    const cplx E0 = s.log_value(x0, w0);

    // exponent along t = dx+ - dx- (x_d = w0 + t)
    std::vector<cplx> g(N + 1, cplx{0.0, 0.0});
    const cplx z = I * s.r / (1.0 + I * s.r * w0);
    cplx zn = 1.0;
    for (int n = 1; n <= N; ++n) {
        zn *= z;
        g[n] = s.p * zn * ((n % 2) ? 1.0 : -1.0) / double(n);
    }
    g[1] += -w0 * il2 + I * s.k;
    if (N >= 2) g[2] += -0.5 * il2;

    std::vector<cplx> h(N + 1, cplx{0.0, 0.0});
    h[0] = 1.0;
    for (int n = 1; n <= N; ++n) {
        cplx acc = 0.0;
        for (int j = 1; j <= n; ++j) acc += double(j) * g[j] * h[n - j];
        h[n] = acc / double(n);
    }

    // H(dx+ - dx-) times exp(q dx+/2) exp(q dx-/2)
    Series2 H = zeros(N);
    for (int i = 0; i <= N; ++i) {
        double binom = 1.0;
        for (int j = 0; i + j <= N; ++j) {
            if (j > 0) binom = binom * double(i + j) / double(j);
            H[i][j] = h[i + j] * binom * ((j % 2) ? -1.0 : 1.0);
        }
    }
    std::vector<double> e(N + 1);
    e[0] = 1.0;
    for (int n = 1; n <= N; ++n) e[n] = e[n - 1] * 0.5 * s.q / double(n);
    Series2 out = zeros(N);
    const cplx c0 = std::exp(E0);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; i + j <= N; ++j) {
            cplx acc = 0.0;
            for (int a = 0; a <= i; ++a)
                for (int b = 0; b <= j; ++b) acc += e[a] * e[b] * H[i - a][j - b];
            out[i][j] = c0 * acc;
        }
    return out;
}

Series2 transpose(const Series2& s) {
    const int N = int(s.size()) - 1;
    Series2 t = zeros(N);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; i + j <= N; ++j) t[j][i] = s[i][j];
    return t;
}

// Continue rows 0 and 1 (in the "main" variable) to all orders with the stationary
// master equation alpha d_mm + gamma d_oo + beta d_mo + Pm d_m + Po d_o + P0 = 0,
// where x_d = w0 + sm * d_main + so * d_other.
struct CKCoefficients {
    cplx alpha, gamma, beta, pm, po, lin;  // lin: coefficient of x_d in P0
    double quad{0.0};                      // coefficient of x_d^2 in P0
    double w0{0.0}, sm{1.0}, so{-1.0};
};

void continue_rows(Series2& b, const CKCoefficients& c) {
    const int N = int(b.size()) - 1;
    std::array<std::array<double, 3>, 3> X{}, X2{};  // x_d and x_d^2
    X[0][0] = c.w0;
    X[1][0] = c.sm;
    X[0][1] = c.so;
    X2[0][0] = c.w0 * c.w0;
    X2[1][0] = 2.0 * c.w0 * c.sm;
    X2[0][1] = 2.0 * c.w0 * c.so;
    X2[2][0] = c.sm * c.sm;
    X2[0][2] = c.so * c.so;
    X2[1][1] = 2.0 * c.sm * c.so;

    auto Fm = [&](int i, int j) { return double(i + 1) * at(b, i + 1, j); };
    auto Fo = [&](int i, int j) { return double(j + 1) * at(b, i, j + 1); };
    for (int n = 0; n + 2 <= N; ++n) {
        for (int j = 0; n + 2 + j <= N; ++j) {
            cplx rest = c.gamma * double((j + 2) * (j + 1)) * at(b, n, j + 2) +
                        c.beta * double((n + 1) * (j + 1)) * at(b, n + 1, j + 1);
            for (int a = 0; a < 3; ++a)
                for (int d = 0; d < 3; ++d) {
                    if (a > n || d > j) continue;
                    if (X[a][d] != 0.0)
                        rest += X[a][d] * (c.pm * Fm(n - a, j - d) + c.po * Fo(n - a, j - d) +
                                           c.lin * at(b, n - a, j - d));
                    if (X2[a][d] != 0.0) rest += c.quad * X2[a][d] * at(b, n - a, j - d);
                }
            b[n + 2][j] = -rest / (c.alpha * double((n + 2) * (n + 1)));
        }
    }
}

struct MasterCoefficients {
    cplx a_pp, a_mm, a_pm, p_p, p_m, lin;
    double quad;
};

MasterCoefficients master_coefficients(const EnvParams& p) {
    const double hb = p.hbar, m = p.m;
    const double c = p.d2 * p.nu / m - p.xi;
    MasterCoefficients mc;
    mc.a_pp = cplx{hb * p.d2 / (2 * m * m), hb / (2 * m)};
    mc.a_mm = cplx{hb * p.d2 / (2 * m * m), -hb / (2 * m)};
    mc.a_pm = hb * p.d2 / (m * m);
    mc.p_p = cplx{-0.5 * p.nu, c};
    mc.p_m = cplx{0.5 * p.nu, c};
    mc.lin = cplx{0.0, p.f / hb};
    mc.quad = -xd2_rate(p);
    return mc;
}

cplx jump_factor_plus(const EnvParams& p) {
    return -(2.0 * p.m * p.lambda / (p.hbar * p.hbar)) / cplx{1.0, -p.d2 / p.m};
}
cplx jump_factor_minus(const EnvParams& p) {
    return -(2.0 * p.m * p.lambda / (p.hbar * p.hbar)) / cplx{1.0, p.d2 / p.m};
}

}  // namespace

cplx BoundStateAC::operator()(double x, double xd) const {
    const Region r = region_of(x, xd);
    if (r == Region::A) return A(x, xd);
    if (r == Region::C) return C(x, xd);
    if (std::abs(xd) >= window)
        throw DomainError("bound state: B/D continuation only valid for |x_d| < " + std::to_string(window));

    const double xp = x + 0.5 * xd, xm = x - 0.5 * xd;
    const MasterCoefficients mc = master_coefficients(params);
    const int N = order;
    if (r == Region::B) {
        Series2 b = taylor_state(A, 0.0, xm, N);
        const cplx J = jump_factor_plus(params);
        for (int j = 0; j + 1 <= N; ++j) b[1][j] += J * b[0][j];
        CKCoefficients c{mc.a_pp, mc.a_mm, mc.a_pm, mc.p_p, mc.p_m, mc.lin, mc.quad, -xm, 1.0, -1.0};
        continue_rows(b, c);
        cplx v = 0.0, pw = 1.0;
        for (int n = 0; n <= N; ++n, pw *= xp) v += b[n][0] * pw;
        return v;
    }
    Series2 b = transpose(taylor_state(A, xp, 0.0, N));
    const cplx J = jump_factor_minus(params);
    for (int j = 0; j + 1 <= N; ++j) b[1][j] += J * b[0][j];
    CKCoefficients c{mc.a_mm, mc.a_pp, mc.a_pm, mc.p_m, mc.p_p, mc.lin, mc.quad, xp, -1.0, 1.0};
    continue_rows(b, c);
    cplx v = 0.0, pw = 1.0;
    for (int n = 0; n <= N; ++n, pw *= xm) v += b[n][0] * pw;
    return v;
}

StateFn BoundStateAC::as_state() const {
    return [s = *this](double x, double xd) { return s(x, xd); };
}

BoundStateAC bound_state(const EnvParams& p) { return bound_state(p, adiabatic_q(p)); }

BoundStateAC bound_state(const EnvParams& p, double q) {
    if (p.f != 0.0) throw UnsupportedConfiguration("bound_state: the closed form has no f term; set f = 0");
    if (!(q > 0.0)) throw DomainError("bound_state needs q > 0");
    BoundStateAC s;
    s.params = p;
    s.q = q;
    s.A = tunneling(p, q, 0.0);
    s.C = tunneling(p, -q, 0.0);
    s.window = 0.25 * decoherence_length(p);
    return s;
}

namespace {

// rho at (x+, x-)
cplx eval_pm(const StateFn& rho, double xp, double xm) { return rho(0.5 * (xp + xm), xp - xm); }

struct QuadrantDerivs {
    cplx dp, dm, dpm;
};

// one-sided second-order differences at the origin from the quadrant (sp, sm)
QuadrantDerivs quadrant_derivs(const StateFn& rho, double sp, double sm, double h) {
    const double w[3] = {-1.5, 2.0, -0.5};
    cplx f[3][3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) f[a][b] = eval_pm(rho, sp * a * h, sm * b * h);
    QuadrantDerivs d{};
    for (int a = 0; a < 3; ++a) {
        d.dp += w[a] * f[a][0];
        d.dm += w[a] * f[0][a];
        for (int b = 0; b < 3; ++b) d.dpm += w[a] * w[b] * f[a][b];
    }
    d.dp *= sp / h;
    d.dm *= sm / h;
    d.dpm *= sp * sm / (h * h);
    return d;
}

ConsistencyReport extrapolate(std::vector<double> hs, std::vector<cplx> raw, double scale) {
    ConsistencyReport r;
    const Extrapolated e = richardson(raw, 2);
    r.value = e.value;
    r.error = e.error;
    r.scale = scale;
    r.h = std::move(hs);
    r.raw = std::move(raw);
    return r;
}

}  // namespace

ConsistencyReport consistency_residual(const StateFn& rho, const EnvParams& p, double h0, int levels) {
    if (levels < 1 || !(h0 > 0)) throw DomainError("consistency_residual needs h0 > 0 and levels >= 1");
    const double K = 2.0 * p.m * p.lambda / (p.hbar * p.hbar);
    const cplx ka = K / cplx{1.0, -p.d2 / p.m}, kc = K / cplx{1.0, p.d2 / p.m};
    std::vector<double> hs;
    std::vector<cplx> raw;
    double scale = 0.0;
    double h = h0;
    for (int l = 0; l < levels; ++l, h *= 0.5) {
        const QuadrantDerivs a = quadrant_derivs(rho, -1.0, -1.0, h);
        const QuadrantDerivs c = quadrant_derivs(rho, 1.0, 1.0, h);
        const cplx ta = a.dpm - ka * a.dm, tc = c.dpm + kc * c.dp;
        hs.push_back(h);
        raw.push_back(ta - tc);
        scale = std::max({std::abs(a.dpm), std::abs(ka * a.dm), std::abs(c.dpm), std::abs(kc * c.dp)});
    }
    return extrapolate(std::move(hs), std::move(raw), scale);
}

ConsistencyReport symmetric_matching_defect(const StateFn& rho, const EnvParams& p, double h0, int levels) {
    if (levels < 1 || !(h0 > 0)) throw DomainError("symmetric_matching_defect needs h0 > 0 and levels >= 1");
    std::vector<double> hs;
    std::vector<cplx> raw;
    double scale = 0.0;
    double h = h0;
    for (int l = 0; l < levels; ++l, h *= 0.5) {
        const QuadrantDerivs a = quadrant_derivs(rho, -1.0, -1.0, h);
        const cplx dx = a.dp + a.dm, dxd = 0.5 * (a.dp - a.dm);
        const cplx lhs = I * (p.d2 / (2.0 * p.m)) * dx;
        hs.push_back(h);
        raw.push_back(lhs - dxd);
        scale = std::max(std::abs(lhs), std::abs(dxd));
    }
    return extrapolate(std::move(hs), std::move(raw), scale);
}

JumpResiduals jump_residuals(const StateFn& rho, const EnvParams& p, double h, std::optional<double> extent) {
    if (!(h > 0)) throw DomainError("jump_residuals needs h > 0");
    double ext = 0.5;
    if (extent) {
        ext = *extent;
    } else if (p.nu > 0.0) {
        try {
            ext = 0.2 * decoherence_length(p);
        } catch (const ValidationError&) {
        }
    }
    const double K = 2.0 * p.m * p.lambda / (p.hbar * p.hbar);
    const double w[3] = {-1.5, 2.0, -0.5};
    JumpResiduals out;
    out.h = h;
    for (int i = 1; i <= 8; ++i) {
        const double s = ext * i / 8.0;
        // across x+ = 0 at x- = -s
        cplx right = 0.0, left = 0.0, r2 = 0.0, l2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            right += w[a] * eval_pm(rho, a * h, -s);
            left -= w[a] * eval_pm(rho, -a * h, -s);
            r2 += w[a] * eval_pm(rho, s, a * h);
            l2 -= w[a] * eval_pm(rho, s, -a * h);
        }
        const cplx jp = (right - left) / h, jm = (r2 - l2) / h;
        out.gap_plus = std::max(out.gap_plus, std::abs(eval_pm(rho, 1e-12, -s) - eval_pm(rho, -1e-12, -s)));
        out.gap_minus = std::max(out.gap_minus, std::abs(eval_pm(rho, s, 1e-12) - eval_pm(rho, s, -1e-12)));
        out.on_plus = std::max(out.on_plus, std::abs(cplx{1.0, -p.d2 / p.m} * jp + K * eval_pm(rho, 0.0, -s)));
        out.on_minus = std::max(out.on_minus, std::abs(cplx{1.0, p.d2 / p.m} * jm + K * eval_pm(rho, s, 0.0)));
    }
    return out;
}

}  // namespace openlab
