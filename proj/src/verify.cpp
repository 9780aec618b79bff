#include "openlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>

#include "openlab/boundstate.hpp"
#include "openlab/errors.hpp"
#include "openlab/laplace.hpp"
#include "openlab/liouville.hpp"
#include "openlab/stationary.hpp"
#include "openlab/wavepacket.hpp"
#include "openlab/wigner.hpp"

namespace openlab {

bool VerifyReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

double VerifyReport::worst_ratio() const {
    double w = 0.0;
    for (const auto& c : checks)
        if (!c.minimum && c.tolerance > 0) w = std::max(w, c.value / c.tolerance);
    return w;
}

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& c : checks) {
        nlohmann::ordered_json e;
        if (std::isfinite(c.value))
            e["value"] = c.value;
        else
            e["value"] = nullptr;
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        j[c.name] = e;
    }
    return j.dump(2) + "\n";
}

Suite parse_suite(const std::string& s) {
    if (s == "fast") return Suite::fast;
    if (s == "all") return Suite::all;
    throw DomainError("unknown suite '" + s + "' (expected fast or all)");
}

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Runner {
    VerifyReport& rep;

    // value <= tol passes
    void upper(const std::string& name, double value, double tol) {
        rep.checks.push_back({name, value, tol, std::isfinite(value) && value <= tol});
    }
    // value >= tol passes (convergence ratios)
    void lower(const std::string& name, double value, double tol) {
        rep.checks.push_back({name, value, tol, std::isfinite(value) && value >= tol, true});
    }
    void guarded(const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const ValidationError& e) {
            rep.skipped.push_back(name + ": " + e.what());
        } catch (const NumericalError&) {
            rep.checks.push_back({name, std::nan(""), 0.0, false});
        }
    }
};

Grid2D window_grid(std::size_t n, double half = 4.0) { return Grid2D::make(-half, half, n, half, n); }

double eigen_res(const StateFn& s, const EnvParams& p, double Omega, std::size_t n) {
    return eigen_residual(sample(window_grid(n), s), p, Omega);
}

void model_checks(Runner& R, const EnvParams& p) {
    R.upper("model.lindblad_bound", std::max(0.0, p.m * p.nu - std::sqrt(2.0 * p.d0 * p.d2)), 0.0);
    R.guarded("model.validate_monotone", [&] {
        const std::size_t base = validate(p).violations.size();
        double worse = 0.0;
        for (double s : {0.5, 0.25, 0.0}) {
            EnvParams q = p;
            q.nu *= s;
            if (validate(q).violations.size() > base) worse += 1.0;
        }
        R.upper("model.validate_monotone", worse, 0.0);
    });
    R.guarded("model.scaled_limit", [&] {
        ScaledParams s;
        s.tilde_d0 = p.d0;
        s.tilde_d2 = p.d2;
        s.tilde_nu = p.nu;
        s.hbar = p.hbar;
        s.m = p.m;
        const double lim = limit_decoherence_length(s);
        s.g = 0.01;
        R.upper("model.scaled_limit", std::abs(decoherence_length(s.env()) / lim - 1.0), 1e-6);
    });
}

void stationary_checks(Runner& R, const EnvParams& p) {
    const double q = 1.0;
    for (int n = 0; n <= 3; ++n) {
        const std::string tag = "stationary.eigenrelation.n" + std::to_string(n);
        R.guarded(tag, [&] {
            const double Om = tunneling_level(p, q, n);
            const TunnelingState s = tunneling(p, q, Om, n);
            const double coarse = eigen_res(s, p, Om, 129), fine = eigen_res(s, p, Om, 257);
            R.upper(tag, fine, 5e-3);
            R.lower(tag + ".order", coarse / fine, 3.5);
        });
    }
    R.guarded("stationary.integer_order", [&] {
        double worst = 0.0;
        for (double qq : {0.5, 1.0, -0.7})
            for (int n = 0; n <= 5; ++n)
                worst = std::max(worst, std::abs(tunneling_exponent(p, qq, tunneling_level(p, qq, n)) - n));
        R.upper("stationary.integer_order", worst, 1e-12);
    });
    R.guarded("stationary.translation_covariance", [&] {
        const TunnelingState s = tunneling(p, q, tunneling_level(p, q, 1));
        double worst = 0.0;
        for (double a : {0.3, -1.1})
            for (double x : {-1.0, 0.4})
                for (double xd : {-0.8, 0.0, 1.3}) worst = std::max(worst, rel(s(x + a, xd), std::exp(q * a) * s(x, xd)));
        R.upper("stationary.translation_covariance", worst, 1e-12);
    });
    R.guarded("stationary.derivative_family", [&] {
        const double Om = tunneling_level(p, q, 0), dq = 1e-3;
        double worst = 0.0;
        for (int n = 1; n <= 3; ++n) {
            const TunnelingState hi = tunneling(p, q + dq, Om, n - 1), lo = tunneling(p, q - dq, Om, n - 1);
            const TunnelingState s = tunneling(p, q, Om, n);
            for (double x : {-0.5, 0.7})
                for (double xd : {-1.0, 0.3, 1.5}) {
                    const cplx fd = (hi(x, xd) - lo(x, xd)) / (2.0 * dq);
                    worst = std::max(worst, std::abs(fd - s(x, xd)) / std::max(1.0, std::abs(s(x, xd))));
                }
        }
        R.upper("stationary.derivative_family", worst, 1e-5);
    });
    R.guarded("stationary.propagating_oracle", [&] {
        const PropagatingState s = propagating(p, 0.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double xd = -3.0 + 6.0 * (i + 0.5) / 20.0;
            worst = std::max(worst, std::abs(propagating_quadrature_oracle(p, 0.0, xd) - s(0.0, xd)));
        }
        R.upper("stationary.propagating_oracle", worst, 1e-10);
    });
    R.guarded("stationary.tunneling_oracle", [&] {
        const double Om = tunneling_level(p, q, 0) - 0.3;
        const TunnelingState s = tunneling(p, q, Om);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double xd = -3.0 + 6.0 * (i + 0.5) / 20.0;
            worst = std::max(worst, rel(tunneling_quadrature_oracle(p, q, Om, xd), s(0.0, xd)));
        }
        R.upper("stationary.tunneling_oracle", worst, 1e-10);
    });
    R.guarded("stationary.positivity", [&] {
        const TunnelingState s = tunneling(p, q, 0.0);
        double bad = 0.0;
        for (int i = -40; i <= 40; ++i)
            if (!(s(0.1 * i, 0.0).real() > 0.0)) bad += 1.0;
        R.upper("stationary.positivity", bad, 0.0);
    });
    R.guarded("stationary.momentum_moment", [&] {
        const GaussianK w = propagating_wigner(p);
        const double sd = std::sqrt(w.variance);
        auto mom = [&](int k) {
            return integrate([&](double kk) { return cplx{std::pow(p.hbar * kk, k) * w(kk), 0.0}; },
                             w.center - 12 * sd, w.center + 12 * sd)
                .value.real();
        };
        R.upper("stationary.momentum_moment", std::abs(mom(2) / mom(0) / momentum_second_moment(p) - 1.0), 1e-8);
    });
}

void liouville_checks(Runner& R, const EnvParams& p, Suite suite) {
    R.guarded("liouville.linearity", [&] {
        const Grid2D g = window_grid(65);
        const Field2D a = sample(g, tunneling(p, 1.0, 0.0));
        const Field2D b = sample(g, [](double x, double xd) { return std::exp(cplx{-x * x - xd * xd, 0.5 * xd}); });
        Field2D c(g);
        const cplx al{0.7, -0.2}, be{-1.3, 0.4};
        for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] = al * a.values[i] + be * b.values[i];
        const Field2D La = apply_liouvillian(a, p), Lb = apply_liouvillian(b, p), Lc = apply_liouvillian(c, p);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < c.values.size(); ++i) {
            worst = std::max(worst, std::abs(Lc.values[i] - al * La.values[i] - be * Lb.values[i]));
            scale = std::max(scale, std::abs(Lc.values[i]));
        }
        R.upper("liouville.linearity", worst / scale, 1e-11);
    });
    R.guarded("liouville.real_spectrum_probe", [&] {
        double worst = 0.0;
        for (int n = 0; n <= 2; ++n) {
            const double Om = tunneling_level(p, 1.0, n);
            worst = std::max(worst, std::abs(spectrum_imag_probe(sample(window_grid(257), tunneling(p, 1.0, Om, n)), p)));
        }
        R.upper("liouville.real_spectrum_probe", worst, 1e-8);
    });
    R.guarded("liouville.current_tunneling_equilibrium", [&] {
        const CurrentPair cp = density_and_currents(sample(window_grid(257), tunneling(p, 1.0, 0.0)), p);
        double worst = 0.0, nmax = 0.0;
        for (std::size_t i = 1; i + 1 < cp.x.size(); ++i) {
            worst = std::max(worst, std::abs(cp.J[i]));
            nmax = std::max(nmax, cp.n[i]);
        }
        R.upper("liouville.current_tunneling_equilibrium", worst / nmax, 1e-3);
    });
    if (suite != Suite::all) return;

    R.guarded("liouville.hermiticity_preservation", [&] {
        const PacketObservables o = packet_observables(p, 1.0, 0.0);
        const Grid2D g = Grid2D::make(-8, 8, 129, 8, 129);
        Field2D rho = sample(g, [&](double x, double xd) { return o.density_matrix(x, xd); });
        double worst = 0.0;
        EvolveOptions opt;
        opt.store = false;
        opt.stride = 10;
        opt.observer = [&](double, const Field2D& f) { worst = std::max(worst, f.hermiticity_defect()); };
        evolve(rho, p, 1.0 / p.nu, 0.9 * stability_bound(g, p), opt);
        R.upper("liouville.hermiticity_preservation", worst, 1e-10);
    });
    R.guarded("liouville.continuity", [&] {
        const PacketObservables o = packet_observables(p, 1.0, 0.0);
        auto run = [&](std::size_t n) {
            const Grid2D g = Grid2D::make(-12, 12, n, 12, n);
            ContinuityMonitor mon(p);
            EvolveOptions opt;
            opt.store = false;
            opt.observer = [&](double t, const Field2D& f) { mon.push(t, f); };
            const double tend = 2.0 / p.nu;
            const double dt = std::min(0.9 * stability_bound(g, p), tend / 400.0);
            opt.stride = 1;
            evolve(sample(g, [&](double x, double xd) { return o.density_matrix(x, xd); }), p, tend, dt, opt);
            return mon.report().value;
        };
        const double coarse = run(129), fine = run(257);
        R.upper("liouville.continuity", fine, 1e-3);
        R.lower("liouville.continuity.order", coarse / fine, 3.5);
    });
    R.guarded("liouville.plane_wave_decoherence", [&] {
        const double ki = 1.0, tend = 2.0;
        const Grid2D g = Grid2D::make(-4, 4, 17, 8, 1025);
        Field2D rho = sample(g, [&](double, double xd) { return std::exp(cplx{0.0, ki * xd}); });
        EvolveOptions opt;
        opt.store = false;
        opt.stride = 1u << 30;
        Field2D last;
        opt.observer = [&](double, const Field2D& f) { last = f; };
        evolve(rho, p, tend, 0.5 * stability_bound(g, p), opt);
        const PlaneWaveDecoherence ref = plane_wave_decoherence(p, ki, tend);
        double worst = 0.0;
        const std::size_t i = g.ix0();
        for (std::size_t j = 0; j < g.nxd; ++j) {
            const double xd = g.xd(j);
            if (std::abs(xd) > 4.0) continue;
            worst = std::max(worst, std::abs(last.at(i, j) - ref(xd)));
        }
        R.upper("liouville.plane_wave_decoherence", worst, 1e-4);
    });
}

void wavepacket_checks(Runner& R, const EnvParams& p, Suite suite) {
    R.guarded("wavepacket.flow_vs_ode", [&] {
        const FlowInit in{cplx{0.0, 0.0}, cplx{0.4, 0.1}, cplx{0.2, 0.0}, cplx{0.1, 0.05}};
        double worst = 0.0;
        for (cplx q : {cplx{0.8, 0.0}, cplx{0.0, 0.6}, cplx{0.5, -0.3}})
            for (int i = 0; i <= 10; ++i) {
                const double t = i / p.nu;
                const FlowParams a = flow(p, q, 0.7, in, t), b = flow_ode_oracle(p, q, 0.7, in, t);
                worst = std::max({worst, std::abs(a.d - b.d), std::abs(a.k - b.k), std::abs(a.r - b.r)});
            }
        R.upper("wavepacket.flow_vs_ode", worst, 1e-8);
    });
    R.guarded("wavepacket.packet_oracle", [&] {
        double worst = 0.0;
        for (double t : {0.5, 3.0, 10.0}) {
            const PacketObservables a = packet_observables(p, 1.0, t);
            const PacketObservables b = packet_integral_oracle(p, 1.0, t).obs;
            for (auto [x, y] : {std::pair{a.Dx2, b.Dx2}, {a.Q2, b.Q2}, {a.kappa2, b.kappa2},
                                {a.inv_ell_eff2, b.inv_ell_eff2}, {a.X, b.X}, {a.k_eff, b.k_eff}})
                worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(y)));
        }
        R.upper("wavepacket.packet_oracle", worst, 1e-9);
    });
    R.guarded("wavepacket.recoherence_slope", [&] {
        double worst = 0.0;
        const double il = inv_ell_dec2(p);
        for (double s : {0.5, 1.0, 2.0}) {
            const double h = 1e-5 / p.nu;
            const double a = packet_observables(p, s, 0).inv_ell_eff2, b = packet_observables(p, s, h).inv_ell_eff2,
                         c = packet_observables(p, s, 2 * h).inv_ell_eff2;
            worst = std::max(worst, std::abs((-3 * a + 4 * b - c) / (2 * h) - (2 * il - 1 / (s * s)) * p.nu));
        }
        R.upper("wavepacket.recoherence_slope", worst, 1e-6);
    });
    R.guarded("wavepacket.decoherence_saturation", [&] {
        const double v = packet_observables(p, 1.0, 2000.0 / p.nu).inv_ell_eff2;
        R.upper("wavepacket.decoherence_saturation", std::abs(v / inv_ell_dec2(p) - 1.0), 1e-2);
    });
    EnvParams pf = p;
    if (pf.f == 0.0) pf.f = 0.1;
    R.guarded("wavepacket.trajectory", [&] {
        const double ts = 1e-3 / pf.nu;
        const PacketObservables a = packet_observables(pf, 1.0, ts);
        R.upper("wavepacket.trajectory_short", std::abs(a.X / (0.5 * a.a_f * ts * ts) - 1.0), 1e-3);
        const double tl = 50.0 / pf.nu;
        const PacketObservables b = packet_observables(pf, 1.0, tl);
        R.upper("wavepacket.trajectory_long", std::abs(b.X - b.v_f * (tl - 1.0 / pf.nu)), 1e-8);
    });
    R.guarded("wavepacket.current_form", [&] {
        const double t = 1.0 / pf.nu;
        const PacketObservables o = packet_observables(pf, 1.0, t);
        const double half = std::ceil(std::abs(o.X) + 4.0 * std::sqrt(o.Dx2));
        const double xdh = std::max(8.0, 8.0 / std::sqrt(o.inv_ell_eff2));
        const Grid2D g = Grid2D::make(-half, half, 1025, xdh, 2049);
        const CurrentPair cp = density_and_currents(sample(g, [&](double x, double xd) { return o.density_matrix(x, xd); }), pf);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 1; i + 1 < cp.x.size(); ++i) {
            worst = std::max(worst, std::abs(cp.J[i] - o.current(cp.x[i], pf.hbar, pf.m)));
            scale = std::max(scale, std::abs(o.current(cp.x[i], pf.hbar, pf.m)));
        }
        R.upper("wavepacket.current_form", worst / scale, 1e-4);
    });
    if (suite != Suite::all) return;
    R.guarded("wavepacket.oracle_node_doubling", [&] {
        double worst = 0.0;
        for (double t : {1.0, 10.0}) worst = std::max(worst, packet_integral_oracle(p, 1.0, t, 64, true).node_change);
        R.upper("wavepacket.oracle_node_doubling", worst, 1e-9);
    });
}

void wigner_checks(Runner& R, const EnvParams& p) {
    R.guarded("wigner.propagating", [&] {
        const Grid2D g = Grid2D::make(-1, 1, 9, 16, 513);
        const Field2D rho = sample(g, propagating(p, 0.0));
        const WignerField w = transform(rho);
        const GaussianK ref = propagating_wigner(p);
        double worst = 0.0, rt = 0.0;
        for (std::size_t m = 0; m < w.k.size(); ++m) worst = std::max(worst, std::abs(w.at(g.ix0(), m) - ref(w.k[m])));
        R.upper("wigner.real_valuedness", w.max_imag(), 1e-10);
        R.upper("wigner.propagating", worst / ref.amplitude, 1e-6);
        const Field2D back = inverse_transform(w);
        for (std::size_t i = 0; i < rho.values.size(); ++i) rt = std::max(rt, std::abs(back.values[i] - rho.values[i]));
        R.upper("wigner.round_trip", rt, 1e-8);
    });
    R.guarded("wigner.oscillator", [&] {
        const OscillatorMap om = oscillator_map(p, 1.0, tunneling_level(p, 1.0, 0));
        R.upper("wigner.gaussian_center_identity",
                std::abs(2.0 * om.ell * om.ell * inv_ell_dec2(p) - 1.0), 1e-12);
        R.upper("wigner.ground_energy", std::abs(om.E - 0.5 * p.hbar * om.omega), 1e-12);
        const double n00 = oscillator_inner_product(p, 1.0, 0, 0), n22 = oscillator_inner_product(p, 1.0, 2, 2);
        R.upper("wigner.orthogonality", std::abs(oscillator_inner_product(p, 1.0, 2, 0)) / std::sqrt(n00 * n22), 1e-8);
    });
    R.guarded("wigner.hermite_vs_transform", [&] {
        const double q = 1.0, Om = tunneling_level(p, q, 0);
        const Grid2D g = Grid2D::make(-1, 1, 9, 24, 1025);
        const WignerField w = transform(sample(g, tunneling(p, q, Om)));
        std::vector<cplx> a, b;
        for (std::size_t m = 0; m < w.k.size(); ++m) {
            a.push_back(w.at(g.ix0(), m));
            b.push_back(hermite_wigner(p, q, 0, 0.0, w.k[m]));
        }
        const cplx c = align_scalar(a, b);
        double worst = 0.0, scale = 0.0;
        for (std::size_t m = 0; m < a.size(); ++m) {
            worst = std::max(worst, std::abs(a[m] - c * b[m]));
            scale = std::max(scale, std::abs(a[m]));
        }
        R.upper("wigner.hermite_vs_transform", worst / scale, 1e-6);
    });
    R.guarded("wigner.nondegenerate", [&] {
        const KSpaceModes km = kspace_eigensolve(p, 1.0, 4);
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < km.eigenvalues.size(); ++i)
            worst = std::max(worst, std::abs((km.eigenvalues[i] - km.eigenvalues[i + 1]) / p.nu - 1.0));
        R.upper("wigner.nondegenerate", worst, 0.05);
        R.upper("wigner.ground_sign_changes", double(km.sign_changes[0]), 0.0);
    });
    R.guarded("wigner.frequency_shift", [&] {
        const double q = 1.0, Om = tunneling_level(p, q, 0);
        const ShiftedState s = frequency_shift(tunneling(p, q, Om), 1.0);
        R.upper("wigner.frequency_shift", eigen_res(s, p, s.Omega, 257), 5e-3);
    });
}

void laplace_checks(Runner& R, const EnvParams& p) {
    R.guarded("laplace.derivative_family", [&] {
        const double q0 = 1.0, Om = tunneling_level(p, q0, 0) - 0.2, q = 1.7;
        const TunnelingState r0 = tunneling(p, q0, Om), r1 = tunneling(p, q0, Om, 1);
        BoundaryData bd;
        bd.rho0 = [&](double y) { return r1(0.0, y); };
        bd.rho1 = [&](double y) { return r0(0.0, y) + q0 * r1(0.0, y); };
        const XdSolution sol = solve_xd_ode(bd, p, q, Om, 1.0 / ((q - q0) * (q - q0)));
        double worst = 0.0;
        for (double y : {-2.0, -0.7, 0.4, 1.5, 2.5}) {
            const cplx ex = r0(0.0, y) / ((q - q0) * (q - q0)) + r1(0.0, y) / (q - q0);
            worst = std::max(worst, std::abs(sol(y) - ex) / std::abs(ex));
        }
        R.upper("laplace.derivative_family", worst, 1e-8);
    });
    R.guarded("laplace.reconstruction", [&] {
        const double q0 = 1.0, Om = 0.0;
        const StateFn s = reconstruction_state({0.7}, p, q0, Om);
        double worst = 0.0;
        for (double x : {-2.0, -0.5, 0.0, 0.8, 2.0})
            worst = std::max(worst, rel(s(x, 0.0), (1.0 + 0.7 * x) * std::exp(q0 * x)));
        R.upper("laplace.reconstruction_boundary", worst, 1e-12);
        const std::vector<double> k1{0.3, -0.2}, k2{-0.1, 0.5};
        double lin = 0.0;
        for (double x : {-1.0, 0.6})
            for (double xd : {-0.9, 1.2}) {
                const cplx sum = polynomial_reconstruction({0.2, 0.3}, p, q0, Om, x, xd) - tunneling(p, q0, Om)(x, xd);
                const cplx parts = polynomial_reconstruction(k1, p, q0, Om, x, xd) +
                                   polynomial_reconstruction(k2, p, q0, Om, x, xd) - 2.0 * tunneling(p, q0, Om)(x, xd);
                lin = std::max(lin, std::abs(sum - parts) / std::abs(sum));
            }
        R.upper("laplace.linearity", lin, 1e-13);
        R.upper("laplace.reconstruction_eigenrelation", eigen_res(s, p, Om, 257), 5e-3);
    });
}

void boundstate_checks(Runner& R, const EnvParams& p0) {
    EnvParams p = p0;
    p.f = 0.0;
    if (p.lambda <= 0.0) p.lambda = 0.3;
    R.guarded("boundstate.consistency", [&] {
        const StateFn s = bound_state(p).as_state();
        const ConsistencyReport c = consistency_residual(s, p);
        R.upper("boundstate.consistency", c.relative(), 1e-6);
        EnvParams p2 = p;
        p2.lambda *= 2.0;
        R.upper("boundstate.lambda_independence", std::abs(consistency_residual(s, p2).value - c.value), 1e-10);
        R.upper("boundstate.symmetric_matching", symmetric_matching_defect(s, p).relative(), 1e-6);
        const JumpResiduals a = jump_residuals(s, p, 2e-3), b = jump_residuals(s, p, 1e-3);
        R.lower("boundstate.jump_refinement", a.on_plus / b.on_plus, 3.5);
        // region interiors see no delta lines
        EnvParams pl = p;
        pl.lambda = 0.0;
        const double qd = adiabatic_q(p);
        const double ra = eigen_res(tunneling(p, qd, 0.0), pl, 0.0, 129), rb = eigen_res(tunneling(p, qd, 0.0), pl, 0.0, 257);
        const double rc = eigen_res(tunneling(p, -qd, 0.0), pl, 0.0, 129), rd = eigen_res(tunneling(p, -qd, 0.0), pl, 0.0, 257);
        R.lower("boundstate.master_residual_order", std::min(ra / rb, rc / rd), 3.5);
    });
    R.guarded("boundstate.textbook_jump", [&] {
        EnvParams pc;
        pc.hbar = p.hbar;
        pc.m = p.m;
        pc.lambda = p.lambda;
        const double qd = adiabatic_q(pc);
        StateFn f = [qd](double x, double xd) {
            return cplx{std::exp(-qd * std::abs(x + 0.5 * xd) - qd * std::abs(x - 0.5 * xd)), 0.0};
        };
        const JumpResiduals j = jump_residuals(f, pc, 1e-3);
        R.upper("boundstate.textbook_jump", std::max(j.on_plus, j.on_minus), 1e-5);
    });
}

}  // namespace

VerifyReport run_verify(const EnvParams& p, Suite suite) {
    VerifyReport rep;
    Runner R{rep};
    model_checks(R, p);
    stationary_checks(R, p);
    liouville_checks(R, p, suite);
    wavepacket_checks(R, p, suite);
    wigner_checks(R, p);
    laplace_checks(R, p);
    boundstate_checks(R, p);
    return rep;
}

}  // namespace openlab
