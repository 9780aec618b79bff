#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "openlab/errors.hpp"
#include "openlab/wavepacket.hpp"

using namespace openlab;

TEST_CASE("flow at t = 0 returns the initial values") {
    const FlowInit in{cplx{0.1, 0.0}, cplx{0.4, 0.1}, cplx{0.2, 0.0}, cplx{0.1, 0.05}};
    const FlowParams f = flow(p2(0.1), 0.8, 0.7, in, 0.0);
    CHECK(f.a == in.a_i);
    CHECK(f.d == in.d_i);
    CHECK(f.k == in.k_i);
    CHECK(f.r == in.r_i);
}

TEST_CASE("flow relaxes to equilibrium") {
    const EnvParams p = p2();
    const FlowParams f = flow(p, 0.8, 0.7, FlowInit{0.0, cplx{3.0, -1.0}, 0.5, 0.2}, 20.0 / p.nu);
    CHECK(std::abs(f.d - inv_ell_dec2(p)) < 1e-8);
}

TEST_CASE("r fixed point") {
    const EnvParams p = p2();
    const double q = 0.8, ri = p.m * p.nu / (p.hbar * q);
    for (double t : {0.3, 2.0, 17.0}) CHECK(std::abs(flow(p, q, 1.0, FlowInit{0, 0, 0, ri}, t).r - ri) < 1e-14);
}

TEST_CASE("flow matches the ODE oracle, including xi and f") {
    EnvParams p = p2(0.1);
    p.xi = 0.05;
    const FlowInit in{cplx{0.0, 0.0}, cplx{0.4, 0.1}, cplx{0.2, 0.0}, cplx{0.1, 0.05}};
    for (cplx q : {cplx{0.8, 0.0}, cplx{0.2, 0.5}})
        for (double nt : {0.5, 3.0, 10.0}) {
            const double t = nt / p.nu;
            const FlowParams a = flow(p, q, 0.7, in, t), b = flow_ode_oracle(p, q, 0.7, in, t);
            CHECK(std::abs(a.d - b.d) < 1e-8);
            CHECK(std::abs(a.k - b.k) < 1e-8);
            CHECK(std::abs(a.r - b.r) < 1e-8);
            CHECK(std::abs(a.a - b.a) < 1e-8 * std::max(1.0, std::abs(b.a)));
        }
}

TEST_CASE("literal k(t) differs from the oracle only through xi") {
    EnvParams p = p2();
    const FlowInit in{0.0, 0.4, 0.2, 0.1};
    const double t = 3.0;
    CHECK(std::abs(flow_literal(p, 0.8, 0.7, in, t).k - flow(p, 0.8, 0.7, in, t).k) < 1e-14);
    p.xi = 0.05;
    const cplx dk = flow_literal(p, 0.8, 0.7, in, t).k - flow(p, 0.8, 0.7, in, t).k;
    CHECK(std::abs(dk - (0.8 * p.xi / p.nu) * (1 - std::exp(-2 * p.nu * t))) < 1e-12);
}

TEST_CASE("closed dynamics: constant at q = 0, x_d translation otherwise") {
    EnvParams closed;
    const FlowInit in{0.0, 0.4, 0.2, 0.1};
    const FlowParams f0 = flow_ode_oracle(closed, 0.0, 0.7, in, 5.0);
    CHECK(std::abs(f0.d - 0.4) < 1e-12);
    CHECK(std::abs(f0.k - 0.2) < 1e-12);
    CHECK(std::abs(f0.r - 0.1) < 1e-12);
    // rho(t, x_d) = rho(0, x_d + i hbar q t/m) for the free operator
    const double q = 0.8, t = 0.6;
    const cplx sh = cplx{0.0, q * t};
    const FlowParams f = flow_ode_oracle(closed, q, 0.7, in, t);
    CHECK(std::abs(f.d - 0.4) < 1e-12);
    CHECK(std::abs(f.k - (0.2 + I * 0.4 * sh)) < 1e-12);
    CHECK(std::abs(f.r - 0.1 / (1.0 + I * 0.1 * sh)) < 1e-12);

    const EnvParams p = p2();
    const cplx s1 = flow(p, 0.8, 0.7, in, 40.0).a - flow(p, 0.8, 0.7, in, 39.0).a;
    const cplx s2 = flow(p, 0.8, 0.7, in, 80.0).a - flow(p, 0.8, 0.7, in, 79.0).a;
    CHECK(std::abs(s1 - s2) < 1e-8 * std::abs(s1));
    CHECK(std::abs(s1) > 1e-2);
}

TEST_CASE("plane wave decoherence") {
    const EnvParams p = p2();
    const auto w0 = plane_wave_decoherence(p, 1.0, 0.0);
    CHECK(w0.width_coef == 0.0);
    CHECK(w0.k == doctest::Approx(1.0));
    const auto w = plane_wave_decoherence(p, 1.0, 40.0 / p.nu);
    CHECK(w.width_coef == doctest::Approx(0.5 * 0.625).epsilon(1e-12));
    CHECK(std::abs(w.k) < 1e-15);
}

TEST_CASE("packet observables at t = 0") {
    const PacketObservables o = packet_observables(p2(0.1), 1.3, 0.0);
    CHECK(o.Dx2 == doctest::Approx(1.69));
    CHECK(o.inv_ell_eff2 == doctest::Approx(1 / (2 * 1.69)));
    CHECK(o.k_eff == 0.0);
    CHECK(o.X == 0.0);
    CHECK(o.Q2 == doctest::Approx(0.5 / 1.69));
}

TEST_CASE("packet observables at nu t = 20 (Gaussian-integral values)") {
    const PacketObservables o = packet_observables(p2(), 1.0, 40.0);
    CHECK(o.Dx2 == doctest::Approx(154.0).epsilon(1e-9));
    CHECK(o.inv_ell_eff2 == doctest::Approx(0.617695).epsilon(1e-6));
    CHECK(o.Q2 * 40.0 == doctest::Approx(0.519481).epsilon(1e-5));
    CHECK(o.kappa2 * 40.0 == doctest::Approx(0.389610).epsilon(1e-5));
    const double slope = packet_observables(p2(), 1.0, 40.5).Dx2 - packet_observables(p2(), 1.0, 39.5).Dx2;
    CHECK(slope == doctest::Approx(4.0).epsilon(1e-6));
    const PacketAsymptotes a = packet_asymptotes(p2(), 40.0);
    CHECK(a.Dx2 == doctest::Approx(160.0));
    CHECK(a.Q2 * 40.0 == doctest::Approx(0.5));
    CHECK(a.kappa2 * 40.0 == doctest::Approx(0.375));
}

TEST_CASE("packet observables agree with the Gaussian integral") {
    EnvParams p = p2(0.1);
    p.xi = 0.03;
    for (double t : {0.5, 2.0, 8.0}) {
        const PacketObservables a = packet_observables(p, 1.0, t);
        const PacketFit b = packet_integral_oracle(p, 1.0, t);
        CHECK(b.misfit < 1e-8);
        CHECK(a.Dx2 == doctest::Approx(b.obs.Dx2).epsilon(1e-9));
        CHECK(a.Q2 == doctest::Approx(b.obs.Q2).epsilon(1e-9));
        CHECK(a.kappa2 == doctest::Approx(b.obs.kappa2).epsilon(1e-9));
        CHECK(a.inv_ell_eff2 == doctest::Approx(b.obs.inv_ell_eff2).epsilon(1e-9));
        CHECK(a.X == doctest::Approx(b.obs.X).epsilon(1e-9));
        CHECK(a.k_eff == doctest::Approx(b.obs.k_eff).epsilon(1e-9));
        const cplx pt = packet_integral_density(p, 1.0, t, a.X + 0.3, 0.4);
        CHECK(std::abs(pt / packet_integral_density(p, 1.0, t, a.X, 0.0) - a.density_matrix(a.X + 0.3, 0.4)) < 1e-9);
    }
}

TEST_CASE("closed reference") {
    const ClosedReference r0 = closed_reference(1.0, 0.0, 0.0);
    CHECK(r0.X0 == 0.0);
    CHECK(r0.Dx2_0 == 1.0);
    CHECK(r0.kappa0_2 == 0.0);
    const ClosedReference r1 = closed_reference(1.0, 0.0, 1.0);
    CHECK(r1.Dx2_0 == doctest::Approx(2.0));
    CHECK(r1.kappa0_2 == doctest::Approx(0.5));
    // maximum of kappa0^2 at t = m sigma^2/hbar
    const double s = 1.4, tm = s * s;
    CHECK(closed_reference(s, 0, tm).kappa0_2 > closed_reference(s, 0, 0.99 * tm).kappa0_2);
    CHECK(closed_reference(s, 0, tm).kappa0_2 > closed_reference(s, 0, 1.01 * tm).kappa0_2);
}

TEST_CASE("closed limit via scaled parameters") {
    ScaledParams sp;
    sp.tilde_d0 = 0.5;
    sp.tilde_d2 = 0.5;
    sp.tilde_nu = 0.5;
    sp.g = 1e-3;
    for (double t : {0.5, 1.5, 3.0}) {
        const PacketObservables o = packet_observables(sp.env(), 1.0, t);
        CHECK(std::abs(o.Dx2 - (1 + t * t)) < 1e-3 * (1 + t * t));
        CHECK(std::abs(o.Q2 - t / (1 + t * t)) < 1e-3);
        CHECK(std::abs(o.kappa2 - t / (1 + t * t)) < 1e-3);
        const PacketObservables e = packet_integral_oracle(EnvParams{}, 1.0, t).obs;
        const ClosedReference r = closed_reference(1.0, 0.0, t);
        CHECK(e.Dx2 == doctest::Approx(r.Dx2_0).epsilon(1e-8));
        CHECK(e.kappa2 == doctest::Approx(r.kappa0_2).epsilon(1e-8));
        CHECK(std::abs(e.X - r.X0) < 1e-8);
    }
}

TEST_CASE("the limits g -> 0 and t -> infinity do not commute") {
    ScaledParams sp;
    sp.tilde_d0 = 0.5;
    sp.tilde_d2 = 0.5;
    sp.tilde_nu = 0.5;
    for (double g : {1.0, 0.1, 0.01}) {
        sp.g = g;
        const EnvParams e = sp.env();
        double prev = 0.0;
        for (double nt : {1.0, 10.0, 100.0}) {
            const double t = nt / e.nu;
            // closed-dynamics spreading vs the open long-time law
            const double gap = std::abs((1 + t * t) - packet_observables(e, 1.0, t).Dx2);
            CHECK(gap > prev);
            prev = gap;
        }
        CHECK(prev > 1e3);
    }
}

TEST_CASE("trajectory delay and early-time recoherence") {
    const EnvParams p = p2(0.1);
    const double ts = 1e-3;
    const PacketObservables a = packet_observables(p, 1.0, ts);
    CHECK(a.a_f == doctest::Approx(0.1));
    CHECK(a.X == doctest::Approx(0.5 * a.a_f * ts * ts).epsilon(1e-3));
    const double tl = 100.0;
    const PacketObservables b = packet_observables(p, 1.0, tl);
    CHECK(b.v_f == doctest::Approx(0.2));
    CHECK(std::abs(b.X - b.v_f * (tl - 1 / p.nu)) < 1e-10);

    const double h = 1e-6;
    for (double s : {0.5, 1.0, 2.0}) {
        const double d = (packet_observables(p, s, h).inv_ell_eff2 - packet_observables(p, s, 0).inv_ell_eff2) / h;
        CHECK(d == doctest::Approx((2 * 0.625 - 1 / (s * s)) * p.nu).epsilon(1e-4));
    }
    // sigma^2 < ell_dec^2/2 recoheres first
    CHECK(packet_observables(p, 0.5, 0.1).inv_ell_eff2 < packet_observables(p, 0.5, 0).inv_ell_eff2);
    for (double t : {0.0, 1.0, 10.0, 1e3}) CHECK(std::isfinite(packet_observables(p, 1.0, t).inv_ell_eff2));
}
