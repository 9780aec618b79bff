#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "openlab/errors.hpp"
#include "openlab/wigner.hpp"

using namespace openlab;

namespace {

double row_misfit(const WignerField& w, std::size_t i, const std::function<double(double)>& ref, bool align) {
    std::vector<cplx> a, b;
    for (std::size_t m = 0; m < w.k.size(); ++m) {
        a.push_back(w.at(i, m));
        b.push_back(ref(w.k[m]));
    }
    const cplx c = align ? align_scalar(a, b) : cplx{1.0};
    double worst = 0, scale = 0;
    for (std::size_t m = 0; m < a.size(); ++m) {
        worst = std::max(worst, std::abs(a[m] - c * b[m]));
        scale = std::max(scale, std::abs(a[m]));
    }
    return worst / scale;
}

}  // namespace

TEST_CASE("gaussian pair and drift center") {
    const Grid2D g = Grid2D::make(-1, 1, 9, 16, 513);
    const double l = 0.9;
    const WignerField w = transform(sample(g, [l](double, double xd) { return cplx{std::exp(-xd * xd / (2 * l * l))}; }));
    CHECK(row_misfit(w, 0, [l](double k) { return std::sqrt(2 * std::numbers::pi) * l * std::exp(-l * l * k * k / 2); },
                     false) < 1e-10);
    CHECK_FALSE(w.boundary_warning);

    const EnvParams p = p2(0.1);
    const WignerField wf = transform(sample(g, propagating(p)));
    CHECK(wf.max_imag() < 1e-10);
    CHECK(row_misfit(wf, g.ix0(), propagating_wigner(p), false) < 1e-6);
    std::size_t best = 0;
    for (std::size_t m = 0; m < wf.k.size(); ++m)
        if (wf.at(g.ix0(), m) > wf.at(g.ix0(), best)) best = m;
    CHECK(std::abs(wf.k[best] - 0.2) <= wf.dk());
}

TEST_CASE("inverse transform round trip") {
    const Grid2D g = Grid2D::make(-2, 2, 17, 10, 257);
    const EnvParams p = p2(0.1);
    const Field2D rho = sample(g, tunneling(p, 0.7, 0.1, 1));
    const Field2D back = inverse_transform(transform(rho));
    double err = 0;
    for (std::size_t i = 0; i < rho.values.size(); ++i) err = std::max(err, std::abs(back.values[i] - rho.values[i]));
    CHECK(err < 1e-8);
}

TEST_CASE("edge warning when rho does not decay") {
    const Grid2D g = Grid2D::make(-1, 1, 9, 2, 33);
    const WignerField w = transform(sample(g, [](double, double) { return cplx{1.0}; }));
    CHECK(w.boundary_warning);
}

TEST_CASE("oscillator map at P2") {
    const OscillatorMap om = oscillator_map(p2(), 1.0, 0.0);
    CHECK(om.E == doctest::Approx(1.25));
    CHECK(om.omega == doctest::Approx(0.5));
    CHECK(om.mu == doctest::Approx(1.6));
    CHECK(om.ell * om.ell == doctest::Approx(0.8));
    CHECK(om.Omega_of_n(2) == doctest::Approx(0.0));
}

TEST_CASE("ground level sits at hbar omega / 2") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < 5) {
        EnvParams p;
        p.d0 = 0.2 + u(rng);
        p.d2 = 0.2 + u(rng);
        p.nu = 0.5 * std::sqrt(2 * p.d0 * p.d2);
        p.f = 0.1 * u(rng);
        const double q = 0.3 + u(rng);
        const OscillatorMap om = oscillator_map(p, q, spectrum(p, q, 0));
        CHECK(om.E == doctest::Approx(0.5 * p.hbar * om.omega).epsilon(1e-12));
        CHECK(2 * om.ell * om.ell * inv_ell_dec2(p) == doctest::Approx(1.0).epsilon(1e-12));
        ++done;
    }
}

TEST_CASE("energy is linear in f") {
    const double q = 0.8, df = 1e-3;
    const double e0 = oscillator_map(p2(0.0), q, 0.1).E, e1 = oscillator_map(p2(df), q, 0.1).E;
    CHECK((e1 - e0) / df == doctest::Approx(-q / 0.5).epsilon(1e-9));
}

TEST_CASE("spectrum") {
    CHECK(spectrum(p2(), 1.0, 0) == doctest::Approx(1.0));
    CHECK(spectrum(p2(), 1.0, 1) == doctest::Approx(0.5));
    CHECK(spectrum(p2(), 1.0, 2) == doctest::Approx(0.0).epsilon(1e-15));
    for (int n = 0; n < 5; ++n) CHECK(spectrum(p2(0.1), 0.7, n) - spectrum(p2(0.1), 0.7, n + 1) == doctest::Approx(0.5));
    CHECK(spectrum(p2(), 1.0, 1) == doctest::Approx(tunneling_level(p2(), 1.0, 1)));
}

TEST_CASE("k-space eigensolve at 512 nodes") {
    const KSpaceModes km = kspace_eigensolve(p2(), 1.0, 4);
    REQUIRE(km.eigenvalues.size() == 4);
    CHECK(km.eigenvalues[0] == doctest::Approx(0.99944319).epsilon(1e-7));
    CHECK(km.eigenvalues[1] == doctest::Approx(0.49913973).epsilon(1e-7));
    CHECK(km.eigenvalues[2] == doctest::Approx(-0.00116354).epsilon(1e-5));
    CHECK(km.eigenvalues[3] == doctest::Approx(-0.50146661).epsilon(1e-7));
    for (int n = 0; n < 4; ++n) CHECK(km.sign_changes[n] == n);
    for (double v : km.eigenvectors[0]) CHECK(v > 0);
    for (std::size_t i = 0; i + 1 < 4; ++i)
        CHECK(km.eigenvalues[i] - km.eigenvalues[i + 1] == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("k-space eigenvalues converge at second order") {
    const KSpaceModes a = kspace_eigensolve(p2(), 1.0, 4, 255), b = kspace_eigensolve(p2(), 1.0, 4, 511);
    for (int n = 0; n < 4; ++n) {
        const double ea = a.eigenvalues[n] - spectrum(p2(), 1.0, n), eb = b.eigenvalues[n] - spectrum(p2(), 1.0, n);
        CHECK(ea / eb == doctest::Approx(4.0).epsilon(0.02));
    }
    const KSpaceModes x = kspace_eigensolve(p2(), 1.0, 4, 512, true);
    CHECK(x.extrapolated);
    for (int n = 0; n < 4; ++n) CHECK(std::abs(x.eigenvalues[n] - spectrum(p2(), 1.0, n)) < 1e-6);
}

TEST_CASE("hermite wigner functions") {
    const EnvParams p = p2();
    const double q = 1.0;
    const Grid2D g = Grid2D::make(-1, 1, 9, 24, 1025);
    const WignerField w = transform(sample(g, tunneling(p, q, spectrum(p, q, 0))));
    CHECK(row_misfit(w, g.ix0(), [&](double k) { return hermite_wigner(p, q, 0, 0.0, k); }, true) < 1e-6);

    const EnvParams pf = p2(0.1);
    const GaussianK w00 = propagating_wigner(pf);
    for (double k : {-0.5, 0.2, 0.9})
        CHECK(hermite_wigner(pf, 1e-9, 0, 0.0, k) / hermite_wigner(pf, 1e-9, 0, 0.0, 0.2) ==
              doctest::Approx(w00(k) / w00(0.2)).epsilon(1e-6));

    const double n00 = oscillator_inner_product(p, q, 0, 0), n22 = oscillator_inner_product(p, q, 2, 2);
    CHECK(std::abs(oscillator_inner_product(p, q, 2, 0)) / std::sqrt(n00 * n22) < 1e-8);
    CHECK(std::abs(oscillator_inner_product(p, q, 3, 1)) < 1e-8 * oscillator_inner_product(p, q, 3, 3));
}

TEST_CASE("frequency shift") {
    const EnvParams p = p2();
    const double q = 1.0, Om = spectrum(p, q, 0);
    const TunnelingState t = tunneling(p, q, Om);
    const ShiftedState id = frequency_shift(t, 0.0);
    CHECK(std::abs(id(0.3, 0.7) - t(0.3, 0.7)) < 1e-15);

    const ShiftedState s = frequency_shift(t, 1.0);
    CHECK(s.Omega == doctest::Approx(spectrum(p, q, 1)));
    const double r1 = eigen_residual(sample(Grid2D::make(-4, 4, 65, 4, 65), s), p, s.Omega);
    const double r2 = eigen_residual(sample(Grid2D::make(-4, 4, 129, 4, 129), s), p, s.Omega);
    CHECK(r1 / r2 > 3.5);

    const PropagatingState ps = propagating(p, 0.0, 1.0);
    const ShiftedState sp = frequency_shift(ps, 1.0);
    CHECK(sp.Omega == doctest::Approx(-p.nu));
    const PropagatingState ref = propagating(p, -p.nu, 1.0);
    const cplx c = sp(0.0, 1.3) / *ref.try_value(1.3);
    for (double xd : {0.4, 2.0, -1.1}) CHECK(std::abs(sp(0.0, xd) - c * *ref.try_value(xd)) < 1e-13);
}
