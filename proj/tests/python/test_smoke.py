import math

import numpy as np
import pytest

import openlab as ol


def test_reference_scales():
    p = ol.p2()
    assert ol.validate(p) == []
    assert ol.decoherence_length(p) == pytest.approx(1.2649110640673518, rel=1e-14)
    assert ol.drift_wavenumber(ol.p2(f=0.1)) == pytest.approx(0.2)
    assert ol.quantum_temperature(p) == pytest.approx(0.625)


def test_non_lindblad_rejected():
    bad = ol.EnvParams(nu=0.1, d0=0.02, d2=0.05)
    assert ol.validate(bad)
    with pytest.raises(ValueError):
        ol.make_params(bad)
    ol.make_params(bad, allow_non_lindblad=True)


def test_params_json_round_trip():
    p = ol.p2(f=0.1, lam=0.3)
    q = ol.EnvParams.from_json(p.to_json())
    assert q.lam == 0.3 and q.hash() == p.hash()


def test_tunneling_state():
    s = ol.tunneling(ol.p2(), 1.0, 0.0)
    assert (s.r, s.p, s.k) == pytest.approx((0.5, 2.0, -0.75))
    expect = (1 + 0.5j) ** 2 * np.exp(-1 / 3.2 - 0.75j)
    assert abs(s(0.0, 1.0) - expect) < 1e-14
    assert abs(ol.tunneling_quadrature_oracle(ol.p2(), 1.0, 0.0, 1.0) - expect) < 1e-10
    v = s.at([0.0, 1.0], [0.0, 0.0])
    assert np.allclose(v, [1.0, math.e])


def test_grid_eigenrelation():
    p = ol.p2()
    om = ol.tunneling_level(p, 1.0, 1)
    st = ol.tunneling(p, 1.0, om, 1)
    res = []
    for n in (65, 129):
        g = ol.Grid2D(-4, 4, n, 4, n)
        res.append(ol.eigen_residual(g, ol.sample(g, st), p, om))
    assert res[1] < 5e-3
    assert res[0] / res[1] > 3.5


def test_evolve_and_stability():
    p = ol.p2()
    g = ol.Grid2D(-8, 8, 33, 8, 33)
    rho = ol.sample(g, lambda x, xd: np.exp(-x * x / 2 - xd * xd / 8))
    dt = ol.stability_bound(g, p)
    out = ol.evolve(g, rho, p, 0.2, dt)
    assert out.shape == (33, 33)
    assert np.max(np.abs(out - np.conj(out[:, ::-1]))) < 1e-12
    with pytest.raises(ValueError):
        ol.evolve(g, rho, p, 0.2, 10 * dt)


def test_wigner_of_equilibrium():
    p = ol.p2(f=0.1)
    g = ol.Grid2D(-1, 1, 9, 16, 513)
    k, w = ol.wigner(g, ol.sample(g, ol.propagating(p)))
    k = np.asarray(k)
    row = w[4]
    assert abs(k[np.argmax(row)] - 0.2) <= k[1] - k[0]
    ell = ol.decoherence_length(p)
    ref = math.sqrt(2 * math.pi) * ell * np.exp(-0.5 * ell**2 * (k - 0.2) ** 2)
    assert np.max(np.abs(row - ref)) < 1e-6 * ref.max()


def test_spectrum_and_kspace():
    p = ol.p2()
    assert [ol.spectrum(p, 1.0, n) for n in range(3)] == pytest.approx([1.0, 0.5, 0.0], abs=1e-15)
    km = ol.kspace_eigensolve(p, 1.0, 4, extrapolate=True)
    assert km["eigenvalues"] == pytest.approx([1.0, 0.5, 0.0, -0.5], abs=1e-5)
    assert km["sign_changes"][:2] == [0, 1]


def test_packet_and_flow():
    p = ol.p2()
    o = ol.packet_observables(p, 1.0, 0.0)
    assert (o.Dx2, o.Q2) == (1.0, 0.5)
    a, d, k, r = ol.flow(p, 0.8, 0.7, d_i=3.0, t=40.0)
    assert abs(d - 0.625) < 1e-8


def test_bound_state():
    p = ol.p2(lam=0.3)
    assert ol.adiabatic_q(p) == pytest.approx(0.3)
    b = ol.bound_state(p)
    for x in (-2.0, 0.0, 1.5):
        assert abs(b(x, 0.0) - math.exp(-0.3 * abs(x))) < 1e-15


def test_verify_fast_suite():
    rep = ol.verify(ol.p2(), "fast")
    assert rep and all(v["pass"] for v in rep.values())
    assert set(next(iter(rep.values()))) == {"value", "tolerance", "pass"}
