import math
import os

import numpy as np
import pytest

import conespec as cs

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(os.path.dirname(HERE))


def tan_x_root():
    lo, hi = 4.0, 4.7
    f = lambda x: math.sin(x) - x * math.cos(x)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_boundary_spectrum_avoids_strip():
    op = cs.ConeOperator.laplace_type(1.5, 8)
    poles = cs.boundary_spectrum(op, 20.0)
    assert min(abs(s.imag) for _, s, _ in poles) == pytest.approx(1.5, abs=1e-10)


def test_first_eigenvalue():
    j = tan_x_root()
    assert cs.bessel_eigenvalues(1.5, 1)[0] == pytest.approx(j * j, rel=1e-12)
    ev = cs.discrete_eigenvalues(cs.ConeOperator.laplace_type(1.5, 0), 0, -12.0, 1000)
    assert ev[0] == pytest.approx(j * j, rel=1e-3)


def test_heat_leading_term():
    terms = cs.fit_heat(cs.ConeOperator.laplace_type(1.5, 8), 1e-4, 2e-2, 41, 3)
    lead = [t for t in terms if t["gamma"] == -1.0 and t["log_power"] == 0][0]
    assert lead["detected"]
    # area of the unit disc over 4 pi
    assert lead["coeff"].real == pytest.approx(0.25, rel=1e-3)


def test_mckean_singer_and_index():
    rng = np.random.default_rng(3)
    b = rng.standard_normal((8, 11)) + 1j * rng.standard_normal((8, 11))
    assert np.allclose(cs.mckean_singer(b, [0.1, 1.0, 10.0]), 3.0, atol=1e-8)
    eta, imag = cs.eta_rank_one(1.0, 0.5, 1.0)
    assert abs(eta - 1.0) < 1e-6 and imag < 1e-6
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    rep = cs.index_rank_one(a + a.conj().T, 1.0, 0.5)
    assert rep["index"] == pytest.approx(-1.0, abs=1e-6)


def test_extended_union_and_errors():
    u = cs.extended_union([(0.0, 0)], [(0.0, 0)], 3.0)
    assert sorted((z.real, k) for z, k in u) == [(0.0, 0), (0.0, 1)]
    with pytest.raises(ValueError):
        cs.eta_rank_one(1.0, 1.0, 1.0)


def test_run_verify(tmp_path):
    code, log = cs.run("verify", os.path.join(ROOT, "configs", "verify.cfg"), str(tmp_path), 7)
    assert code == 0
    assert (tmp_path / "MANIFEST").exists()
    assert "PASS" in log
