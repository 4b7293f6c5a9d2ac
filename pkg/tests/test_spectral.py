import cmath
import math

import numpy as np
import pytest

from perronlab.operators import cesaro_mean, op
from perronlab.spectral import (
    analyze,
    constrained_eigenspace_dim,
    daec_check,
    daec_check_adjoint,
    dim_estimate_check,
    dim_estimate_check_in_ideal,
    eigen,
    is_cyclic,
    mean_ergodic_projection,
    peripheral_spectrum,
    rational_angle,
    rational_peripheral_point_spectrum,
    resolvent_growth_ratio,
)
from perronlab.lattice import vec

SWAP = op([[0, 1], [1, 0]])


def test_eigen_identity_multiplicities():
    pairs = eigen(op(np.eye(3)))
    assert len(pairs) == 1
    p = pairs[0]
    assert p.value == pytest.approx(1.0)
    assert (p.alg_mult, p.geo_mult, p.pole_order) == (3, 3, 1)


def test_eigen_swap():
    pairs = eigen(SWAP)
    vals = sorted(p.value.real for p in pairs)
    assert vals == pytest.approx([-1.0, 1.0])
    for p in pairs:
        assert (p.alg_mult, p.geo_mult, p.pole_order) == (1, 1, 1)
        v = p.basis[0].entries
        assert np.abs(SWAP.entries @ v - p.value * v).max() <= 1e-10


def test_eigen_defective_block():
    J = op([[1, 1], [0, 1]])
    pairs = eigen(J)
    assert len(pairs) == 1
    p = pairs[0]
    assert (p.alg_mult, p.geo_mult, p.pole_order) == (2, 1, 2)


def test_eigen_clusters_perturbed_jordan():
    # a defective eigenvalue computed in floating point splits into a ring
    # of radius ~eps^(1/m); clustering must reassemble it
    n = 4
    J = np.eye(n)
    for i in range(n - 1):
        J[i, i + 1] = 1.0
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((n, n)))
    pairs = eigen(op(Q @ J @ Q.T))
    assert len(pairs) == 1
    assert pairs[0].alg_mult == n


def test_peripheral_spectrum_band():
    T = op(np.diag([1.0, 0.999999999, 0.5]))
    per = peripheral_spectrum(eigen(T), band_tol=1e-6)
    assert len(per) == 1
    assert per[0].alg_mult == 2  # the two near-1 values cluster together


def test_rational_angle():
    assert rational_angle(math.pi) == pytest.approx(0.5)
    fr = rational_angle(2 * math.pi * 3 / 7)
    assert (fr.numerator, fr.denominator) == (3, 7)
    assert rational_angle(2 * math.pi * (math.sqrt(2) - 1)) is None
    assert rational_angle(0.0) == 0


def test_is_cyclic_verdicts():
    roots4 = [cmath.exp(2j * math.pi * k / 4) for k in range(4)]
    assert is_cyclic(roots4, 1.0).verdict == "cyclic"
    missing = [1.0, 1j]  # closure needs -1 and -i
    res = is_cyclic(missing, 1.0)
    assert res.verdict == "not_cyclic"
    assert res.witness == pytest.approx(-1.0)
    irr = [cmath.exp(2j * math.pi * (math.sqrt(2) - 1))]
    assert is_cyclic(irr, 1.0).verdict == "not_cyclic"
    assert is_cyclic([], 1.0).verdict == "cyclic"
    with pytest.raises(ValueError):
        is_cyclic([0.5], 1.0)


def test_analyze_report_json():
    rep = analyze(SWAP, dim_check=True)
    assert rep.spectral_radius == pytest.approx(1.0)
    assert rep.cyclic.verdict == "cyclic"
    out = rep.to_json()
    assert out["cyclic"]["verdict"] == "cyclic"
    assert all(v["ok"] for v in out["dim_verdicts"])


def test_dim_estimate_check_markov_pass_and_violation():
    assert all(v.ok for v in dim_estimate_check(SWAP))
    # a double (-1)-eigenvalue over a simple fixed space: the dimension at
    # theta = pi exceeds the dimension of its even powers (at 1)
    T = op(np.diag([1.0, -1.0, -1.0]))
    verdicts = dim_estimate_check(T)
    bad = [v for v in verdicts if not v.ok]
    assert bad
    assert all(abs(v.theta - math.pi) <= 1e-9 and v.n % 2 == 0 for v in bad)
    assert all(v.dim_source == 2 and v.dim_target == 1 for v in bad)


def test_constrained_eigenspace_dim():
    T = op(np.diag([1.0, 1.0, 0.5]))
    C = np.array([[1.0, 0.0, 0.0]])
    assert constrained_eigenspace_dim(T, 1.0, C) == 1
    C2 = np.eye(3)[:2]
    assert constrained_eigenspace_dim(T, 1.0, C2) == 0


def test_dim_estimate_check_in_ideal():
    # block diagonal: the ideal generated by the first-block fixed vector
    T = op(np.block([
        [SWAP.entries.real * 0.5 + 0.5 * np.eye(2), np.zeros((2, 1))],
        [np.zeros((1, 2)), np.array([[3.0]])],
    ]))
    x = vec([1.0, 1.0, 0.0])
    verdicts = dim_estimate_check_in_ideal(T, x)
    assert all(v.ok for v in verdicts)
    with pytest.raises(ValueError):
        dim_estimate_check_in_ideal(T, vec([1.0, 2.0, 0.0]))


def test_rational_peripheral_point_spectrum():
    theta = 2 * math.pi * (math.sqrt(2) - 1)
    R = np.array([[math.cos(theta), -math.sin(theta)],
                  [math.sin(theta), math.cos(theta)]])
    T = op(np.block([
        [R, np.zeros((2, 2))],
        [np.zeros((2, 2)), SWAP.entries.real],
    ]))
    vals = rational_peripheral_point_spectrum(eigen(T))
    assert sorted(v.real for v in vals) == pytest.approx([-1.0, 1.0])


def test_mean_ergodic_projection_swap():
    P, msg = mean_ergodic_projection(SWAP)
    assert msg == "ok"
    assert np.allclose(P.entries, 0.5 * np.ones((2, 2)))
    C = cesaro_mean(SWAP, 20000)
    assert np.abs(C.entries - P.entries).max() <= 1e-4


def test_mean_ergodic_projection_absent_for_jordan():
    P, msg = mean_ergodic_projection(op([[1, 1], [0, 1]]))
    assert P is None
    assert "pole order" in msg


def test_mean_ergodic_projection_matches_cesaro_limit():
    rng = np.random.default_rng(5)
    A = rng.dirichlet(np.ones(4), size=4)
    T = op(A)
    P, msg = mean_ergodic_projection(T)
    assert msg == "ok"
    # Cesaro convergence is O(1/n); check proximity and the rate
    e1 = np.abs(cesaro_mean(T, 2000).entries - P.entries).max()
    e2 = np.abs(cesaro_mean(T, 4000).entries - P.entries).max()
    assert e2 <= 1e-3
    assert e2 <= 0.6 * e1
    # projection identities
    assert np.abs(P.entries @ P.entries - P.entries).max() <= 1e-8
    assert np.abs(T.entries @ P.entries - P.entries).max() <= 1e-8


def test_daec_swap_holds_with_witness():
    res = daec_check(SWAP, 1.0, math.pi)
    assert res.verdict == "holds" and res.provable
    z, x = res.witness
    zr = z.entries / z.entries[0]
    assert np.allclose(zr, [1.0, -1.0])
    xr = x.entries.real
    assert xr[0] == pytest.approx(xr[1])
    assert np.all(np.abs(z.entries) <= xr + 1e-10)


def test_daec_adjoint_consistency():
    res = daec_check_adjoint(SWAP, 1.0, math.pi)
    assert res.verdict == "holds"


def test_daec_missing_eigenvalue_raises():
    with pytest.raises(ValueError):
        daec_check(SWAP, 1.0, math.pi / 3)


def test_resolvent_growth_ratio_swap():
    schedule = [1.0 + 2.0 ** (-k) for k in range(1, 15)]
    out, limsup = resolvent_growth_ratio(SWAP, math.pi, schedule)
    assert all(abs(ratio - 1.0) <= 1e-10 for _, ratio in out)
    assert limsup == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValueError):
        resolvent_growth_ratio(SWAP, math.pi, [1.0])


def test_resolvent_growth_ratio_gap_at_angle():
    T = op(np.diag([1.0, 0.5]))
    schedule = [1.0 + 2.0 ** (-k) for k in range(1, 21)]
    _, limsup = resolvent_growth_ratio(T, math.pi, schedule)
    assert limsup <= 0.01
