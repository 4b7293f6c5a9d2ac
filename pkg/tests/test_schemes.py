import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perronlab.operators import op
from perronlab.schemes import (
    SchemeKind,
    Verdict,
    apply_weight,
    builtin_scheme,
    check_ws1,
    check_ws2,
    check_ws3,
    convolve,
    monotone_orbit_report,
    numerical_rank,
    pole_order_at,
    weighted_scalar_sum,
    ws_bounded_probe,
)
from perronlab.lattice import vec

ALL_KINDS = [SchemeKind.POWERS, SchemeKind.ABEL_NET, SchemeKind.ABEL_POWERS,
             SchemeKind.CESARO, SchemeKind.EXPONENTIAL]


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_builtin_schemes_satisfy_checks(kind):
    fam = builtin_scheme(kind)
    for s in fam.streams():
        assert check_ws1(s) is Verdict.PASS
        assert check_ws2(s) is Verdict.PASS
    assert check_ws3(fam) in (Verdict.PASS, Verdict.PASS_ON_PREFIX)


def test_check_ws3_flags_constant_columns():
    from perronlab.schemes import CoeffStream, SchemeFamily

    const = CoeffStream(lambda k: 1.0 if k == 0 else 0.0,
                        lambda K: 0.0, "point mass at 0")
    fam = SchemeFamily(tuple(range(8)), lambda j: const)
    assert check_ws3(fam) is Verdict.FAIL


def test_abel_net_coefficients_are_geometric():
    fam = builtin_scheme(SchemeKind.ABEL_NET, {"lambdas": (2.0,)})
    s = fam.stream(2.0)
    ks = np.arange(8)
    assert np.allclose(s.coeffs(7), 0.5 ** (ks + 1))


def test_convolve_is_cauchy_product():
    fam = builtin_scheme(SchemeKind.ABEL_NET, {"lambdas": (2.0, 3.0)})
    s, t = fam.stream(2.0), fam.stream(3.0)
    c = convolve(s, t)
    K = 12
    direct = np.convolve(s.coeffs(K), t.coeffs(K))[: K + 1]
    assert np.allclose(c.coeffs(K), direct)
    assert check_ws1(c, K=60) is Verdict.PASS


def test_apply_weight_reproduces_cesaro():
    T = op([[0, 1], [1, 0]])
    fam = builtin_scheme(SchemeKind.CESARO)
    fT, rep = apply_weight(T, fam.stream(4), K=10)
    assert np.allclose(fT.entries, 0.5 * np.ones((2, 2)))
    assert rep.tail_mass == 0.0
    with pytest.raises(ValueError):
        apply_weight(op([[2.0]]), fam.stream(4), K=10)


def test_ws_bounded_probe_verdicts():
    # symmetric swap: Cesaro means are bounded
    swap = op([[0, 1], [1, 0]])
    fam = builtin_scheme(SchemeKind.CESARO)
    rep = ws_bounded_probe(swap, fam, budget=40)
    assert rep.verdict == "bounded-evidence"
    # Jordan block at 1: Cesaro means grow linearly
    J = op([[1, 1], [0, 1]])
    rep2 = ws_bounded_probe(J, fam, budget=40)
    assert rep2.verdict == "growth-evidence"
    assert rep2.growth_slope == pytest.approx(1.0, abs=0.15)


def test_weighted_scalar_sum_validation():
    fam = builtin_scheme(SchemeKind.CESARO, {"count": 3})
    sums = weighted_scalar_sum(fam, [1.0] * 11, K=10)
    assert np.allclose(sums, 1.0)
    with pytest.raises(ValueError):
        weighted_scalar_sum(fam, [1.0, 0.5] + [1.0] * 9, K=10)
    with pytest.raises(ValueError):
        weighted_scalar_sum(fam, [1.0] * 3, K=10)


def test_monotone_orbit_report():
    T = op([[1.0, 1.0], [0.0, 1.0]])
    x = vec([1.0, 1.0])
    rep = monotone_orbit_report(T, x, N=10)
    assert rep.monotone
    assert not rep.bounded_flag
    with pytest.raises(ValueError):
        monotone_orbit_report(op([[0.5]]), vec([1.0]), N=5)


def test_numerical_rank():
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert numerical_rank(np.eye(3)) == 3
    A = np.outer([1.0, 2, 3], [4.0, 5, 6])
    assert numerical_rank(A) == 1


@pytest.mark.parametrize("m", [1, 2, 3])
def test_pole_order_matches_jordan_block(m):
    n = 4
    J = np.eye(n)
    for i in range(m - 1):
        J[i, i + 1] = 1.0
    J[m:, m:] = np.diag(np.linspace(0.2, 0.5, n - m))
    assert pole_order_at(op(J), 1.0) == m
    with pytest.raises(ValueError):
        pole_order_at(op(J), 5.0)


@settings(deadline=None, max_examples=30)
@given(st.floats(min_value=1.01, max_value=4.0))
def test_abel_stream_normalization_property(lam):
    fam = builtin_scheme(SchemeKind.ABEL_NET, {"lambdas": (lam,)})
    s = fam.stream(lam)
    # geometric series sums to one; prefix + tail bound certificate
    assert check_ws1(s, K=200) is Verdict.PASS
    assert s.coeff(0) == pytest.approx((lam - 1.0) / lam)
