import numpy as np
import pytest

from perronlab.fixedspace import (
    am_identity_check,
    extended_markov_operator,
    f_modulus,
    fixed_space_handle,
    is_fixed_space_sublattice,
    no_supremum_witness,
    sup_in_fixed_space,
)
from perronlab.gallery import example_markov_3x3
from perronlab.lattice import vec
from perronlab.operators import op


@pytest.fixture
def handle():
    return fixed_space_handle(example_markov_3x3())


def test_fixed_space_basis(handle):
    assert handle.dim == 2
    B = np.vstack([b.entries.real for b in handle.basis]).T
    for target in ([1.0, 1.0, 1.0], [1.0, 0.0, -1.0]):
        c, *_ = np.linalg.lstsq(B, np.array(target), rcond=None)
        assert np.abs(B @ c - target).max() <= 1e-9


def test_fixed_space_rejects_non_markov():
    with pytest.raises(ValueError):
        fixed_space_handle(op([[0.5, 0.4], [1, 0]]))


def test_sup_in_fixed_space_example(handle):
    f = vec([1, 0, -1])
    neg = vec([-1, 0, 1])
    sup = sup_in_fixed_space(handle, [f, neg])
    assert np.abs(sup.entries.real - 1.0).max() <= 1e-10
    with pytest.raises(ValueError):
        sup_in_fixed_space(handle, [vec([0.0, 1.0, 0.0])])  # not fixed


def test_sup_is_least_upper_bound(handle):
    # the pointwise sup (1, 0, 1) is NOT fixed; the F-sup must strictly
    # dominate it in the middle coordinate
    sup = sup_in_fixed_space(handle, [vec([1, 0, -1]), vec([-1, 0, 1])])
    assert sup.entries.real[1] == pytest.approx(1.0)


def test_f_modulus_norm_identity(handle):
    f = vec([1, 0, -1])
    m = f_modulus(handle, f)
    assert m.norm() == pytest.approx(1.0)
    assert np.allclose(m.entries.real, [1.0, 1.0, 1.0])


def test_am_identity(handle):
    g1 = vec([1.0, 1.0, 1.0])
    g2 = vec([2.0, 1.0, 0.0])  # fixed: T g2 = g2
    rep = am_identity_check(handle, g1, g2)
    assert rep.ok
    assert rep.max_of_norms == pytest.approx(2.0)
    with pytest.raises(ValueError):
        am_identity_check(handle, g1, vec([-1.0, -1.0, -1.0]))


def test_sublattice_detection(handle):
    ok, wit = is_fixed_space_sublattice(handle)
    assert not ok
    assert np.allclose(np.abs(wit.entries.real), [1.0, 0.0, 1.0])
    # a genuinely sublattice fixed space: block identity directions
    T = op([[1, 0, 0], [0, 0.5, 0.5], [0, 0.5, 0.5]])
    ok2, wit2 = is_fixed_space_sublattice(fixed_space_handle(T))
    assert ok2 and wit2 is None


def test_extended_operator_is_markov():
    base = example_markov_3x3()
    E = extended_markov_operator(base, N=8)
    assert E.dim == 3 + 16
    assert np.allclose(E.entries.real.sum(axis=1), 1.0)
    with pytest.raises(ValueError):
        extended_markov_operator(base, N=1)


def test_no_supremum_witness_chain():
    base = example_markov_3x3()
    N = 16
    E = extended_markov_operator(base, N=N)
    h = fixed_space_handle(E)
    f = vec([1, 0, -1])
    chain = no_supremum_witness(h, f, depth=3)
    assert len(chain) == 3
    vals = [step.vector.entries.real for step in chain]
    # strictly decreasing chain of fixed upper bounds
    for a, b in zip(vals, vals[1:]):
        assert np.all(b <= a + 1e-12)
        assert np.min(b - a) < -1e-12
    for step in chain:
        assert step.fixed_residual <= 1e-10
    assert chain[0].decreased_coordinate is None
    assert chain[1].decreased_coordinate == 3 + N
    with pytest.raises(ValueError):
        no_supremum_witness(h, f, depth=N)
    with pytest.raises(ValueError):
        no_supremum_witness(h, f, depth=-1)
