import numpy as np
import pytest

from qmeter.core import BipartiteState, PureState, random_bipartite
from qmeter.device import (apply_device, bsc_device, make_disturbing, make_ideal,
                           pointer_distribution)
from qmeter.modal import (ascription_comparison, kochen_dieks_context, pointer_misalignment,
                          vermaas_dieks_context)

ALPHA = np.array([np.sqrt(0.5), np.sqrt(0.3), np.sqrt(0.2)])


def ideal_state(alpha=ALPHA):
    return apply_device(make_ideal(len(alpha)), alpha)


def _assert_computational(basis):
    for v in basis:
        assert np.isclose(np.max(np.abs(v)), 1.0, atol=1e-12)


def test_kochen_dieks_ideal():
    kd = kochen_dieks_context(ideal_state())
    _assert_computational(kd.pointer_side_basis)
    np.testing.assert_allclose(kd.probabilities, [0.5, 0.3, 0.2], atol=1e-14)
    assert not kd.degenerate_flag


def test_kochen_dieks_rotates_off_ideal():
    st = apply_device(bsc_device(0.3), PureState.normalized([2, 1]))
    kd = kochen_dieks_context(st)
    assert np.min(np.max(np.abs(kd.pointer_side_basis), axis=1)) < 0.99


def test_kochen_dieks_bell_like_degenerate():
    assert kochen_dieks_context(BipartiteState(np.eye(2) / np.sqrt(2))).degenerate_flag


def test_vermaas_dieks_ideal():
    vd = vermaas_dieks_context(ideal_state())
    _assert_computational(vd.pointer_side_basis)
    np.testing.assert_allclose(vd.probabilities, [0.5, 0.3, 0.2], atol=1e-14)


def test_vermaas_dieks_product_state():
    b = np.zeros((2, 3), complex)
    b[:, 1] = [0.6, 0.8j]
    vd = vermaas_dieks_context(BipartiteState(b))
    np.testing.assert_allclose(vd.probabilities, [1.0])


def test_modal_probabilities_agree(rng):
    for _ in range(30):
        n, m = rng.integers(2, 6, size=2)
        st = random_bipartite(n, m, rng)
        kd, vd = kochen_dieks_context(st), vermaas_dieks_context(st)
        np.testing.assert_allclose(np.sort(kd.probabilities), np.sort(vd.probabilities),
                                   atol=1e-10)
        # the two bases agree vector by vector up to phase in the non-degenerate case
        overlaps = np.abs(kd.pointer_side_basis.conj() @ vd.pointer_side_basis.T)
        np.testing.assert_allclose(np.max(overlaps, axis=1), 1, atol=1e-6)


def test_misalignment_ideal_zero(rng):
    for _ in range(20):
        a = rng.dirichlet(np.ones(4))
        m = pointer_misalignment(ideal_state(np.sqrt(a)))
        assert m.value < 1e-10 and not m.degenerate


def test_misalignment_grows_with_imperfection():
    psi = PureState.normalized([np.sqrt(0.7), np.sqrt(0.3)])
    vals = [pointer_misalignment(apply_device(bsc_device(q), psi)).value
            for q in (0.0, 0.01, 0.1, 0.3)]
    assert vals[0] < 1e-12
    assert 0 < vals[1] < vals[2] < vals[3]
    assert vals[1] < 0.1


def test_misalignment_disturbing_scan():
    psi = PureState.normalized([np.sqrt(0.7), np.sqrt(0.3)])
    vals = []
    for th in np.linspace(0, np.pi / 2, 31):
        dev = make_disturbing(2, [[1, 0], [np.sin(th), np.cos(th)]])
        vals.append(pointer_misalignment(apply_device(dev, psi)).value)
    assert vals[0] < 1e-12
    # fully collapsed disturbance: both inputs land on |a_0>, pointer basis rotates most
    assert np.argmax(vals) == len(vals) - 1
    assert vals[-1] > 0.2


def test_misalignment_flags_degenerate():
    assert pointer_misalignment(BipartiteState(np.eye(2) / np.sqrt(2))).degenerate


def test_ascription_comparison_ideal():
    cmp = ascription_comparison(ideal_state())
    for a in cmp.assignments():
        _assert_computational(a.pointer_side_basis)
        np.testing.assert_allclose(np.sort(a.probabilities)[::-1], [0.5, 0.3, 0.2], atol=1e-14)
    assert cmp.misalignment.value < 1e-10


def test_ascription_comparison_non_ideal():
    st = apply_device(bsc_device(0.3), PureState.normalized([2, 1]))
    cmp = ascription_comparison(st)
    np.testing.assert_allclose(cmp.pointer_basis.probabilities, cmp.collapse.probabilities,
                               atol=1e-15)
    np.testing.assert_allclose(cmp.pointer_basis.probabilities, pointer_distribution(st))
    assert cmp.misalignment.value > 0.1


def test_ascription_eigenstate_one_hot():
    st = apply_device(bsc_device(0.2), PureState.basis(2, 1))
    cmp = ascription_comparison(st)
    np.testing.assert_allclose(cmp.kochen_dieks.probabilities, [1.0])
    np.testing.assert_allclose(cmp.vermaas_dieks.probabilities, [1.0])
    # imperfect device: the eigenstate still spreads over pointer readings
    np.testing.assert_allclose(cmp.pointer_basis.probabilities, [0.2, 0.8], atol=1e-15)
    st = apply_device(make_ideal(2), PureState.basis(2, 1))
    for a in ascription_comparison(st).assignments():
        assert np.isclose(np.max(a.probabilities), 1.0)


def test_contexts_serialize(rng):
    d = ascription_comparison(random_bipartite(2, 3, rng)).as_dict()
    assert set(d["assignments"]) == {"kochen_dieks", "vermaas_dieks", "collapse", "pointer_basis"}
    assert abs(sum(d["assignments"]["collapse"]["probabilities"]) - 1) < 1e-12
