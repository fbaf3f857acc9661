"""Werner states, the overcomplete product decomposition, and separability bounds."""

from __future__ import annotations

import numpy as np
import pytest

from nmrqc.core import basis_ket
from nmrqc.entangle import (
    EntangleError,
    decompose_overcomplete,
    double_quantum_coefficient,
    epsilon_high_temperature,
    overcomplete_basis,
    separability_bounds,
    separability_crossing,
    werner,
)

P_PATTERN = np.array(
    [
        [2, 0, 1, 1, 1, 1],
        [0, 2, 1, 1, 1, 1],
        [1, 1, 2, 0, 1, 1],
        [1, 1, 0, 2, 1, 1],
        [1, 1, 1, 1, 0, 2],
        [1, 1, 1, 1, 2, 0],
    ],
    dtype=float,
) / 36


def test_werner_matrix_one_ninth():
    w = werner(1 / 9)
    want = np.array(
        [[5, 0, 0, 1], [0, 4, 0, 0], [0, 0, 4, 0], [1, 0, 0, 5]], dtype=float
    ) / 18
    np.testing.assert_allclose(w.rho, want, atol=1e-14)
    assert np.trace(w.rho) == pytest.approx(1.0)


def test_werner_epsilon_limits():
    assert np.allclose(werner(0.0).rho, np.eye(4) / 4)
    pure = werner(1.0).rho
    cat = basis_ket("00") + basis_ket("11")
    cat = cat / np.linalg.norm(cat)
    np.testing.assert_allclose(pure, np.outer(cat, cat.conj()), atol=1e-14)


def test_werner_custom_target_is_normalized():
    target = 2.0 * basis_ket("01")
    w = werner(0.5, target=target)
    assert w.rho[1, 1] == pytest.approx(0.5 + 0.5 / 4)


def test_basis_is_36_rank_one_projectors():
    basis = overcomplete_basis()
    assert len(basis) == 36
    for proj in basis:
        np.testing.assert_allclose(proj, proj.conj().T, atol=1e-14)
        assert np.trace(proj) == pytest.approx(1.0)
        vals = np.linalg.eigvalsh(proj)
        assert vals[-1] == pytest.approx(1.0, abs=1e-12)  # rank one


def test_decomposition_reproduces_printed_weights():
    d = decompose_overcomplete(werner(1 / 9).rho)
    np.testing.assert_allclose(d.p, P_PATTERN, atol=1e-12)
    assert d.certificate
    assert d.residual < 1e-12


def test_decomposition_weights_sum_to_trace():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    herm = (a + a.conj().T) / 2
    rho = herm / np.trace(herm).real
    d = decompose_overcomplete(rho)
    assert d.p.sum() == pytest.approx(1.0, abs=1e-10)
    assert d.residual < 1e-9


def test_decomposition_certificate_fails_for_strong_mixing():
    d = decompose_overcomplete(werner(0.9).rho)
    assert not d.certificate
    assert d.p.min() < -0.19


def test_decomposition_validates_input():
    with pytest.raises(EntangleError):
        decompose_overcomplete(np.eye(2) / 2)
    skew = np.eye(4, dtype=complex)
    skew[0, 1] = 1j
    with pytest.raises(EntangleError):
        decompose_overcomplete(skew / np.trace(skew).real)


def test_bounds_two_spins():
    bounds = separability_bounds(2)
    assert bounds["always_separable_below"] == pytest.approx(1 / 9, abs=1e-15)
    assert bounds["entangled_exists_above"] == pytest.approx(1 / 3, abs=1e-15)


def test_bounds_scale_with_size():
    assert separability_bounds(1)["always_separable_below"] == pytest.approx(1 / 3)
    assert separability_bounds(7)["always_separable_below"] == pytest.approx(1 / 8193)
    assert separability_bounds(2)["entangled_exists_above"] == pytest.approx(1 / 3)
    assert separability_bounds(4)["entangled_exists_above"] == pytest.approx(1 / 5)


def test_high_temperature_epsilon():
    assert epsilon_high_temperature(2, 1.0) == pytest.approx(0.5)
    assert epsilon_high_temperature(4, 1e-4) == pytest.approx(2.5e-5)


def test_crossing_size():
    # with realistic polarization the achievable epsilon stays below the
    # entanglement threshold until roughly a dozen spins
    assert separability_crossing(1e-4) == 11
    with pytest.raises(EntangleError):
        separability_crossing(1e-4, n_max=5)


def test_double_quantum_survives_in_separable_mixture():
    # the decomposable Werner state still shows a double-quantum signal
    w = werner(1 / 9)
    assert double_quantum_coefficient(w.rho) == pytest.approx(1 / 18, abs=1e-14)
    assert decompose_overcomplete(w.rho).certificate
