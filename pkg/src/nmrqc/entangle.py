"""Pseudo-entangled states, separability bounds, and an explicit
product-state decomposition for the two-qubit case.

The point being made: the states an ensemble machine actually reaches are
tiny pure perturbations on the maximally mixed state, and below a known
purity threshold such a state is separable no matter how entangled the
pure part looks. For two qubits the separability is not just an existence
theorem; a concrete mixture over 36 product states can be written down and
checked weight by weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import cat_ket, expand

RESIDUAL_TOL = 1e-9
WEIGHT_TOL = -1e-12


class EntangleError(ValueError):
    """Raised for invalid mixing fractions or malformed input states."""


@dataclass(frozen=True)
class WernerState:
    """Mixture of the maximally mixed state with a pure target state."""

    epsilon: float
    target: np.ndarray
    rho: np.ndarray


@dataclass(frozen=True)
class OvercompleteDecomposition:
    """Weights over the 36 two-qubit product projectors.

    certificate is True only when every weight is nonnegative and the
    weighted sum reproduces the state; negative weights mean this
    particular expansion proves nothing either way about separability.
    """

    p: np.ndarray
    residual: float
    certificate: bool


def werner(epsilon: float, target: np.ndarray | None = None,
           n: int = 2) -> WernerState:
    """(1 - epsilon) part maximally mixed plus epsilon part pure target.

    The default target is the n-qubit cat state (|0...0> + |1...1>)/sqrt 2.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise EntangleError(f"mixing fraction {epsilon} outside [0, 1]")
    ket = cat_ket(n) if target is None else np.asarray(target, dtype=complex)
    dim = 2 ** n
    if ket.shape != (dim,):
        raise EntangleError(f"target must be a length-{dim} ket")
    norm = np.linalg.norm(ket)
    if abs(norm - 1.0) > 1e-9:
        ket = ket / norm
    rho = (1.0 - epsilon) * np.eye(dim) / dim \
        + epsilon * np.outer(ket, ket.conj())
    return WernerState(float(epsilon), ket, rho)


def separability_bounds(n: int) -> dict:
    """Purity thresholds bracketing where entanglement becomes possible.

    Below the first value every state of this form is separable; above the
    second, entangled states of this form exist. The gap in between is not
    resolved by these bounds.
    """
    if n < 1:
        raise EntangleError("need at least one qubit")
    return {
        "always_separable_below": 1.0 / (1.0 + 2.0 ** (2 * n - 1)),
        "entangled_exists_above": 1.0 / (1.0 + 2.0 ** (n / 2.0)),
    }


def epsilon_high_temperature(n: int, polarization: float) -> float:
    """Purity fraction reachable by an n-spin thermal ensemble machine.

    Scales as n/2**n; the prefactor is the Boltzmann polarization of a
    single spin, around one part in 10**4 for protons in typical fields.
    """
    if n < 1:
        raise EntangleError("need at least one qubit")
    if not 0.0 < polarization <= 1.0:
        raise EntangleError(f"polarization {polarization} outside (0, 1]")
    return polarization * n / 2.0 ** n


def separability_crossing(polarization: float, n_max: int = 64) -> int:
    """Smallest n where the thermal purity exceeds the always-separable bound.

    Up to that size the reachable states are provably separable; a scan at
    polarization 1e-4 lands near the often-quoted dozen-or-so qubits.
    """
    for n in range(1, n_max + 1):
        bound = separability_bounds(n)["always_separable_below"]
        if epsilon_high_temperature(n, polarization) > bound:
            return n
    raise EntangleError(f"no crossing found up to {n_max} qubits")


def _six_states() -> list[np.ndarray]:
    s = 1.0 / np.sqrt(2.0)
    return [
        np.array([1.0, 0.0], dtype=complex),
        np.array([0.0, 1.0], dtype=complex),
        np.array([s, s], dtype=complex),
        np.array([s, -s], dtype=complex),
        np.array([s, 1j * s], dtype=complex),
        np.array([s, -1j * s], dtype=complex),
    ]


def overcomplete_basis() -> list[np.ndarray]:
    """All 36 products of the six single-qubit projectors, row-major in (j, k).

    The six underlying states are |0>, |1>, and the four transverse
    superpositions (|0> +- |1>)/sqrt 2 and (|0> +- i|1>)/sqrt 2; together
    they cover each Bloch axis in both directions, summing to 3 times the
    identity.
    """
    kets = _six_states()
    out = []
    for j, k in itertools.product(range(6), range(6)):
        ket = np.kron(kets[j], kets[k])
        out.append(np.outer(ket, ket.conj()))
    return out


def decompose_overcomplete(rho: np.ndarray) -> OvercompleteDecomposition:
    """Expand a two-qubit state over the 36 product projectors.

    Because the 36 projectors are overcomplete rather than orthogonal, the
    weight for beta_jk is the overlap of rho not with beta_jk itself but
    with its dual (beta_j - 1/3)x(beta_k - 1/3); with that pairing the
    weighted sum reproduces rho exactly and the weights sum to the trace.
    All weights nonnegative certifies the state separable by explicit
    construction. Negative weights just mean this expansion is not a
    certificate.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise EntangleError("decomposition is defined for two qubits only")
    if np.linalg.norm(rho - rho.conj().T) > 1e-9:
        raise EntangleError("state must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise EntangleError("state must have unit trace")
    kets = _six_states()
    duals = [np.outer(k, k.conj()) - np.eye(2) / 3.0 for k in kets]
    p = np.empty((6, 6))
    for j, k in itertools.product(range(6), range(6)):
        p[j, k] = np.trace(rho @ np.kron(duals[j], duals[k])).real
    basis = overcomplete_basis()
    recon = sum(w * b for w, b in zip(p.ravel(), basis))
    residual = float(np.linalg.norm(recon - rho))
    if residual > RESIDUAL_TOL:
        raise EntangleError(
            f"reconstruction residual {residual:.2e} exceeds tolerance")
    certificate = bool(np.all(p >= WEIGHT_TOL))
    return OvercompleteDecomposition(p, residual, certificate)


def double_quantum_coefficient(rho: np.ndarray) -> float:
    """Coefficient of the two-spin double-quantum x term in a state.

    Nonzero double-quantum coherence is sometimes misread as entanglement;
    pairing it with a separability certificate shows the two are
    independent facts.
    """
    terms = expand(rho)
    # Pure double-quantum x content carries equal and opposite xx and yy
    # weights, so the average of the two recovers its amplitude.
    return 0.5 * (terms.coefficient("xx") - terms.coefficient("yy"))
