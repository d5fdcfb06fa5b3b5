"""Named measurement families: noisy MUBs, noisy Paulis, phase-basis qutrit
pairs for the Bell scenario, the experimental realization, and the trine."""

from __future__ import annotations

import numpy as np

from .errors import BadVisibility, DimMismatch
from .povm import Assemblage, BlochMeasurement, Povm

OMEGA3 = np.exp(2j * np.pi / 3)


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def basis_povm(vectors, dim: int, label: str = "") -> Povm:
    return Povm(dim, tuple(projector(v) for v in vectors), label=label)


def _mub_vectors(d: int, which: str) -> list[np.ndarray]:
    if d == 3:
        w = OMEGA3
        table = {
            "computational": np.eye(3),
            "fourier": np.array([[1, 1, 1], [1, w, w**2], [1, w**2, w]]) / np.sqrt(3),
            "third": np.array([[w, 1, 1], [1, w, 1], [1, 1, w]]) / np.sqrt(3),
        }
    elif d == 4:
        table = {
            "computational": np.eye(4),
            "fourier": np.array(
                [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]]
            ) / 2,
            "third": np.array(
                [[1, -1, -1j, -1j], [1, -1, 1j, 1j], [1, 1, 1j, -1j], [1, 1, -1j, 1j]]
            ) / 2,
        }
    else:
        raise DimMismatch(f"MUB family defined for d in (3, 4), got {d}")
    if which not in table:
        raise ValueError(f"unknown basis {which!r}; choose from {sorted(table)}")
    return [np.asarray(row, dtype=complex) for row in table[which]]


def noisy_effects(vectors, dim: int, visibility: float) -> tuple[np.ndarray, ...]:
    """White-noise effects nu |v><v| + (1 - nu) I/d."""
    if not 0.0 <= visibility <= 1.0:
        raise BadVisibility(f"visibility {visibility} outside [0, 1]")
    noise = (1.0 - visibility) * np.eye(dim) / dim
    return tuple(visibility * projector(v) + noise for v in vectors)


def make_noisy_mub(d: int, bases, visibility: float) -> Assemblage:
    """Noisy mutually unbiased bases in dimension 3 or 4.

    ``bases`` is an ordered subset of {"computational", "fourier", "third"};
    each becomes one measurement with effects nu |v><v| + (1 - nu) I/d.
    """
    bases = tuple(bases)
    if not bases:
        raise ValueError("need at least one basis")
    povms = tuple(
        Povm(d, noisy_effects(_mub_vectors(d, name), d, visibility), label=name)
        for name in bases
    )
    return Assemblage(d, d, povms)


def make_noisy_pauli(nu0: float, nu1: float, nu2: float) -> Assemblage:
    """Three binary qubit measurements with effects (1 +/- nu_i sigma_i)/2."""
    for nu in (nu0, nu1, nu2):
        if not 0.0 <= nu <= 1.0:
            raise BadVisibility(f"visibility {nu} outside [0, 1]")
    ms = (
        BlochMeasurement((nu0, 0.0, 0.0)).to_povm(),
        BlochMeasurement((0.0, nu1, 0.0)).to_povm(),
        BlochMeasurement((0.0, 0.0, nu2)).to_povm(),
    )
    labeled = tuple(Povm(2, m.effects, label=lab) for m, lab in zip(ms, ("x", "y", "z")))
    return Assemblage(2, 2, labeled)


def phase_vector(t: float) -> np.ndarray:
    """(1, w^t, w^2t)/sqrt(3) with w = exp(2 pi i / 3)."""
    return np.array([1.0, OMEGA3**t, OMEGA3 ** (2 * t)]) / np.sqrt(3)


def make_cglmp(side: str, setting: int) -> Povm:
    """The qutrit phase-basis measurements maximally violating the three-outcome
    Bell test: Alice offsets (0, 1/2), Bob offsets (1/4, -1/4)."""
    if setting not in (1, 2):
        raise ValueError("setting must be 1 or 2")
    if side == "alice":
        alpha = {1: 0.0, 2: 0.5}[setting]
        vectors = [phase_vector(xi + alpha) for xi in range(3)]
    elif side == "bob":
        beta = {1: 0.25, 2: -0.25}[setting]
        vectors = [phase_vector(-eta + beta) for eta in range(3)]
    else:
        raise ValueError("side must be 'alice' or 'bob'")
    return basis_povm(vectors, 3, label=f"{side}{setting}")


def make_experiment_scenario() -> tuple[np.ndarray, tuple[Povm, Povm], tuple[Povm, Povm]]:
    """Entangled-photon realization of the qutrit Bell scenario.

    Basis ordering is fixed so the shared state is diagonal: Alice's basis is
    (+1, +2, -1), Bob's is (-1, -2, +1).  The printed amplitudes are 1.3e-4
    short of unit norm and are renormalized here.
    """
    raw = np.array([0.596, 0.529, 0.604])
    state = np.zeros(9, dtype=complex)
    state[[0, 4, 8]] = raw / np.linalg.norm(raw)

    def alice_vec(offset: float, s: int) -> np.ndarray:
        return np.array([1.0, OMEGA3 ** (s + offset), OMEGA3 ** (2 * (s + offset))]) / np.sqrt(3)

    def bob_vec(offset: float, t: int) -> np.ndarray:
        return np.array([1.0, OMEGA3 ** (-t - offset), OMEGA3 ** (2 * (-t - offset))]) / np.sqrt(3)

    alice = tuple(
        basis_povm([alice_vec(off, s) for s in range(3)], 3, label=f"A{i}")
        for i, off in ((1, 0.25), (2, 0.75))
    )
    bob = tuple(
        basis_povm([bob_vec(off, t) for t in range(3)], 3, label=f"B{j}")
        for j, off in ((1, 0.5), (2, 0.0))
    )
    return state, alice, bob


def make_trine_xyz() -> Assemblage:
    """Three rank-one projective qutrit measurements X, Y, Z (Z computational)."""
    s = 1 / np.sqrt(2)
    x_vecs = [
        np.array([0.5, s, 0.5]),
        np.array([-s, 0.0, s]),
        np.array([0.5, -s, 0.5]),
    ]
    y_vecs = [
        np.array([-0.5j, s, 0.5j]),
        np.array([1j * s, 0.0, 1j * s]),
        np.array([-0.5j, -s, 0.5j]),
    ]
    z_vecs = [np.eye(3)[k] for k in range(3)]
    povms = tuple(
        basis_povm(vecs, 3, label=lab)
        for vecs, lab in ((x_vecs, "X"), (y_vecs, "Y"), (z_vecs, "Z"))
    )
    return Assemblage(3, 3, povms)
