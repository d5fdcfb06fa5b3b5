from __future__ import annotations

import numpy as np
import pytest

from incompat.povm import Assemblage, Povm


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_rank1_povm(d: int, rng: np.random.Generator, label: str = "") -> Povm:
    u = haar_unitary(d, rng)
    return Povm(d, tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(d)), label=label)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (z + z.conj().T) / 2


def random_povm(d: int, n_outcomes: int, rng: np.random.Generator) -> Povm:
    """Random full-rank POVM from normalized positive blocks."""
    blocks = []
    for _ in range(n_outcomes):
        z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        blocks.append(z @ z.conj().T + 1e-3 * np.eye(d))
    total = np.sum(blocks, axis=0)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return Povm(d, tuple(inv_sqrt @ b @ inv_sqrt for b in blocks))


def random_unbiased_qubit_pair(rng: np.random.Generator):
    from incompat.povm import BlochMeasurement

    vecs = rng.normal(size=(2, 3))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    lengths = rng.uniform(0.2, 1.0, size=2)
    return (
        BlochMeasurement(tuple(lengths[0] * vecs[0])),
        BlochMeasurement(tuple(lengths[1] * vecs[1])),
    )


def pair_assemblage(p: Povm, q: Povm) -> Assemblage:
    return Assemblage(p.dim, p.n_outcomes, (p, q))
