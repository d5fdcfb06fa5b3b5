"""POVM data model: single measurements, assemblages, and validation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch
from .linalg import as_complex_matrix, eigvalsh, herm_residual
from .tolerances import HERM_TOL, PSD_TOL

#: Max entry-wise deviation of the effect sum from the identity.
COMPLETENESS_TOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Povm:
    """A positive operator-valued measure: effects indexed by outcome."""

    dim: int
    effects: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise DimMismatch("dim must be positive")
        effects = tuple(_frozen(as_complex_matrix(e)) for e in self.effects)
        if not effects:
            raise DimMismatch("a POVM needs at least one effect")
        for e in effects:
            if e.shape != (self.dim, self.dim):
                raise DimMismatch(f"effect shape {e.shape} != ({self.dim}, {self.dim})")
        object.__setattr__(self, "effects", effects)

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    def effect_sum(self) -> np.ndarray:
        return np.sum(self.effects, axis=0)


def validate_povm(p: Povm, psd_tol: float = PSD_TOL) -> list[str]:
    """Return the list of violated POVM invariants (empty iff valid)."""
    report: list[str] = []
    for z, e in enumerate(p.effects):
        resid = herm_residual(e)
        if resid > HERM_TOL:
            report.append(f"effect {z}: Hermiticity residual {resid:.3e}")
            continue
        low = float(eigvalsh(e)[0])
        if low < -psd_tol:
            report.append(f"effect {z}: positivity violated, min eigenvalue {low:.3e}")
    dev = float(np.max(np.abs(p.effect_sum() - np.eye(p.dim))))
    if dev > COMPLETENESS_TOL:
        report.append(f"completeness violated: max |sum - identity| = {dev:.3e}")
    return report


@dataclass(frozen=True)
class Assemblage:
    """A finite family of POVMs sharing one dimension and one outcome count."""

    dim: int
    n_outcomes: int
    povms: tuple[Povm, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.povms:
            raise DimMismatch("an assemblage needs at least one measurement")
        for p in self.povms:
            if p.dim != self.dim:
                raise DimMismatch("all measurements must share the dimension")
            if p.n_outcomes != self.n_outcomes:
                raise DimMismatch("all measurements must share the outcome count (pad first)")

    @property
    def n_measurements(self) -> int:
        return len(self.povms)

    def effect(self, z: int, x: int) -> np.ndarray:
        return self.povms[x].effects[z]

    def validate(self) -> list[str]:
        report: list[str] = []
        for x, p in enumerate(self.povms):
            report.extend(f"measurement {x}: {msg}" for msg in validate_povm(p))
        return report


def pad_assemblage(povms: list[Povm] | tuple[Povm, ...]) -> Assemblage:
    """Pad each POVM with zero effects up to the common maximum outcome count."""
    povms = tuple(povms)
    if not povms:
        raise DimMismatch("no measurements given")
    dim = povms[0].dim
    if any(p.dim != dim for p in povms):
        raise DimMismatch("all measurements must share the dimension")
    d_bar = max(p.n_outcomes for p in povms)
    zero = np.zeros((dim, dim))
    padded = tuple(
        p if p.n_outcomes == d_bar
        else Povm(dim, p.effects + (zero,) * (d_bar - p.n_outcomes), label=p.label)
        for p in povms
    )
    return Assemblage(dim=dim, n_outcomes=d_bar, povms=padded)


@dataclass(frozen=True)
class BlochMeasurement:
    """Unbiased binary qubit measurement; vector length doubles as visibility."""

    n: tuple[float, float, float]

    def __post_init__(self) -> None:
        vec = tuple(float(c) for c in self.n)
        if len(vec) != 3:
            raise DimMismatch("Bloch vector must have three components")
        if float(np.linalg.norm(vec)) > 1 + 1e-12:
            raise ValueError(f"Bloch vector norm {np.linalg.norm(vec):.6f} exceeds 1")
        object.__setattr__(self, "n", vec)

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.n, dtype=float)

    def to_povm(self) -> Povm:
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
        sz = np.array([[1, 0], [0, -1]], dtype=complex)
        dotted = self.n[0] * sx + self.n[1] * sy + self.n[2] * sz
        eye = np.eye(2)
        return Povm(2, ((eye + dotted) / 2, (eye - dotted) / 2), label="bloch")


def bloch_of_binary_qubit(p: Povm, tol: float = 1e-9) -> BlochMeasurement:
    """Extract the Bloch vector of an unbiased binary qubit POVM."""
    if p.dim != 2 or p.n_outcomes != 2:
        raise DimMismatch("expected a binary qubit measurement")
    e0 = p.effects[0]
    if abs(np.trace(e0).real - 1.0) > tol:
        raise ValueError("measurement is biased: tr(E_0) != 1")
    nx = float(e0[0, 1].real + e0[1, 0].real)
    ny = float(e0[1, 0].imag - e0[0, 1].imag)
    nz = float(e0[0, 0].real - e0[1, 1].real)
    return BlochMeasurement((nx, ny, nz))
