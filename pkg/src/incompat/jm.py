"""Joint-measurability decision by semidefinite programming.

For an assemblage {M_{z|x}} the parent-POVM problem is

    maximize   mu
    s.t.       sum_{lambda: lambda(x) = z} G_lambda = M_{z|x}   for all x, z
               G_lambda >= mu * I

over deterministic response strategies lambda: settings -> outcomes.  A
negative optimum certifies incompatibility.  After the substitution
H_lambda = G_lambda - mu*I the problem is a conic program in standard form;
it is handed to cvxopt's conelp (a primal-dual interior-point method) through
its Lagrangian dual

    minimize   sum_{x,z} <Y_{x,z}, M_{z|x}>
    s.t.       sum_x Y_{x, lambda(x)} >= 0   for every lambda
               d_bar^(n-1) * sum_{x,z} tr Y_{x,z} = 1

whose conic data (everything except the objective) depends only on the shape
(n, d_bar, d) and is cached across solves.  Complex Hermitian blocks enter the
solver through their real symmetric embedding; the parent POVM is recovered
exactly from the conic dual variables.

Shifting every Y_{x,z} of one measurement by a common offset (offsets summing
to zero across measurements) changes neither the constraints nor the
objective, so the natural parametrization is rank-deficient.  The gauge is
fixed by pinning Y_{x,0} = 0 for every measurement but the first, which
conelp's rank conditions require; the pinned marginal equations are implied
by the retained ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Literal

import numpy as np
from cvxopt import matrix as cvx_matrix
from cvxopt import solvers as cvx_solvers

from .errors import InvalidAssemblage, SolverFailure, TooLarge
from .linalg import embed_real, unembed_hermitian
from .povm import Assemblage
from .tolerances import DECIDE_EPS, PARENT_TOL, PSD_TOL, SDP_EQ_TOL, SDP_GAP_TOL

STRATEGY_CAP = 100_000

COMPATIBLE = "compatible"
INCOMPATIBLE = "incompatible"
BORDERLINE = "borderline"
Status = Literal["compatible", "incompatible", "borderline"]

_CONELP_OPTIONS = {
    "show_progress": False,
    "abstol": 1e-10,
    "reltol": 1e-10,
    "feastol": 1e-9,
    "maxiters": 200,
}


@dataclass(frozen=True)
class StrategySet:
    """All deterministic strategies lambda: [n] -> [d_bar], lexicographic."""

    n_measurements: int
    n_outcomes: int
    strategies: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.strategies)


def enumerate_strategies(n_measurements: int, n_outcomes: int) -> StrategySet:
    count = n_outcomes**n_measurements
    if count > STRATEGY_CAP:
        raise TooLarge(f"{n_outcomes}^{n_measurements} = {count} strategies exceed cap {STRATEGY_CAP}")
    strategies = tuple(product(range(n_outcomes), repeat=n_measurements))
    return StrategySet(n_measurements, n_outcomes, strategies)


@dataclass(frozen=True)
class SolverStats:
    iterations: int
    gap: float
    primal_residual: float
    dual_residual: float
    marginal_residual: float


@dataclass(frozen=True)
class JmVerdict:
    """Outcome of one joint-measurability solve."""

    mu_star: float
    status: Status
    parent: tuple[np.ndarray, ...] | None
    stats: SolverStats

    @property
    def compatible(self) -> bool:
        return self.status == COMPATIBLE

    @property
    def incompatible(self) -> bool:
        return self.status == INCOMPATIBLE


def _hermitian_basis(d: int) -> np.ndarray:
    """Real basis of d x d Hermitian matrices, shape (d*d, d, d).

    Order: diagonal units, then for k < l the symmetric and antisymmetric
    off-diagonal pairs.
    """
    basis = np.zeros((d * d, d, d), dtype=complex)
    i = 0
    for k in range(d):
        basis[i, k, k] = 1.0
        i += 1
    for k in range(d):
        for l in range(k + 1, d):
            basis[i, k, l] = 1.0
            basis[i, l, k] = 1.0
            i += 1
            basis[i, k, l] = -1.0j
            basis[i, l, k] = 1.0j
            i += 1
    return basis


class _JmProgram:
    """Conic data for one scenario shape (n, d_bar, d); reused across solves."""

    def __init__(self, n: int, d_bar: int, d: int):
        self.n, self.d_bar, self.d = n, d_bar, d
        self.strategies = enumerate_strategies(n, d_bar).strategies
        n_strat = len(self.strategies)
        self.basis = _hermitian_basis(d)
        n_basis = d * d
        side = 2 * d
        block_len = side * side

        # retained variable slots: gauge pins Y_{x,0} = 0 for x >= 1
        self.slots = [(x, z) for x in range(n) for z in range(d_bar) if x == 0 or z != 0]
        self.n_vars = len(self.slots) * n_basis

        # lambda-index lists per (x, z) slot, and vec'd embedded basis
        self.slot_members: dict[tuple[int, int], list[int]] = {
            (x, z): [] for x in range(n) for z in range(d_bar)
        }
        for idx, lam in enumerate(self.strategies):
            for x, z in enumerate(lam):
                self.slot_members[(x, z)].append(idx)

        emb = np.stack([embed_real(e).flatten(order="F") for e in self.basis])  # (n_basis, block_len)
        g = np.zeros((n_strat * block_len, self.n_vars))
        for s_idx, (x, z) in enumerate(self.slots):
            col0 = s_idx * n_basis
            for lam_idx in self.slot_members[(x, z)]:
                g[lam_idx * block_len : (lam_idx + 1) * block_len, col0 : col0 + n_basis] = -emb.T
        self.G = cvx_matrix(g)
        self.h = cvx_matrix(np.zeros(n_strat * block_len))
        self.dims = {"l": 0, "q": [], "s": [side] * n_strat}

        scale = float(d_bar ** (n - 1))
        a_row = np.tile(np.real(np.trace(self.basis, axis1=1, axis2=2)), len(self.slots)) * scale
        self.A = cvx_matrix(a_row).T
        self.b = cvx_matrix([1.0])
        self.side = side
        self.block_len = block_len
        self.n_strat = n_strat

    def objective(self, effects: np.ndarray) -> cvx_matrix:
        """c_i = tr(E_i M_{z|x}) for the slot owning variable i."""
        c = np.stack([
            np.einsum("ikl,lk->i", self.basis, effects[x, z]).real for (x, z) in self.slots
        ])
        return cvx_matrix(c.reshape(-1))

    def solve(self, effects: np.ndarray) -> tuple[float, list[np.ndarray], dict]:
        c = self.objective(effects)
        sol = cvx_solvers.conelp(
            c, self.G, self.h, self.dims, self.A, self.b, options=_CONELP_OPTIONS
        )
        if sol["status"] != "optimal" or sol["x"] is None or sol["z"] is None:
            raise SolverFailure(f"conelp returned status {sol['status']!r}")
        mu = float(sol["primal objective"])
        z_flat = np.array(sol["z"]).reshape(-1)
        parents = []
        for k in range(self.n_strat):
            zk = z_flat[k * self.block_len : (k + 1) * self.block_len].reshape(
                (self.side, self.side), order="F"
            )
            parents.append(unembed_hermitian(zk) + mu * np.eye(self.d))
        return mu, parents, sol


@lru_cache(maxsize=64)
def _program(n: int, d_bar: int, d: int) -> _JmProgram:
    return _JmProgram(n, d_bar, d)


def _marginal_residual(program: _JmProgram, effects: np.ndarray, parents: list[np.ndarray]) -> float:
    resid = 0.0
    for (x, z), members in program.slot_members.items():
        total = np.sum([parents[i] for i in members], axis=0)
        resid = max(resid, float(np.max(np.abs(total - effects[x, z]))))
    return resid


def _psd_clip(h: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.maximum(w, 0.0)) @ v.conj().T


def solve_jm(a: Assemblage, validate: bool = True) -> JmVerdict:
    """Decide joint measurability of an assemblage.

    Returns the optimum ``mu_star``, a three-way status with a borderline band
    of half-width ``DECIDE_EPS`` around zero, and the parent POVM.  Exactly
    critical assemblages (optimum zero, e.g. commuting projective pairs) are
    reported compatible when the returned parent, clipped to the PSD cone,
    still reproduces the marginals within ``PARENT_TOL``.
    """
    if validate:
        problems = a.validate()
        if problems:
            raise InvalidAssemblage("; ".join(problems))
    program = _program(a.n_measurements, a.n_outcomes, a.dim)
    effects = np.stack([[a.effect(z, x) for z in range(a.n_outcomes)] for x in range(a.n_measurements)])
    mu, parents, sol = program.solve(effects)

    gap = abs(float(sol["primal objective"]) - float(sol["dual objective"]))
    marg = _marginal_residual(program, effects, parents)
    if gap > SDP_GAP_TOL or marg > SDP_EQ_TOL:
        raise SolverFailure(
            f"accuracy contract not met: gap {gap:.3e} (limit {SDP_GAP_TOL:.1e}), "
            f"marginal residual {marg:.3e} (limit {SDP_EQ_TOL:.1e})"
        )
    stats = SolverStats(
        iterations=int(sol["iterations"]),
        gap=gap,
        primal_residual=float(sol["primal infeasibility"]),
        dual_residual=float(sol["dual infeasibility"]),
        marginal_residual=marg,
    )

    if mu < -DECIDE_EPS:
        status: Status = INCOMPATIBLE
    elif mu > DECIDE_EPS:
        status = COMPATIBLE
    else:
        clipped = [_psd_clip(g) for g in parents]
        status = COMPATIBLE if _marginal_residual(program, effects, clipped) <= PARENT_TOL else BORDERLINE
    return JmVerdict(mu_star=mu, status=status, parent=tuple(parents), stats=stats)
