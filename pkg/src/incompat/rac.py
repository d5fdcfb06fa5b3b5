"""Semi-device-independent witnesses: random-access-code success probabilities
and compatible-measurement bounds."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .classical_ops import DisjointMixPlan, OutcomePartition, coarse_grain, mix_inputs
from .errors import BadArgs, DimMismatch, TooLarge, WrongShape
from .linalg import opnorm_maxeig
from .povm import Assemblage, BlochMeasurement, Povm

RAC_CAP = 100_000
ADVANTAGE_EPS = 1e-12


@dataclass(frozen=True)
class RacResult:
    n_inputs: int  # dits encoded (k)
    n_outcomes: int  # alphabet size (d_bar)
    dim: int  # communicated system dimension (d)
    success: float
    bound: float | None

    @property
    def advantage(self) -> bool:
        if self.bound is None:
            raise BadArgs("no compatible-measurement bound available at this k")
        return self.success > self.bound + ADVANTAGE_EPS


def p_cb(d_bar: int, d: int) -> float:
    """Compatible-measurement ceiling for two-dit random access coding."""
    if d_bar < 2 or d < 2:
        raise BadArgs("need d_bar >= 2 and d >= 2")
    return 0.5 * (1.0 + d / d_bar**2)


def rac_success_pair(a: Povm, b: Povm) -> RacResult:
    """Best average success probability of the two-measurement random access
    code: (1 / 2 d_bar^2) * sum_ij ||A_i + B_j||, against the p_cb bound."""
    if a.dim != b.dim or a.n_outcomes != b.n_outcomes:
        raise DimMismatch("measurements must share dimension and outcome count")
    d_bar = a.n_outcomes
    total = sum(
        opnorm_maxeig(a.effects[i] + b.effects[j])
        for i in range(d_bar) for j in range(d_bar)
    )
    return RacResult(2, d_bar, a.dim, total / (2 * d_bar**2), p_cb(d_bar, a.dim))


def rac_success_k(a: Assemblage) -> RacResult:
    """k-measurement generalization: (1 / k d_bar^k) * sum over outcome words
    of ||sum_y M_{x_y|y}||.  No compatible bound is attached for k > 2."""
    k, d_bar = a.n_measurements, a.n_outcomes
    if d_bar**k > RAC_CAP:
        raise TooLarge(f"{d_bar}^{k} outcome words exceed cap {RAC_CAP}")
    total = 0.0
    for word in product(range(d_bar), repeat=k):
        total += opnorm_maxeig(np.sum([a.effect(z, y) for y, z in enumerate(word)], axis=0))
    success = total / (k * d_bar**k)
    bound = p_cb(d_bar, a.dim) if k == 2 else None
    return RacResult(k, d_bar, a.dim, success, bound)


def _binary_clubbing(p: Povm, singled_out: int) -> Povm:
    part = OutcomePartition.clubbing(p.n_outcomes, (singled_out,))
    return coarse_grain(p, part)


def witness_full_cg_rac(p: Povm, q: Povm) -> dict:
    """Witness full CG-incompatibility of a rank-one projective qutrit pair.

    Every binary clubbing singles out one outcome per side; the clubbed pair
    must beat the 7/8 two-dit bound for all nine choices.  The analytic
    predicate (all overlaps strictly inside (0, 4/5)) is evaluated alongside
    and any disagreement is flagged.
    """
    from .classify import _rank1_vectors

    if p.dim != 3 or q.dim != 3 or p.n_outcomes != 3 or q.n_outcomes != 3:
        raise WrongShape("expected three-outcome qutrit measurements")
    vp = _rank1_vectors(p)
    vq = _rank1_vectors(q)
    overlaps = np.abs(np.array([[np.vdot(x, y) for y in vq] for x in vp]))

    table = np.zeros((3, 3))
    witnessed = True
    for i in range(3):
        clubbed_p = _binary_clubbing(p, i)
        for j in range(3):
            res = rac_success_pair(clubbed_p, _binary_clubbing(q, j))
            table[i, j] = res.success
            if not res.advantage:
                witnessed = False
    analytic = bool(np.all((overlaps > 0) & (overlaps < 0.8)))
    return {
        "witnessed": witnessed,
        "analytic": analytic,
        "agree": witnessed == analytic,
        "success_table": table,
        "overlaps": overlaps,
        "bound": p_cb(2, 3),
    }


def closed_form_mixed_pauli(nu: float, p: float) -> float:
    """Success of the mixed-pair code for the equal-noise Pauli triple."""
    return 0.25 * (2.0 + np.sqrt(2 * nu**2 - 2 * p * nu**2 + 2 * p**2 * nu**2))


def witness_full_dcm_rac(a: Assemblage, grid_points: int = 101) -> dict:
    """Witness full DCM-incompatibility of three binary qubit measurements.

    For each pair partition, both relative outcome permutations, and each
    mixing weight on the grid (with bounded refinement around the minimum),
    the mixed pair must beat the 3/4 bound.
    """
    from scipy.optimize import minimize_scalar

    if a.n_measurements != 3 or a.n_outcomes != 2 or a.dim != 2:
        raise WrongShape("expected three binary qubit measurements")
    qs = np.linspace(0.0, 1.0, grid_points)
    witnessed = True
    worst = (np.inf, None)
    for pair in ((0, 1), (0, 2), (1, 2)):
        other = next(x for x in range(3) if x not in pair)
        for perm in ((0, 1), (1, 0)):
            def success(weight: float) -> float:
                plan = DisjointMixPlan.pair_mix(3, pair, weight, perm_second=perm, n_outcomes=2)
                mixed = mix_inputs(a, plan)
                group_index = 0  # the pair group comes first in pair_mix plans
                return rac_success_pair(mixed.povms[group_index],
                                        a.povms[other]).success

            vals = [success(q) for q in qs]
            idx = int(np.argmin(vals))
            lo, hi = qs[max(idx - 1, 0)], qs[min(idx + 1, grid_points - 1)]
            res = minimize_scalar(success, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-6})
            low = min(float(res.fun), min(vals))
            if low < worst[0]:
                worst = (low, (pair, perm))
            if low <= 0.75 + ADVANTAGE_EPS:
                witnessed = False
    return {"witnessed": witnessed, "min_success": worst[0], "argmin": worst[1], "bound": 0.75}


def trine_dcm_scan(grid_points: int = 101) -> dict:
    """Scan the X/Y/Z trine: all three pair partitions, all six outcome
    pairings of the mixed pair, and the full weight grid; report the minimum
    pair-code success against the 2/3 bound."""
    from .families import make_trine_xyz

    a = make_trine_xyz()
    qs = np.linspace(0.0, 1.0, grid_points)
    lowest = (np.inf, None)
    for pair in ((0, 1), (0, 2), (1, 2)):
        other = next(x for x in range(3) if x not in pair)
        for perm in permutations(range(3)):
            for q in qs:
                plan = DisjointMixPlan.pair_mix(3, pair, q, perm_second=perm, n_outcomes=3)
                mixed = mix_inputs(a, plan)
                success = rac_success_pair(mixed.povms[0], a.povms[other]).success
                if success < lowest[0]:
                    lowest = (success, (pair, perm, float(q)))
    return {"min_success": lowest[0], "argmin": lowest[1], "bound": p_cb(3, 3),
            "all_above_bound": lowest[0] > p_cb(3, 3) + ADVANTAGE_EPS}


def chsh_max_qubit(a: BlochMeasurement, b: BlochMeasurement) -> float:
    """Largest CHSH value reachable with one party's unbiased qubit pair:
    ||n_a + n_b|| + ||n_a - n_b||.  Exceeds 2 exactly when the pair is
    incompatible."""
    va, vb = a.vec, b.vec
    return float(np.linalg.norm(va + vb) + np.linalg.norm(va - vb))
