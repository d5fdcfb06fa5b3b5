"""Incompatibility layers under coarse-graining and disjoint-convex-mixing,
plus the closed-form criteria for projective and qubit measurement sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Iterator

import numpy as np
from scipy.optimize import minimize_scalar

from .classical_ops import (
    CoarseGrainPlan,
    DisjointMixPlan,
    OutcomePartition,
    coarse_grain_assemblage,
    enumerate_partitions,
    mix_inputs,
)
from .errors import BadRange, NotProjective, NotRankOneProjective, TooLarge
from .jm import BORDERLINE, COMPATIBLE, INCOMPATIBLE, JmVerdict, solve_jm
from .linalg import commutator
from .povm import Assemblage, BlochMeasurement, Povm
from .tolerances import COMMUTATOR_TOL, DECIDE_EPS

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


# ---------- report types ----------

@dataclass(frozen=True)
class LayerEntry:
    """Classification result at one layer k."""

    kind: str  # "cg" | "dcm"
    k: int
    verdict: str  # "incompatible" | "compatible_plan_found" | "borderline"
    witness: object | None = None
    witness_mu: float | None = None
    borderline_cases: tuple = ()
    n_solves: int = 0


@dataclass(frozen=True)
class LayerReport:
    kind: str
    entries: dict[int, LayerEntry] = field(default_factory=dict)


INCOMP = "incompatible"
PLAN_FOUND = "compatible_plan_found"
BORDER = "borderline"


@dataclass(frozen=True)
class DcmScanOptions:
    """Weight/permutation scan controls for disjoint-convex-mixing layers."""

    grid_points: int = 101
    refine_tol: float = 1e-4
    include_permutations: bool = True
    simplex_step: float = 1 / 20  # weight grid for groups of three or more
    job_cap: int = 500_000  # max solve budget per classify_dcm call

    def __post_init__(self) -> None:
        if self.grid_points < 3:
            raise BadRange("grid_points must be at least 3")


# ---------- coarse-graining layers ----------

def _exact_k_plans(a: Assemblage, k: int) -> Iterator[CoarseGrainPlan]:
    parts = [p for p in enumerate_partitions(a.n_outcomes, 2) if p.n_blocks == k]
    for combo in product(parts, repeat=a.n_measurements):
        yield CoarseGrainPlan(combo)


def classify_cg(a: Assemblage, k: int) -> LayerEntry:
    """k-incompatibility under outcome coarse-graining.

    Incompatible iff every plan whose partitions all keep at least k blocks
    leaves the assemblage incompatible.  Coarse-graining preserves
    compatibility, so any compatible plan with more than k blocks stays
    compatible when merged down to exactly k; scanning exactly-k-block plans
    therefore decides the full quantifier.
    """
    if not 2 <= k <= a.n_outcomes:
        raise BadRange(f"need 2 <= k <= {a.n_outcomes}, got {k}")
    borderline: list[CoarseGrainPlan] = []
    n_solves = 0
    for plan in _exact_k_plans(a, k):
        verdict = solve_jm(coarse_grain_assemblage(a, plan), validate=False)
        n_solves += 1
        if verdict.status == COMPATIBLE:
            return LayerEntry("cg", k, PLAN_FOUND, witness=plan,
                              witness_mu=verdict.mu_star, n_solves=n_solves)
        if verdict.status == BORDERLINE:
            borderline.append(plan)
    if borderline:
        return LayerEntry("cg", k, BORDER, borderline_cases=tuple(borderline), n_solves=n_solves)
    return LayerEntry("cg", k, INCOMP, n_solves=n_solves)


def full_incompatible_cg(a: Assemblage) -> tuple[bool, dict]:
    """Full incompatibility under coarse-graining (= the k=2 layer).

    The report carries a direct scan over every nontrivial plan as a
    cross-check of the exactly-two-block reduction.
    """
    entry = classify_cg(a, 2)
    parts = enumerate_partitions(a.n_outcomes, 2)
    direct = INCOMP
    direct_witness = None
    for combo in product(parts, repeat=a.n_measurements):
        plan = CoarseGrainPlan(combo)
        verdict = solve_jm(coarse_grain_assemblage(a, plan), validate=False)
        if verdict.status == COMPATIBLE:
            direct, direct_witness = PLAN_FOUND, plan
            break
        if verdict.status == BORDERLINE and direct != PLAN_FOUND:
            direct = BORDER
    report = {"entry": entry, "direct_scan_verdict": direct, "direct_scan_witness": direct_witness,
              "agree": (entry.verdict == INCOMP) == (direct == INCOMP)}
    return entry.verdict == INCOMP, report


# ---------- analytic criteria for projective pairs ----------

def _require_projective(p: Povm, tol: float = 1e-9) -> None:
    for z, e in enumerate(p.effects):
        if np.max(np.abs(e @ e - e)) > tol:
            raise NotProjective(f"effect {z} is not idempotent")


def _rank1_vectors(p: Povm, tol: float = 1e-7) -> list[np.ndarray]:
    _require_projective(p)
    vecs = []
    for z, e in enumerate(p.effects):
        w, v = np.linalg.eigh(e)
        if abs(w[-1] - 1.0) > tol or (len(w) > 1 and abs(w[-2]) > tol):
            raise NotRankOneProjective(f"effect {z} is not a rank-one projector")
        vecs.append(v[:, -1])
    return vecs


def projective_full_cg_criterion(p: Povm, q: Povm) -> bool:
    """Subset-commutator test for full CG-incompatibility of projective pairs.

    True iff every pair of proper nonempty outcome subsets has noncommuting
    block sums.
    """
    _require_projective(p)
    _require_projective(q)
    subsets_p = [s for r in range(1, p.n_outcomes) for s in combinations(range(p.n_outcomes), r)]
    subsets_q = [s for r in range(1, q.n_outcomes) for s in combinations(range(q.n_outcomes), r)]
    for sp in subsets_p:
        block_p = np.sum([p.effects[i] for i in sp], axis=0)
        for sq in subsets_q:
            block_q = np.sum([q.effects[j] for j in sq], axis=0)
            if np.max(np.abs(commutator(block_p, block_q))) <= COMMUTATOR_TOL:
                return False
    return True


def rank1_overlap_criterion(p: Povm, q: Povm) -> dict:
    """All-overlaps-nonzero test for rank-one projective pairs.

    Necessary for full CG-incompatibility in any dimension; in dimension 3 it
    is also sufficient, and the returned verdict is set accordingly.
    """
    vp = _rank1_vectors(p)
    vq = _rank1_vectors(q)
    overlaps = np.abs(np.array([[np.vdot(a, b) for b in vq] for a in vp]))
    satisfies = bool(np.all(overlaps > COMMUTATOR_TOL))
    out = {"satisfies": satisfies, "overlaps": overlaps}
    if p.dim == 3:
        out["fully_incompatible"] = satisfies
    return out


# ---------- qubit closed forms ----------

def busch_incompatible(a: BlochMeasurement, b: BlochMeasurement) -> bool:
    """Incompatibility of two unbiased binary qubit measurements."""
    va, vb = a.vec, b.vec
    return float(np.linalg.norm(va + vb) + np.linalg.norm(va - vb)) > 2.0


def _pair_mix_margin(ni: np.ndarray, nj: np.ndarray, nk: np.ndarray, q: float) -> float:
    m = q * nj + (1 - q) * nk
    return float(np.linalg.norm(ni + m) + np.linalg.norm(ni - m)) - 2.0


def dcm_condition_qubit(
    n0: BlochMeasurement, n1: BlochMeasurement, n2: BlochMeasurement,
    grid_points: int = 101, tol: float = 1e-6,
) -> bool:
    """Full DCM-incompatibility of three unbiased qubit measurements.

    Checks the Busch margin of every pair mix against the remaining
    measurement, minimizing over the mixing weight: grid scan plus bounded
    scalar minimization around the grid minimum.
    """
    vecs = (n0.vec, n1.vec, n2.vec)
    qs = np.linspace(0.0, 1.0, grid_points)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        ni, nj, nk = vecs[i], vecs[j], vecs[k]
        margins = [_pair_mix_margin(ni, nj, nk, q) for q in qs]
        idx = int(np.argmin(margins))
        lo, hi = qs[max(idx - 1, 0)], qs[min(idx + 1, grid_points - 1)]
        res = minimize_scalar(
            lambda q: _pair_mix_margin(ni, nj, nk, q),
            bounds=(lo, hi), method="bounded", options={"xatol": tol},
        )
        if min(float(res.fun), min(margins)) <= 0.0:
            return False
    return True


def noisy_pauli_dcm_criterion(nu0: float, nu1: float, nu2: float) -> bool:
    """Closed-form full-DCM-incompatibility test for the noisy Pauli triple.

    True iff min over cyclic axis triples of nu_i^2 + nu_j^2 nu_k^2 /
    (nu_j^2 + nu_k^2) exceeds 1; the ratio is 0 when both nu_j and nu_k vanish.
    """
    sq = (nu0 * nu0, nu1 * nu1, nu2 * nu2)
    terms = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        denom = sq[j] + sq[k]
        terms.append(sq[i] + (sq[j] * sq[k] / denom if denom > 0 else 0.0))
    return min(terms) > 1.0


def planarity_check(n0: BlochMeasurement, n1: BlochMeasurement, n2: BlochMeasurement) -> bool:
    """True iff the three Bloch vectors are coplanar (determinant below 1e-9)."""
    return abs(float(np.linalg.det(np.column_stack((n0.vec, n1.vec, n2.vec))))) <= 1e-9


# ---------- disjoint-convex-mixing layers ----------

def _set_partitions_k(n: int, k: int) -> list[tuple[tuple[int, ...], ...]]:
    from .classical_ops import _growth_strings

    out = []
    for rgs in _growth_strings(n):
        if max(rgs) + 1 != k:
            continue
        blocks: list[list[int]] = [[] for _ in range(k)]
        for x, b in enumerate(rgs):
            blocks[b].append(x)
        out.append(tuple(tuple(b) for b in blocks))
    return out


def _group_perm_choices(group: tuple[int, ...], n_outcomes: int, enabled: bool):
    """Relative outcome permutations for one mixing group.

    The first member keeps the identity labeling: permuting all members by a
    common relabeling only renames the mixed outcomes, so relative
    permutations are the complete set.  Singleton groups need none.
    """
    ident = tuple(range(n_outcomes))
    if len(group) == 1 or not enabled:
        return [(ident,) * len(group)]
    alts = list(permutations(range(n_outcomes)))
    return [(ident,) + rest for rest in product(alts, repeat=len(group) - 1)]


def _simplex_grid(size: int, step: float) -> Iterator[tuple[float, ...]]:
    n_steps = round(1.0 / step)
    if size == 1:
        yield (1.0,)
        return
    for cuts in product(range(n_steps + 1), repeat=size - 1):
        if sum(cuts) <= n_steps:
            last = n_steps - sum(cuts)
            yield tuple(c / n_steps for c in cuts) + (last / n_steps,)


def _plan_for(groups, perm_table, weights, n: int, n_outcomes: int) -> DisjointMixPlan:
    perms: list[tuple[int, ...]] = [tuple(range(n_outcomes))] * n
    for group, gperms in zip(groups, perm_table):
        for x, perm in zip(group, gperms):
            perms[x] = perm
    return DisjointMixPlan(tuple(groups), tuple(weights), tuple(perms))


def _max_mu_over_q(
    solve_at: Callable[[float], JmVerdict], grid_points: int, refine_tol: float
) -> tuple[float, float, int]:
    """Maximize mu*(q) over the unit interval: grid, then golden-section
    refinement around the best grid point.  mu* is concave along the affine
    family q -> assemblage, so the refined value is the global maximum.
    Returns (max mu, argmax q, solve count)."""
    qs = np.linspace(0.0, 1.0, grid_points)
    vals = [solve_at(q).mu_star for q in qs]
    n_solves = grid_points
    i = int(np.argmax(vals))
    best_mu, best_q = vals[i], float(qs[i])
    lo, hi = float(qs[max(i - 1, 0)]), float(qs[min(i + 1, grid_points - 1)])
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = solve_at(c).mu_star, solve_at(d).mu_star
    n_solves += 2
    while hi - lo > refine_tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = solve_at(c).mu_star
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = solve_at(d).mu_star
        n_solves += 1
        if fc > best_mu:
            best_mu, best_q = fc, c
        if fd > best_mu:
            best_mu, best_q = fd, d
    return best_mu, best_q, n_solves


def classify_dcm(a: Assemblage, k: int, opts: DcmScanOptions | None = None) -> LayerEntry:
    """k-incompatibility under disjoint-convex-mixing.

    Incompatible iff for every partition of the measurement set into k
    groups, every enabled outcome-permutation choice, and every weight
    assignment, the mixed assemblage stays incompatible.  Two-member groups
    scan the single mixing weight by grid plus golden-section refinement;
    larger groups scan a uniform simplex grid.
    """
    opts = opts or DcmScanOptions()
    n = a.n_measurements
    if not 2 <= k <= n:
        raise BadRange(f"need 2 <= k <= {n}, got {k}")
    borderline: list[tuple] = []
    n_solves = 0
    budget_estimate = 0
    partitions = _set_partitions_k(n, k)
    for groups in partitions:
        perm_tables = list(product(*(
            _group_perm_choices(g, a.n_outcomes, opts.include_permutations) for g in groups
        )))
        per_partition = len(perm_tables) * max(opts.grid_points, 1)
        budget_estimate += per_partition
        if budget_estimate > opts.job_cap:
            raise TooLarge(
                f"scan budget {budget_estimate} exceeds job cap {opts.job_cap}"
            )
    for groups in partitions:
        pair_groups = [gi for gi, g in enumerate(groups) if len(g) == 2]
        big_groups = [gi for gi, g in enumerate(groups) if len(g) >= 3]
        perm_choices = [
            _group_perm_choices(g, a.n_outcomes, opts.include_permutations) for g in groups
        ]
        for perm_table in product(*perm_choices):
            if len(pair_groups) == 1 and not big_groups:
                gi = pair_groups[0]

                def weights_at(q: float):
                    return tuple(
                        (q, 1.0 - q) if j == gi else (1.0,) * len(groups[j])
                        for j in range(len(groups))
                    )

                def solve_at(q: float) -> JmVerdict:
                    plan = _plan_for(groups, perm_table, weights_at(q), n, a.n_outcomes)
                    return solve_jm(mix_inputs(a, plan), validate=False)

                mu, q_at, used = _max_mu_over_q(solve_at, opts.grid_points, opts.refine_tol)
                n_solves += used
                if mu >= -DECIDE_EPS:
                    plan = _plan_for(groups, perm_table, weights_at(q_at), n, a.n_outcomes)
                    confirm = solve_jm(mix_inputs(a, plan), validate=False)
                    n_solves += 1
                    if confirm.status == COMPATIBLE:
                        return LayerEntry("dcm", k, PLAN_FOUND, witness=plan,
                                          witness_mu=confirm.mu_star, n_solves=n_solves)
                    borderline.append((groups, perm_table, q_at))
            else:
                grids = []
                for g in groups:
                    if len(g) == 1:
                        grids.append([(1.0,)])
                    elif len(g) == 2:
                        grids.append([(q, 1.0 - q) for q in np.linspace(0, 1, opts.grid_points)])
                    else:
                        grids.append(list(_simplex_grid(len(g), opts.simplex_step)))
                for weights in product(*grids):
                    plan = _plan_for(groups, perm_table, weights, n, a.n_outcomes)
                    verdict = solve_jm(mix_inputs(a, plan), validate=False)
                    n_solves += 1
                    if verdict.status == COMPATIBLE:
                        return LayerEntry("dcm", k, PLAN_FOUND, witness=plan,
                                          witness_mu=verdict.mu_star, n_solves=n_solves)
                    if verdict.status == BORDERLINE:
                        borderline.append((groups, perm_table, weights))
    if borderline:
        return LayerEntry("dcm", k, BORDER, borderline_cases=tuple(borderline), n_solves=n_solves)
    return LayerEntry("dcm", k, INCOMP, n_solves=n_solves)


def full_incompatible_dcm(a: Assemblage, opts: DcmScanOptions | None = None) -> tuple[bool, LayerReport]:
    """Full DCM-incompatibility: the conjunction of all layers k = 2..n."""
    entries: dict[int, LayerEntry] = {}
    verdict = True
    for k in range(2, a.n_measurements + 1):
        entry = classify_dcm(a, k, opts)
        entries[k] = entry
        if entry.verdict != INCOMP:
            verdict = False
    return verdict, LayerReport("dcm", entries)
