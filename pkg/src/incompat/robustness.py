"""Visibility-threshold bisection for white-noise families and the
coarse-graining / disjoint-convex-mixing threshold tables."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable

from .classical_ops import CoarseGrainPlan, coarse_grain_assemblage, enumerate_partitions
from .classify import DcmScanOptions, classify_cg, classify_dcm
from .errors import NotBracketed, NonMonotone
from .families import make_noisy_mub
from .jm import INCOMPATIBLE, solve_jm
from .povm import Assemblage
from .tolerances import BISECT_TOL


@dataclass(frozen=True)
class NoiseFamily:
    """A one-parameter family of assemblages: visibility in [0, 1]."""

    builder: Callable[[float], Assemblage]
    name: str


@dataclass(frozen=True)
class ThresholdResult:
    nu_star: float
    bracket: tuple[float, float]
    evaluations: int
    predicate_name: str


def bisect_threshold(
    family: NoiseFamily,
    predicate: Callable[[Assemblage], bool],
    tol: float = BISECT_TOL,
    predicate_name: str = "",
    guard: bool = True,
) -> ThresholdResult:
    """Bisect the visibility at which ``predicate`` flips from false to true.

    Requires predicate false at 0 and true at 1.  The transition is assumed
    monotone; with ``guard`` on, each midpoint evaluation is paired with a
    neighbor evaluation on the side that must agree, and a disagreement
    aborts with ``NonMonotone`` instead of reporting a spurious root.
    """
    if tol < 1e-5:
        raise ValueError("tol below 1e-5 is not supported")
    evals = 0

    def check(nu: float) -> bool:
        nonlocal evals
        evals += 1
        return bool(predicate(family.builder(nu)))

    if check(0.0):
        raise NotBracketed(f"{family.name}: predicate already true at visibility 0")
    if not check(1.0):
        raise NotBracketed(f"{family.name}: predicate false at visibility 1")
    lo, hi = 0.0, 1.0
    while hi - lo > 2 * tol:
        mid = (lo + hi) / 2
        result = check(mid)
        if guard:
            delta = (hi - lo) / 4
            neighbor = mid + delta if result else mid - delta
            if check(neighbor) != result:
                raise NonMonotone(
                    f"{family.name}: predicate at {neighbor:.6f} disagrees with {mid:.6f}"
                )
        if result:
            hi = mid
        else:
            lo = mid
    return ThresholdResult((lo + hi) / 2, (lo, hi), evals, predicate_name)


# ---------- table of coarse-graining thresholds ----------

def _restricted_binary_partitions(d_bar: int):
    """Partitions with >= 2 blocks, binary ones restricted to the
    distinguished-outcome form (one singleton block).

    Balanced binary clubbings can align the block structures of unbiased
    bases into commuting pairs, which makes the unrestricted two-outcome
    layer vacuous in dimension 4; the published two-outcome thresholds follow
    the distinguished-outcome convention, so this table does too.
    """
    keep = []
    for part in enumerate_partitions(d_bar, 2):
        if part.n_blocks == 2 and min(len(b) for b in part.blocks) > 1:
            continue
        keep.append(part)
    return keep


def _cg_incompatible_restricted(a: Assemblage) -> bool:
    parts = _restricted_binary_partitions(a.n_outcomes)
    for combo in product(parts, repeat=a.n_measurements):
        verdict = solve_jm(coarse_grain_assemblage(a, CoarseGrainPlan(combo)), validate=False)
        if verdict.status != INCOMPATIBLE:
            return False
    return True


def _mub_pair_family(d: int) -> NoiseFamily:
    return NoiseFamily(
        lambda nu: make_noisy_mub(d, ("computational", "fourier"), nu),
        name=f"noisy-mub-pair-d{d}",
    )


def _mub_triple_family(d: int) -> NoiseFamily:
    return NoiseFamily(
        lambda nu: make_noisy_mub(d, ("computational", "fourier", "third"), nu),
        name=f"noisy-mub-triple-d{d}",
    )


CG_TABLE_ROWS = ((3, 3), (3, 2), (4, 4), (4, 3), (4, 2))


def _cg_row(row: tuple[int, int], tol: float) -> dict:
    d, k = row
    family = _mub_pair_family(d)
    if k == 2:
        predicate = _cg_incompatible_restricted
        name = "cg-incompatible-restricted-binary"
    else:
        def predicate(a: Assemblage, _k: int = k) -> bool:
            return classify_cg(a, _k).verdict == "incompatible"
        name = f"classify-cg-k{k}"
    res = bisect_threshold(family, predicate, tol=tol, predicate_name=name)
    return {"d": d, "k": k, "nu_star": res.nu_star, "bracket_lo": res.bracket[0],
            "bracket_hi": res.bracket[1], "evaluations": res.evaluations}


def cg_threshold_table(tol: float = BISECT_TOL, workers: int = 1) -> list[dict]:
    """Critical visibilities of the noisy unbiased-bases pair per layer k.

    Rows (d, k): (3,3), (3,2), (4,4), (4,3), (4,2).  For three-outcome
    measurements every k is covered by ``classify_cg``; the two-outcome rows
    use the distinguished-outcome binary convention (see
    ``_restricted_binary_partitions``).
    """
    rows = list(CG_TABLE_ROWS)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_cg_row_worker, [(r, tol) for r in rows]))
    else:
        out = [_cg_row(r, tol) for r in rows]
    return out


def _cg_row_worker(args) -> dict:
    return _cg_row(*args)


# ---------- table of disjoint-convex-mixing thresholds ----------

DCM_TABLE_ROWS = ((3, 3), (3, 2), (4, 3), (4, 2))


def _dcm_row(row: tuple[int, int], include_permutations: bool, tol: float,
             grid_points: int) -> dict:
    d, k = row
    family = _mub_triple_family(d)
    opts = DcmScanOptions(grid_points=grid_points,
                          include_permutations=include_permutations)

    def predicate(a: Assemblage) -> bool:
        return classify_dcm(a, k, opts).verdict == "incompatible"

    res = bisect_threshold(family, predicate, tol=tol,
                           predicate_name=f"classify-dcm-k{k}")
    return {"d": d, "k": k, "permutations": include_permutations,
            "nu_star": res.nu_star, "bracket_lo": res.bracket[0],
            "bracket_hi": res.bracket[1], "evaluations": res.evaluations}


def _dcm_row_worker(args) -> dict:
    return _dcm_row(*args)


def dcm_threshold_table(
    tol: float | None = None,
    workers: int = 1,
    grid_points: int = 13,
    permutation_settings: tuple[bool, ...] = (True, False),
) -> list[dict]:
    """Critical visibilities of the noisy unbiased-bases triple per layer k
    under disjoint-convex-mixing, for each permutation-flag setting.

    The mixing-weight optimum is concave along each pair mix, so a coarse
    grid plus golden-section refinement locates it; ``grid_points`` trades
    scan density against runtime without moving the refined optimum.
    """
    jobs = []
    for d, k in DCM_TABLE_ROWS:
        settings = permutation_settings if k == 2 else (False,)
        for perm in settings:
            row_tol = tol if tol is not None else (1e-3 if d == 4 and k == 2 else BISECT_TOL)
            jobs.append(((d, k), perm, row_tol, grid_points))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_dcm_row_worker, jobs))
    else:
        out = [_dcm_row(*j) for j in jobs]
    return out
