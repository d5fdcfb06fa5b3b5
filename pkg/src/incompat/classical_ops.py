"""Classical input/output operations on measurement assemblages.

Output side: coarse-graining by outcome partitions (outcome permutations are
reversible relabelings and never change compatibility, so set partitions are
the complete 0/1 post-processing class for classification purposes).
Input side: disjoint-convex-mixing of groups of measurements, with optional
per-measurement outcome permutations applied before the mixing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from .errors import BadRange, PartitionMismatch, PlanMismatch, WeightError
from .povm import Assemblage, Povm, pad_assemblage

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class OutcomePartition:
    """Partition of the outcome set {0..n_outcomes-1} into disjoint blocks."""

    n_outcomes: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        blocks = tuple(sorted(blocks, key=lambda b: b[0]))
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise PartitionMismatch("empty block")
            if seen.intersection(b):
                raise PartitionMismatch("blocks are not disjoint")
            seen.update(b)
        if seen != set(range(self.n_outcomes)):
            raise PartitionMismatch(f"blocks do not cover range({self.n_outcomes})")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def is_trivial(self) -> bool:
        """A single block: the coarse-grained measurement always fires outcome 0."""
        return self.n_blocks == 1

    @property
    def is_identity(self) -> bool:
        return self.n_blocks == self.n_outcomes

    @staticmethod
    def identity(n_outcomes: int) -> "OutcomePartition":
        return OutcomePartition(n_outcomes, tuple((z,) for z in range(n_outcomes)))

    @staticmethod
    def clubbing(n_outcomes: int, club: tuple[int, ...]) -> "OutcomePartition":
        """Two-block partition merging ``club`` against everything else."""
        rest = tuple(z for z in range(n_outcomes) if z not in set(club))
        blocks = (tuple(club), rest) if rest else (tuple(club),)
        return OutcomePartition(n_outcomes, blocks)


@dataclass(frozen=True)
class CoarseGrainPlan:
    """One outcome partition per measurement of an assemblage."""

    partitions: tuple[OutcomePartition, ...]

    @staticmethod
    def identity(n_measurements: int, n_outcomes: int) -> "CoarseGrainPlan":
        return CoarseGrainPlan(tuple(OutcomePartition.identity(n_outcomes) for _ in range(n_measurements)))

    def min_blocks(self) -> int:
        return min(p.n_blocks for p in self.partitions)


@dataclass(frozen=True)
class DisjointMixPlan:
    """Partition of the measurement index set with per-member mixing weights.

    ``groups`` partitions {0..n-1}; ``weights`` holds one nonnegative weight
    per group member, summing to one within each group.  ``perms`` optionally
    relabels each measurement's outcomes before it enters the mixture.
    """

    groups: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[float, ...], ...]
    perms: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        groups = tuple(tuple(int(i) for i in g) for g in self.groups)
        seen: set[int] = set()
        for g in groups:
            if not g:
                raise PlanMismatch("empty group")
            if seen.intersection(g):
                raise PlanMismatch("groups are not disjoint")
            seen.update(g)
        if seen != set(range(len(seen))):
            raise PlanMismatch("groups must cover a contiguous index range starting at 0")
        if len(self.weights) != len(groups):
            raise PlanMismatch("one weight vector per group required")
        weights = tuple(tuple(float(w) for w in ws) for ws in self.weights)
        for g, ws in zip(groups, weights):
            if len(ws) != len(g):
                raise PlanMismatch("one weight per group member required")
            if any(w < 0 for w in ws):
                raise WeightError("negative weight")
            if abs(sum(ws) - 1.0) > WEIGHT_SUM_TOL:
                raise WeightError(f"group weights sum to {sum(ws)!r}, not 1")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "weights", weights)

    @property
    def n_measurements(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @staticmethod
    def pair_mix(
        n: int,
        pair: tuple[int, int],
        q: float,
        perm_second: tuple[int, ...] | None = None,
        n_outcomes: int | None = None,
    ) -> "DisjointMixPlan":
        """Mix measurements ``pair`` with weights (q, 1-q), keep the rest singleton."""
        rest = [x for x in range(n) if x not in pair]
        groups = (tuple(pair),) + tuple((x,) for x in rest)
        weights = ((float(q), 1.0 - float(q)),) + ((1.0,),) * len(rest)
        perms = None
        if perm_second is not None:
            if n_outcomes is None:
                n_outcomes = len(perm_second)
            ident = tuple(range(n_outcomes))
            table = {pair[1]: tuple(perm_second)}
            perms = tuple(table.get(x, ident) for x in range(n))
        return DisjointMixPlan(groups, weights, perms)


def coarse_grain(p: Povm, part: OutcomePartition) -> Povm:
    """Club outcomes of ``p`` by the blocks of ``part``; block order = new outcome order."""
    if part.n_outcomes != p.n_outcomes:
        raise PartitionMismatch(
            f"partition is over {part.n_outcomes} outcomes, measurement has {p.n_outcomes}"
        )
    effects = tuple(np.sum([p.effects[z] for z in block], axis=0) for block in part.blocks)
    return Povm(p.dim, effects, label=p.label)


def coarse_grain_assemblage(a: Assemblage, plan: CoarseGrainPlan) -> Assemblage:
    if len(plan.partitions) != a.n_measurements:
        raise PlanMismatch("one partition per measurement required")
    return pad_assemblage([coarse_grain(p, part) for p, part in zip(a.povms, plan.partitions)])


def _growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length n in lexicographic order."""
    rgs = [0] * n
    while True:
        yield tuple(rgs)
        for i in range(n - 1, 0, -1):
            if rgs[i] <= max(rgs[:i]):
                rgs[i] += 1
                for j in range(i + 1, n):
                    rgs[j] = 0
                break
        else:
            return


def enumerate_partitions(n_outcomes: int, min_blocks: int) -> list[OutcomePartition]:
    """All set partitions of the outcome range with at least ``min_blocks`` blocks.

    Deterministic order: lexicographic in the restricted growth string.
    """
    if not 2 <= min_blocks <= n_outcomes:
        raise BadRange(f"need 2 <= min_blocks <= n_outcomes, got {min_blocks}, {n_outcomes}")
    out: list[OutcomePartition] = []
    for rgs in _growth_strings(n_outcomes):
        n_blocks = max(rgs) + 1
        if n_blocks < min_blocks:
            continue
        blocks: list[list[int]] = [[] for _ in range(n_blocks)]
        for z, b in enumerate(rgs):
            blocks[b].append(z)
        out.append(OutcomePartition(n_outcomes, tuple(tuple(b) for b in blocks)))
    return out


def mix_inputs(a: Assemblage, plan: DisjointMixPlan) -> Assemblage:
    """One output measurement per group: effect z = sum_x w_x M_{perm_x(z)|x}."""
    if plan.n_measurements != a.n_measurements:
        raise PlanMismatch(
            f"plan covers {plan.n_measurements} measurements, assemblage has {a.n_measurements}"
        )
    perms = plan.perms
    if perms is not None:
        if len(perms) != a.n_measurements:
            raise PlanMismatch("one outcome permutation per measurement required")
        for perm in perms:
            if sorted(perm) != list(range(a.n_outcomes)):
                raise PlanMismatch(f"{perm} is not a permutation of range({a.n_outcomes})")
    mixed: list[Povm] = []
    for g, ws in zip(plan.groups, plan.weights):
        effects = []
        for z in range(a.n_outcomes):
            acc = np.zeros((a.dim, a.dim), dtype=complex)
            for x, w in zip(g, ws):
                zz = perms[x][z] if perms is not None else z
                acc = acc + w * a.effect(zz, x)
            effects.append(acc)
        mixed.append(Povm(a.dim, tuple(effects), label="+".join(a.povms[x].label for x in g)))
    return Assemblage(a.dim, a.n_outcomes, tuple(mixed))


Order = Literal["inputs_first", "outputs_first"]


def compose_io(
    a: Assemblage,
    in_plan: DisjointMixPlan,
    cg_plan: CoarseGrainPlan,
    order: Order,
) -> Assemblage:
    """Apply input mixing and output coarse-graining in the stated order.

    The two orders act on different intermediate measurement sets and are not
    equivalent in general.
    """
    if order == "inputs_first":
        return coarse_grain_assemblage(mix_inputs(a, in_plan), cg_plan)
    if order == "outputs_first":
        return mix_inputs(coarse_grain_assemblage(a, cg_plan), in_plan)
    raise PlanMismatch(f"unknown order {order!r}")
