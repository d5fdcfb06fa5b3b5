from __future__ import annotations

import numpy as np
import pytest

from conftest import pair_assemblage, random_povm, random_rank1_povm
from incompat.classical_ops import (
    CoarseGrainPlan,
    DisjointMixPlan,
    OutcomePartition,
    coarse_grain,
    coarse_grain_assemblage,
    compose_io,
    enumerate_partitions,
    mix_inputs,
)
from incompat.errors import BadRange, PartitionMismatch, PlanMismatch, WeightError
from incompat.families import make_noisy_mub
from incompat.povm import Assemblage, Povm, validate_povm


def qutrit_basis() -> Povm:
    eye = np.eye(3)
    return Povm(3, tuple(np.outer(eye[k], eye[k]) for k in range(3)))


class TestCoarseGrain:
    def test_club_last_two(self):
        p = qutrit_basis()
        out = coarse_grain(p, OutcomePartition(3, ((0,), (1, 2))))
        assert out.n_outcomes == 2
        assert np.allclose(out.effects[0], np.diag([1.0, 0, 0]))
        assert np.allclose(out.effects[1], np.diag([0.0, 1, 1]))

    def test_trivial_partition_gives_identity_effect(self):
        out = coarse_grain(qutrit_basis(), OutcomePartition(3, ((0, 1, 2),)))
        assert out.n_outcomes == 1
        assert np.allclose(out.effects[0], np.eye(3))

    def test_identity_partition_noop(self):
        p = qutrit_basis()
        out = coarse_grain(p, OutcomePartition.identity(3))
        for a, b in zip(p.effects, out.effects):
            assert np.array_equal(a, b)

    def test_partition_mismatch(self):
        with pytest.raises(PartitionMismatch):
            coarse_grain(qutrit_basis(), OutcomePartition(4, ((0, 1), (2, 3))))

    def test_preserves_completeness(self, rng):
        for part in enumerate_partitions(4, 2):
            p = random_povm(3, 4, rng)
            out = coarse_grain(p, part)
            assert validate_povm(out) == []

    def test_refinement_two_stage(self, rng):
        # clubbing everything at once = clubbing in two stages through a refinement
        p = random_povm(3, 3, rng)
        direct = coarse_grain(p, OutcomePartition(3, ((0, 1, 2),)))
        stage1 = coarse_grain(p, OutcomePartition(3, ((0, 1), (2,))))
        staged = coarse_grain(stage1, OutcomePartition(2, ((0, 1),)))
        for a, b in zip(direct.effects, staged.effects):
            assert np.allclose(a, b)


class TestEnumeratePartitions:
    def test_counts_three(self):
        parts = enumerate_partitions(3, 2)
        assert len(parts) == 4
        assert sum(1 for p in parts if p.n_blocks == 2) == 3
        assert sum(1 for p in parts if p.n_blocks == 3) == 1

    def test_counts_four(self):
        assert len(enumerate_partitions(4, 2)) == 14

    def test_binary(self):
        parts = enumerate_partitions(2, 2)
        assert len(parts) == 1
        assert parts[0].blocks == ((0,), (1,))

    def test_deterministic_order(self):
        first = [p.blocks for p in enumerate_partitions(4, 2)]
        second = [p.blocks for p in enumerate_partitions(4, 2)]
        assert first == second
        assert first[0] == ((0, 1, 2), (3,))  # lexicographic growth strings

    def test_bad_range(self):
        with pytest.raises(BadRange):
            enumerate_partitions(3, 1)


class TestMixInputs:
    def test_pair_mix_weights(self, rng):
        a = make_noisy_mub(3, ("computational", "fourier", "third"), 0.8)
        q = 0.3
        plan = DisjointMixPlan(((0, 1), (2,)), ((q, 1 - q), (1.0,)))
        out = mix_inputs(a, plan)
        assert out.n_measurements == 2
        for z in range(3):
            expect = q * a.effect(z, 0) + (1 - q) * a.effect(z, 1)
            assert np.allclose(out.povms[0].effects[z], expect)
            assert np.allclose(out.povms[1].effects[z], a.effect(z, 2))

    def test_degenerate_weight_returns_member(self):
        a = make_noisy_mub(3, ("computational", "fourier"), 0.6)
        plan = DisjointMixPlan(((0, 1),), ((1.0, 0.0),))
        out = mix_inputs(a, plan)
        for z in range(3):
            assert np.allclose(out.povms[0].effects[z], a.effect(z, 0))

    def test_swap_permutation_matches_manual(self):
        from incompat.families import make_noisy_pauli

        a = make_noisy_pauli(0.9, 0.9, 0.9)
        plan = DisjointMixPlan.pair_mix(3, (0, 1), 0.4, perm_second=(1, 0), n_outcomes=2)
        out = mix_inputs(a, plan)
        for z in range(2):
            expect = 0.4 * a.effect(z, 0) + 0.6 * a.effect(1 - z, 1)
            assert np.allclose(out.povms[0].effects[z], expect)

    def test_weight_sum_enforced(self):
        with pytest.raises(WeightError):
            DisjointMixPlan(((0, 1),), ((0.5, 0.6),))

    def test_group_cover_enforced(self):
        with pytest.raises(PlanMismatch):
            DisjointMixPlan(((0, 1), (1, 2)), ((0.5, 0.5), (0.5, 0.5)))

    def test_preserves_validity(self, rng):
        for _ in range(5):
            a = Assemblage(3, 3, (random_povm(3, 3, rng), random_povm(3, 3, rng),
                                  random_povm(3, 3, rng)))
            q = rng.uniform()
            plan = DisjointMixPlan.pair_mix(3, (0, 2), q, n_outcomes=3)
            assert mix_inputs(a, plan).validate() == []


class TestComposeIo:
    def test_identity_cg_reduces_to_mixing(self, rng):
        a = pair_assemblage(random_rank1_povm(3, rng), random_rank1_povm(3, rng))
        in_plan = DisjointMixPlan(((0, 1),), ((0.25, 0.75),))
        cg_identity = CoarseGrainPlan.identity(1, 3)
        for order in ("inputs_first", "outputs_first"):
            out = compose_io(a, in_plan, cg_identity if order == "inputs_first"
                             else CoarseGrainPlan.identity(2, 3), order)
            direct = mix_inputs(a, in_plan)
            for x in range(out.n_measurements):
                for z in range(out.n_outcomes):
                    assert np.allclose(out.effect(z, x), direct.effect(z, x))

    def test_singleton_mixing_reduces_to_cg(self, rng):
        a = pair_assemblage(random_rank1_povm(3, rng), random_rank1_povm(3, rng))
        in_plan = DisjointMixPlan(((0,), (1,)), ((1.0,), (1.0,)))
        cg = CoarseGrainPlan((OutcomePartition(3, ((0, 1), (2,))),
                              OutcomePartition(3, ((0,), (1, 2)))))
        out = compose_io(a, in_plan, cg, "outputs_first")
        direct = coarse_grain_assemblage(a, cg)
        for x in range(2):
            for z in range(direct.n_outcomes):
                assert np.allclose(out.effect(z, x), direct.effect(z, x))

    def test_orders_differ(self, rng):
        # distinct per-measurement clubbings make the two orders inequivalent
        a = pair_assemblage(random_rank1_povm(3, rng), random_rank1_povm(3, rng))
        in_plan = DisjointMixPlan(((0, 1),), ((0.5, 0.5),))
        cg_two = CoarseGrainPlan((OutcomePartition(3, ((0, 1), (2,))),
                                  OutcomePartition(3, ((0,), (1, 2)))))
        cg_one = CoarseGrainPlan((OutcomePartition(3, ((0, 1), (2,))),))
        outputs_first = compose_io(a, in_plan, cg_two, "outputs_first")
        inputs_first = compose_io(a, in_plan, cg_one, "inputs_first")
        assert outputs_first.n_measurements == inputs_first.n_measurements == 1
        diff = max(
            float(np.max(np.abs(outputs_first.effect(z, 0) - inputs_first.effect(z, 0))))
            for z in range(2)
        )
        assert diff > 1e-3


class TestNoisyConvexity:
    def test_effects_affine_in_visibility(self):
        lam, nu1, nu2 = 0.3, 0.2, 0.9
        mixed = make_noisy_mub(3, ("computational", "fourier"), lam * nu1 + (1 - lam) * nu2)
        a1 = make_noisy_mub(3, ("computational", "fourier"), nu1)
        a2 = make_noisy_mub(3, ("computational", "fourier"), nu2)
        for x in range(2):
            for z in range(3):
                expect = lam * a1.effect(z, x) + (1 - lam) * a2.effect(z, x)
                assert np.allclose(mixed.effect(z, x), expect, atol=1e-12)
