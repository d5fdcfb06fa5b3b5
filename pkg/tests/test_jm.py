from __future__ import annotations

import numpy as np
import pytest

from conftest import haar_unitary, pair_assemblage, random_rank1_povm, random_unbiased_qubit_pair
from incompat.classify import busch_incompatible
from incompat.errors import TooLarge
from incompat.families import make_noisy_mub
from incompat.jm import enumerate_strategies, solve_jm
from incompat.povm import Assemblage, Povm


def qutrit_basis() -> Povm:
    eye = np.eye(3)
    return Povm(3, tuple(np.outer(eye[k], eye[k]) for k in range(3)))


class TestStrategies:
    @pytest.mark.parametrize("n,d_bar,count", [(2, 3, 9), (3, 2, 8), (2, 4, 16)])
    def test_counts(self, n, d_bar, count):
        s = enumerate_strategies(n, d_bar)
        assert len(s) == count
        assert s.strategies[0] == (0,) * n
        assert s.strategies[-1] == (d_bar - 1,) * n

    def test_cap(self):
        with pytest.raises(TooLarge):
            enumerate_strategies(6, 8)


class TestSolveJm:
    def test_identical_projective_pair_compatible_at_zero(self):
        verdict = solve_jm(pair_assemblage(qutrit_basis(), qutrit_basis()))
        assert verdict.mu_star == pytest.approx(0.0, abs=1e-8)
        assert verdict.status == "compatible"

    def test_mub_pair_above_threshold_incompatible(self):
        verdict = solve_jm(make_noisy_mub(3, ("computational", "fourier"), 0.70))
        assert verdict.status == "incompatible"

    def test_mub_pair_below_threshold_compatible(self):
        verdict = solve_jm(make_noisy_mub(3, ("computational", "fourier"), 0.65))
        assert verdict.status == "compatible"

    def test_accuracy_contract(self):
        verdict = solve_jm(make_noisy_mub(3, ("computational", "fourier"), 0.7))
        assert verdict.stats.gap <= 1e-8
        assert verdict.stats.marginal_residual <= 1e-9

    def test_parent_reproduces_marginals(self):
        a = make_noisy_mub(3, ("computational", "fourier"), 0.6)
        verdict = solve_jm(a)
        strategies = enumerate_strategies(2, 3).strategies
        for x in range(2):
            for z in range(3):
                total = np.sum(
                    [g for lam, g in zip(strategies, verdict.parent) if lam[x] == z], axis=0
                )
                assert np.max(np.abs(total - a.effect(z, x))) <= 1e-7

    def test_parent_sums_to_identity(self):
        verdict = solve_jm(make_noisy_mub(3, ("computational", "fourier"), 0.8))
        assert np.max(np.abs(np.sum(verdict.parent, axis=0) - np.eye(3))) <= 1e-7

    def test_parent_bounded_below_by_mu(self):
        verdict = solve_jm(make_noisy_mub(3, ("computational", "fourier"), 0.9))
        for g in verdict.parent:
            low = float(np.linalg.eigvalsh((g + g.conj().T) / 2)[0])
            assert low >= verdict.mu_star - 1e-9


class TestInvariances:
    def test_outcome_permutation(self, rng):
        a = make_noisy_mub(3, ("computational", "fourier"), 0.69)
        base = solve_jm(a).mu_star
        perm = (2, 0, 1)
        permuted = Povm(3, tuple(a.povms[1].effects[p] for p in perm))
        shuffled = Assemblage(3, 3, (a.povms[0], permuted))
        assert solve_jm(shuffled).mu_star == pytest.approx(base, abs=1e-7)

    def test_unitary_conjugation(self, rng):
        a = make_noisy_mub(3, ("computational", "fourier"), 0.72)
        base = solve_jm(a).mu_star
        u = haar_unitary(3, rng)
        rotated = Assemblage(3, 3, tuple(
            Povm(3, tuple(u @ e @ u.conj().T for e in p.effects)) for p in a.povms
        ))
        assert solve_jm(rotated).mu_star == pytest.approx(base, abs=1e-7)

    def test_measurement_reorder(self, rng):
        p, q = random_rank1_povm(3, rng), random_rank1_povm(3, rng)
        assert solve_jm(pair_assemblage(p, q)).mu_star == pytest.approx(
            solve_jm(pair_assemblage(q, p)).mu_star, abs=1e-7
        )

    def test_monotone_in_visibility(self):
        grid = np.linspace(0.0, 1.0, 11)
        mus = [solve_jm(make_noisy_mub(3, ("computational", "fourier"), nu)).mu_star
               for nu in grid]
        diffs = np.diff(mus)
        assert np.all(diffs <= 1e-9)


class TestBuschOracle:
    def test_agreement_on_random_pairs(self, rng):
        mismatches = 0
        for _ in range(40):
            a, b = random_unbiased_qubit_pair(rng)
            verdict = solve_jm(pair_assemblage(a.to_povm(), b.to_povm()))
            if verdict.status == "borderline":
                continue
            if busch_incompatible(a, b) != (verdict.status == "incompatible"):
                mismatches += 1
        assert mismatches == 0
