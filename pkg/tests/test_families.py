from __future__ import annotations

import numpy as np
import pytest

from incompat.errors import BadVisibility
from incompat.families import (
    make_cglmp,
    make_experiment_scenario,
    make_noisy_mub,
    make_noisy_pauli,
    make_trine_xyz,
)
from incompat.povm import bloch_of_binary_qubit, validate_povm


def rank1_vectors(p):
    vecs = []
    for e in p.effects:
        w, v = np.linalg.eigh(e)
        vecs.append(v[:, -1])
    return vecs


class TestNoisyMub:
    @pytest.mark.parametrize("d", [3, 4])
    def test_unbiasedness_at_full_visibility(self, d):
        a = make_noisy_mub(d, ("computational", "fourier", "third"), 1.0)
        bases = [rank1_vectors(p) for p in a.povms]
        target = 1 / np.sqrt(d)
        for bi in range(3):
            for bj in range(bi + 1, 3):
                for v in bases[bi]:
                    for w in bases[bj]:
                        assert abs(np.vdot(v, w)) == pytest.approx(target, abs=1e-10)

    def test_third_basis_orthonormal(self):
        a = make_noisy_mub(3, ("third",), 1.0)
        vecs = rank1_vectors(a.povms[0])
        gram = np.array([[np.vdot(v, w) for w in vecs] for v in vecs])
        assert np.allclose(gram, np.eye(3), atol=1e-10)

    def test_zero_visibility_trivial(self):
        a = make_noisy_mub(3, ("computational", "fourier"), 0.0)
        for p in a.povms:
            for e in p.effects:
                assert np.allclose(e, np.eye(3) / 3)

    @pytest.mark.parametrize("d", [3, 4])
    @pytest.mark.parametrize("nu", [0.0, 0.31, 0.7, 1.0])
    def test_all_constructor_outputs_valid(self, d, nu):
        a = make_noisy_mub(d, ("computational", "fourier", "third"), nu)
        assert a.validate() == []

    def test_visibility_range_checked(self):
        with pytest.raises(BadVisibility):
            make_noisy_mub(3, ("computational",), 1.2)


class TestNoisyPauli:
    def test_full_visibility_projectors(self):
        a = make_noisy_pauli(1.0, 1.0, 1.0)
        for p in a.povms:
            for e in p.effects:
                assert np.allclose(e @ e, e, atol=1e-12)

    def test_bloch_extraction(self):
        a = make_noisy_pauli(0.3, 0.5, 0.7)
        vecs = [bloch_of_binary_qubit(p).vec for p in a.povms]
        assert np.allclose(vecs[0], [0.3, 0, 0])
        assert np.allclose(vecs[1], [0, 0.5, 0])
        assert np.allclose(vecs[2], [0, 0, 0.7])

    def test_zero_visibility(self):
        a = make_noisy_pauli(0.0, 0.0, 0.0)
        for p in a.povms:
            for e in p.effects:
                assert np.allclose(e, np.eye(2) / 2)


class TestCglmp:
    @pytest.mark.parametrize("side", ["alice", "bob"])
    @pytest.mark.parametrize("setting", [1, 2])
    def test_valid(self, side, setting):
        assert validate_povm(make_cglmp(side, setting)) == []

    def test_orthonormal_within_setting(self):
        p = make_cglmp("alice", 2)
        vecs = rank1_vectors(p)
        assert abs(np.vdot(vecs[0], vecs[1])) <= 1e-10

    def test_alice_first_setting_uniform_vector(self):
        p = make_cglmp("alice", 1)
        e0 = p.effects[0]
        uniform = np.ones(3) / np.sqrt(3)
        assert np.allclose(e0, np.outer(uniform, uniform.conj()), atol=1e-12)


class TestExperimentScenario:
    def test_state_normalized(self):
        state, _, _ = make_experiment_scenario()
        assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-14)

    def test_raw_coefficients_norm(self):
        raw = np.array([0.596, 0.529, 0.604])
        assert float(raw @ raw) == pytest.approx(0.999873, abs=1e-6)

    def test_all_povms_valid(self):
        _, alice, bob = make_experiment_scenario()
        for p in (*alice, *bob):
            assert validate_povm(p) == []

    def test_state_diagonal_in_fixed_ordering(self):
        state, _, _ = make_experiment_scenario()
        nonzero = np.flatnonzero(np.abs(state) > 1e-12)
        assert list(nonzero) == [0, 4, 8]


class TestTrine:
    def test_z_is_computational(self):
        a = make_trine_xyz()
        for k in range(3):
            expect = np.zeros((3, 3))
            expect[k, k] = 1
            assert np.allclose(a.povms[2].effects[k], expect)

    def test_all_valid(self):
        assert make_trine_xyz().validate() == []

    def test_x_orthonormal(self):
        a = make_trine_xyz()
        vecs = rank1_vectors(a.povms[0])
        assert abs(np.vdot(vecs[0], vecs[1])) <= 1e-10
