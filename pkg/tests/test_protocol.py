import itertools

import numpy as np
import pytest

from covqsc import qalg
from covqsc.errors import NotCovariant, OrbitSizeError
from covqsc.grouprep import OMEGA, TETRAHEDRAL_STATES, builtin_rep, close_group
from covqsc.protocol import (
    LockcomSpec,
    build_protocol,
    commitment_state,
    from_lockcom,
    honest_run,
    purification,
)

from conftest import make_fixture

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


class TestBuild:
    def test_tetrahedral_single(self, tetra):
        assert (tetra.n, tetra.d) == (2, 2)
        assert tetra.is_pure
        for xy, psi in zip(("00", "01", "10", "11"), TETRAHEDRAL_STATES):
            np.testing.assert_allclose(commitment_state(tetra, xy), qalg.projector(psi), atol=1e-8)

    def test_pauli_three_copies(self):
        p = make_fixture("pauli2", 3)
        assert (p.n, p.d) == (3, 8)
        for i, x in enumerate(p.strings):
            basis = np.zeros(8)
            basis[i] = 1
            np.testing.assert_allclose(commitment_state(p, x), np.outer(basis, basis), atol=1e-15)

    def test_mixed(self, mixed):
        assert mixed.n == 1 and not mixed.is_pure
        np.testing.assert_allclose(commitment_state(mixed, "0"), np.diag([0.9, 0.1]), atol=1e-15)
        np.testing.assert_allclose(commitment_state(mixed, "1"), np.diag([0.1, 0.9]), atol=1e-15)

    def test_tensor_rule(self):
        p = make_fixture("tetrahedral", 2)
        want = np.kron(qalg.projector(TETRAHEDRAL_STATES[1]), qalg.projector(TETRAHEDRAL_STATES[2]))
        np.testing.assert_allclose(commitment_state(p, "0110"), want, atol=1e-8)

    def test_reducible_rejected(self):
        b = builtin_rep("reducible_demo")
        with pytest.raises(NotCovariant, match="not a group covariant protocol"):
            build_protocol(b.rep, b.fiducial)

    def test_orbit_size_not_power_of_two(self):
        # cyclic shift on C^3 with the clock matrix: the Weyl-Heisenberg group, irreducible
        shift = np.roll(np.eye(3), 1, axis=0)
        clock = np.diag([1, OMEGA, OMEGA**2])
        rep = close_group([shift, clock])
        with pytest.raises(OrbitSizeError, match="orbit size is 3"):
            build_protocol(rep, [1, 0, 0])

    def test_wrong_length(self, tetra):
        with pytest.raises(ValueError):
            commitment_state(tetra, "010")


class TestPurification:
    @pytest.mark.parametrize("name,copies", [("tetrahedral", 1), ("tetrahedral", 2),
                                             ("pauli2", 3), ("quaternion_mixed", 1),
                                             ("quaternion_mixed", 2)])
    def test_consistency(self, name, copies):
        p = make_fixture(name, copies)
        for x in p.strings:
            psi, dimA = purification(p, x)
            red = qalg.partial_trace(qalg.projector(psi), dimA, p.d)
            np.testing.assert_allclose(red, commitment_state(p, x), atol=1e-9)

    def test_minimal_ancilla(self, tetra, mixed):
        assert set(tetra.purification_dims) == {1}
        assert set(mixed.purification_dims) == {2}


class TestSymmetry:
    @pytest.mark.parametrize("name", ["tetrahedral", "pauli2", "quaternion_mixed"])
    def test_covariance(self, name):
        p = make_fixture(name)
        for g, D in enumerate(p.rep.elements):
            for s, rho in enumerate(p.orbit.states):
                np.testing.assert_allclose(D @ rho @ D.conj().T,
                                           p.orbit.states[p.orbit.action[g, s]], atol=1e-9)

    @pytest.mark.parametrize("name,copies", [("tetrahedral", 2), ("quaternion_mixed", 2)])
    def test_shared_spectrum(self, name, copies):
        p = make_fixture(name, copies)
        spectra = [np.linalg.eigvalsh(commitment_state(p, x))[::-1] for x in p.strings]
        for s in spectra[1:]:
            np.testing.assert_allclose(s, spectra[0], atol=1e-9)


class TestHonestRun:
    @pytest.mark.parametrize("name,copies", [("tetrahedral", 1), ("tetrahedral", 2),
                                             ("tetrahedral", 3), ("pauli2", 3),
                                             ("pauli2", 6), ("quaternion_mixed", 3)])
    def test_always_accepts(self, name, copies):
        p = make_fixture(name, copies)
        for x in p.strings:
            assert abs(honest_run(p, x) - 1) <= 1e-12

    def test_named_examples(self, tetra, mixed):
        assert honest_run(tetra, "00") == pytest.approx(1, abs=1e-12)
        assert honest_run(make_fixture("pauli2", 3), "101") == pytest.approx(1, abs=1e-12)
        assert honest_run(mixed, "0") == pytest.approx(1, abs=1e-12)


class TestLockcom:
    def test_trivial(self):
        fam = from_lockcom(LockcomSpec(1, (np.eye(2),)))
        for x, bit in (("0", [1, 0]), ("1", [0, 1])):
            psi, dimA = fam[x]
            assert dimA == 1
            np.testing.assert_allclose(psi, bit)

    def test_hadamard_pair(self):
        psi, dimA = from_lockcom(LockcomSpec(1, (np.eye(2), HADAMARD)))["0"]
        rho = qalg.partial_trace(qalg.projector(psi), dimA, 2)
        plus = np.array([1, 1]) / np.sqrt(2)
        np.testing.assert_allclose(rho, (np.diag([1, 0]) + np.outer(plus, plus)) / 2, atol=1e-12)
        # closed form of the 2x2 eigenproblem [[3/4, 1/4], [1/4, 1/4]]
        tr, det = 1.0, 3 / 16 - 1 / 16
        disc = np.sqrt(tr**2 / 4 - det)
        lam = np.linalg.eigvalsh(rho)[::-1]
        np.testing.assert_allclose(lam, [tr / 2 + disc, tr / 2 - disc], atol=1e-12)
        np.testing.assert_allclose(lam, [np.cos(np.pi / 8) ** 2, np.sin(np.pi / 8) ** 2], atol=1e-12)
        assert lam[0] == pytest.approx(0.853553, abs=1e-6)

    def test_x_pair_maximally_mixed(self):
        psi, dimA = from_lockcom(LockcomSpec(1, (np.eye(2), np.array([[0, 1], [1, 0]]))))["0"]
        np.testing.assert_allclose(qalg.partial_trace(qalg.projector(psi), dimA, 2), np.eye(2) / 2)

    def test_random_unitaries(self):
        rng = np.random.default_rng(9)
        us = []
        for _ in range(3):
            q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
            us.append(q)
        fam = from_lockcom(LockcomSpec(2, tuple(us)))
        for xi, x in enumerate(itertools.product("01", repeat=2)):
            psi, dimA = fam["".join(x)]
            assert abs(np.linalg.norm(psi) - 1) < 1e-12
            want = sum(np.outer(u[:, xi], u[:, xi].conj()) for u in us) / 3
            np.testing.assert_allclose(qalg.partial_trace(qalg.projector(psi), dimA, 4), want, atol=1e-9)

    def test_rejects_non_unitary(self):
        with pytest.raises(Exception):
            LockcomSpec(1, (np.ones((2, 2)),))
