import math

import numpy as np
import pytest

from covqsc import qalg
from covqsc.concealing import (
    Povm,
    concealing_bits,
    covariant_povm,
    davies_value,
    maximize_accessible_info,
    mutual_info_povm,
)
from covqsc.errors import IncompletePovm, NotCovariant
from covqsc.grouprep import TETRAHEDRAL_STATES, builtin_rep

from conftest import make_fixture, random_state

LOG43 = math.log2(4 / 3)
MIXED_IACC = 1 - (-(0.9 * math.log2(0.9) + 0.1 * math.log2(0.1)))


def loop_mutual_info(states, effects):
    """Textbook double loop over (x, y) with p(x, y) = Tr(rho_x M_y) / N."""
    n = len(states)
    p = [[np.trace(s @ m).real / n for m in effects] for s in states]
    py = [sum(p[x][y] for x in range(n)) for y in range(len(effects))]
    total = 0.0
    for x in range(n):
        for y in range(len(effects)):
            if p[x][y] > 0:
                total += p[x][y] * math.log2(p[x][y] / ((1 / n) * py[y]))
    return total


def random_povm(rng, d, k):
    parts = []
    for _ in range(k):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        parts.append(g @ g.conj().T)
    s = sum(parts)
    w, v = np.linalg.eigh(s)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return Povm(np.array([inv_sqrt @ a @ inv_sqrt for a in parts]))


class TestDaviesValue:
    def test_tetrahedral_orthogonal_seed(self, tetra):
        # overlaps with |1>: 0 for the 3 elements fixing |xi;00>, 2/3 for the other 9
        expected = 1 + (2 / 12) * 9 * (2 / 3) * math.log2(2 / 3)
        assert expected == pytest.approx(LOG43, abs=1e-15)
        assert abs(davies_value(tetra.rep, tetra.orbit, [0, 1]) - expected) <= 1e-10

    def test_tetrahedral_fiducial_seed(self, tetra):
        # overlaps: 1 for 3 elements, 1/3 for 9
        expected = 1 + (2 / 12) * 9 * (1 / 3) * math.log2(1 / 3)
        assert expected == pytest.approx(0.207519, abs=1e-6)
        assert davies_value(tetra.rep, tetra.orbit, TETRAHEDRAL_STATES[0]) == pytest.approx(expected, abs=1e-12)

    def test_pauli(self, pauli):
        assert davies_value(pauli.rep, pauli.orbit, [1, 0]) == pytest.approx(1.0, abs=1e-12)

    def test_refuses_reducible(self):
        b = builtin_rep("reducible_demo")
        from covqsc.grouprep import orbit
        orb = orbit(b.rep, qalg.projector(b.fiducial))
        with pytest.raises(NotCovariant):
            davies_value(b.rep, orb, b.fiducial)

    def test_upper_bound(self, fixture_protocol):
        p = fixture_protocol
        rng = np.random.default_rng(20)
        for _ in range(100):
            assert davies_value(p.rep, p.orbit, random_state(rng, p.d1)) <= math.log2(p.d1) + 1e-12


class TestMutualInfo:
    def test_orthogonal_projective(self):
        states = [np.diag(np.eye(4)[i]) for i in range(4)]
        assert mutual_info_povm(states, Povm(np.array(states))) == pytest.approx(2.0, abs=1e-12)

    def test_trivial_measurement(self, tetra):
        assert mutual_info_povm(tetra.orbit.states, Povm(np.eye(2)[None])) == pytest.approx(0, abs=1e-15)

    def test_matches_loop(self, tetra):
        rng = np.random.default_rng(21)
        for _ in range(10):
            povm = random_povm(rng, 2, 5)
            assert mutual_info_povm(tetra.orbit.states, povm) == pytest.approx(
                loop_mutual_info(tetra.orbit.states, povm.effects), abs=1e-12)

    def test_tetrahedral_cross_check(self, tetra):
        povm = covariant_povm(tetra.rep, [0, 1])
        assert abs(mutual_info_povm(tetra.orbit.states, povm) - LOG43) <= 1e-10

    def test_agreement_random_seeds(self, fixture_protocol):
        p = fixture_protocol
        rng = np.random.default_rng(22)
        for _ in range(50):
            phi = random_state(rng, p.d1)
            a = davies_value(p.rep, p.orbit, phi)
            b = mutual_info_povm(p.orbit.states, covariant_povm(p.rep, phi))
            assert abs(a - b) <= 1e-10


class TestCovariantPovm:
    def test_pauli(self, pauli):
        povm = covariant_povm(pauli.rep, [1, 0])
        assert len(povm.effects) == 4
        diag = sorted(np.round(np.diagonal(povm.effects, axis1=1, axis2=2).real, 12).tolist())
        assert diag == [[0, 0.5], [0, 0.5], [0.5, 0], [0.5, 0]]
        np.testing.assert_allclose(povm.effects.sum(axis=0), np.eye(2), atol=1e-15)

    def test_tetrahedral(self, tetra):
        povm = covariant_povm(tetra.rep, [0, 1])
        assert len(povm.effects) == 12
        assert all(np.linalg.matrix_rank(e, tol=1e-10) == 1 for e in povm.effects)
        assert povm.completeness_defect() <= 1e-12

    def test_random_seeds_complete(self, fixture_protocol):
        rng = np.random.default_rng(23)
        for _ in range(20):
            povm = covariant_povm(fixture_protocol.rep, random_state(rng, fixture_protocol.d1))
            assert povm.completeness_defect() <= 1e-9

    def test_reducible_detected(self):
        rep = builtin_rep("reducible_demo").rep
        with pytest.raises(IncompletePovm):
            covariant_povm(rep, [1, 0, 0, 0])


class TestMaximize:
    def test_tetrahedral(self, tetra):
        rep = maximize_accessible_info(tetra.rep, tetra.orbit)
        assert abs(rep.i_acc_bits - LOG43) <= 1e-4
        assert abs(np.linalg.norm(rep.phi_star) - 1) < 1e-12
        assert davies_value(tetra.rep, tetra.orbit, rep.phi_star) == pytest.approx(rep.i_acc_bits, abs=1e-12)

    def test_pauli(self, pauli):
        assert abs(maximize_accessible_info(pauli.rep, pauli.orbit).i_acc_bits - 1.0) <= 1e-6

    def test_mixed(self, mixed):
        assert MIXED_IACC == pytest.approx(0.531004, abs=1e-6)
        assert abs(maximize_accessible_info(mixed.rep, mixed.orbit).i_acc_bits - MIXED_IACC) <= 1e-4
        # computational-basis measurement attains it
        assert mutual_info_povm(mixed.orbit.states, Povm(np.array([np.diag([1, 0]), np.diag([0, 1])]))) \
            == pytest.approx(MIXED_IACC, abs=1e-12)

    def test_gauge_fixed(self, tetra):
        phi = maximize_accessible_info(tetra.rep, tetra.orbit).phi_star
        first = phi[np.flatnonzero(np.abs(phi) > 1e-12)[0]]
        assert abs(first.imag) < 1e-12 and first.real > 0

    def test_dominates_probes(self, fixture_protocol):
        p = fixture_protocol
        best = maximize_accessible_info(p.rep, p.orbit).i_acc_bits
        rng = np.random.default_rng(24)
        for _ in range(200):
            assert davies_value(p.rep, p.orbit, random_state(rng, p.d1)) <= best + 1e-9

    def test_dominates_random_povms(self, tetra):
        best = maximize_accessible_info(tetra.rep, tetra.orbit).i_acc_bits
        rng = np.random.default_rng(25)
        for i in range(100):
            povm = random_povm(rng, 2, 2 + i % 6)
            assert mutual_info_povm(tetra.orbit.states, povm) <= best + 1e-6

    def test_monotone_in_restarts(self, mixed):
        vals = [maximize_accessible_info(mixed.rep, mixed.orbit, restarts=r, seed=5).i_acc_bits
                for r in (1, 2, 4, 8, 16)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_deterministic(self, tetra):
        a = maximize_accessible_info(tetra.rep, tetra.orbit, restarts=8, seed=2)
        b = maximize_accessible_info(tetra.rep, tetra.orbit, restarts=8, seed=2)
        assert a.i_acc_bits == b.i_acc_bits
        np.testing.assert_array_equal(a.phi_star, b.phi_star)


class TestConcealingBits:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_tetrahedral_additivity(self, k):
        p = make_fixture("tetrahedral", k)
        rep = concealing_bits(p)
        assert rep.method == "additivity"
        assert rep.b_bits == pytest.approx(p.n / 2 * LOG43, abs=k * 1e-4)

    def test_tetrahedral_direct_two_copies(self):
        rep = concealing_bits(make_fixture("tetrahedral", 2), mode="direct")
        assert rep.method == "direct"
        assert abs(rep.b_bits - 2 * LOG43) <= 5e-3

    @pytest.mark.parametrize("mode", ["additivity", "direct"])
    def test_pauli_two_copies(self, mode):
        assert concealing_bits(make_fixture("pauli2", 2), mode=mode).b_bits == pytest.approx(2.0, abs=1e-6)

    def test_direct_cap(self):
        from covqsc.errors import InstanceTooLarge
        with pytest.raises(InstanceTooLarge):
            concealing_bits(make_fixture("tetrahedral", 5), mode="direct")
