import numpy as np
import pytest

from cncsim.dynamics import (
    CliffordTableau,
    clifford_act,
    clifford_from_gates,
    gamma_plus_bracket,
    gamma_times_s,
    invert_gates,
    measure_update,
    omega_times_a,
)
from cncsim.errors import DomainError, ParseError
from cncsim.oracle import pauli_matrix, phase_point_matrix, projector
from cncsim.pauli import all_labels, parse_pauli
from cncsim.phasespace import (
    PhasePoint,
    ValueAssignment,
    brute_force_cnc_check,
    make_cnc,
        stabilizer_point,
)
from conftest import dense_unitary, random_gates


def lab(text):
    return parse_pauli(text)


def labs(*texts):
    return [parse_pauli(t) for t in texts]


class TestOmegaTimesA:
    def test_stabilizer_flip(self):
        omega = make_cnc(labs("ZI", "IZ"))
        out = omega_times_a(omega, lab("XI"))
        assert out == make_cnc(labs("XI", "IZ"))

    def test_member_rejected(self):
        omega = make_cnc(labs("ZI", "IZ"))
        with pytest.raises(DomainError):
            omega_times_a(omega, lab("ZZ"))

    def test_n1_full_set_has_no_outside_labels(self):
        omega = make_cnc([], labs("X", "Y", "Z"), n=1)
        for a in all_labels(1):
            if a.is_identity:
                continue
            with pytest.raises(DomainError):
                omega_times_a(omega, a)

    def test_result_is_cnc(self, cat_n2):
        for omega in cat_n2.sets:
            for a in all_labels(2):
                if a.is_identity or a in omega:
                    continue
                out = omega_times_a(omega, a)
                res = brute_force_cnc_check(out.elements())
                assert res.closed and res.noncontextual
                assert a in out


class TestGammaTimesS:
    def test_values_preserved_on_commuting_part(self):
        point = stabilizer_point(["+ZI", "-IZ"])
        new = gamma_times_s(point, lab("XI"), 1)
        assert new.gamma_of(lab("IZ")) == 1
        assert new.gamma_of(lab("XI")) == 1

    def test_measured_label_gets_outcome(self, cat_n2):
        rng = np.random.default_rng(2)
        for _ in range(25):
            point = cat_n2.points[int(rng.integers(len(cat_n2.points)))]
            a = lab(
                "".join("IXYZ"[int(rng.integers(4))] for _ in range(2))
            )
            if a.is_identity or a in point.omega:
                continue
            for s in (0, 1):
                assert gamma_times_s(point, a, s).gamma_of(a) == s

    def test_dense_stabilizer_update(self):
        point = stabilizer_point(["+ZI", "+IZ"])
        a = lab("XI")
        new = gamma_times_s(point, a, 1)
        pr = projector(a, 1)
        lhs = pr @ phase_point_matrix(point) @ pr
        assert np.allclose(lhs, phase_point_matrix(new) / 2, atol=1e-12)


class TestMeasureUpdate:
    def test_deterministic_inside(self):
        omega = make_cnc([], labs("X", "Y", "Z"), n=1)
        point = PhasePoint(omega, ValueAssignment((), (0, 0, 0)))
        z = lab("Z")
        branch = measure_update(point, z, 0)
        assert branch.probability == 1.0
        flips = {q.gamma_of(lab("X")) for q, _ in branch.successors}
        assert flips == {0, 1}  # one branch flips the anticommuting values
        assert all(q.gamma_of(z) == 0 for q, _ in branch.successors)

    def test_wrong_outcome_probability_zero(self):
        omega = make_cnc([], labs("X", "Y", "Z"), n=1)
        point = PhasePoint(omega, ValueAssignment((), (0, 0, 0)))
        assert measure_update(point, lab("Z"), 1).probability == 0.0

    def test_outside_is_fair_coin(self):
        point = stabilizer_point(["+ZI", "+IZ"])
        branch = measure_update(point, lab("XI"), 0)
        assert branch.probability == 0.5
        assert len(branch.successors) == 1

    def test_gamma_plus_bracket_preserves_measured_value(self, cat_n2):
        rng = np.random.default_rng(3)
        for _ in range(30):
            point = cat_n2.points[int(rng.integers(len(cat_n2.points)))]
            elems = [e for e in point.omega.elements() if not e.is_identity]
            a = elems[int(rng.integers(len(elems)))]
            flipped = gamma_plus_bracket(point, a)
            assert flipped.gamma_of(a) == point.gamma_of(a)

    def test_successors_remain_valid_points(self, cat_n2):
        rng = np.random.default_rng(4)
        for _ in range(20):
            point = cat_n2.points[int(rng.integers(len(cat_n2.points)))]
            a = lab("".join("IXYZ"[int(rng.integers(4))] for _ in range(2)))
            if a.is_identity:
                continue
            branch = measure_update(point, a, int(rng.integers(2)))
            for q, _ in branch.successors:
                res = brute_force_cnc_check(q.omega.elements())
                assert res.closed and res.noncontextual


class TestCliffordTableau:
    def test_identity(self):
        t = CliffordTableau.identity(2)
        for a in all_labels(2):
            assert t.image_of(a) == (0, a)

    def test_empty_gate_list(self):
        assert clifford_from_gates(2, []) == CliffordTableau.identity(2)

    def test_hadamard(self):
        t = clifford_from_gates(1, ["H 1"])
        assert t.image_of(lab("X")) == (0, lab("Z"))
        assert t.image_of(lab("Z")) == (0, lab("X"))
        assert t.image_of(lab("Y")) == (1, lab("Y"))

    def test_s_squared_is_z(self):
        ss = clifford_from_gates(1, ["S 1", "S 1"])
        z = clifford_from_gates(1, ["Z 1"])
        for a in all_labels(1):
            assert ss.image_of(a) == z.image_of(a)

    def test_symplectic_preserved_under_composition(self):
        rng = np.random.default_rng(5)
        for n in (1, 2, 3):
            t = clifford_from_gates(n, random_gates(rng, n, 20))
            assert t.preserves_symplectic()

    def test_bad_gates(self):
        with pytest.raises(ParseError):
            clifford_from_gates(2, ["H 3"])
        with pytest.raises(ParseError):
            clifford_from_gates(2, ["CX 1 1"])
        with pytest.raises(ParseError):
            clifford_from_gates(2, ["FOO 1"])

    def test_conjugation_matches_dense(self):
        rng = np.random.default_rng(6)
        for n in (1, 2):
            for _ in range(20):
                gates = random_gates(rng, n, 12)
                t = clifford_from_gates(n, gates)
                u = dense_unitary(gates, n)
                for a in all_labels(n):
                    phase, img = t.image_of(a)
                    lhs = u @ pauli_matrix(a) @ u.conj().T
                    assert np.allclose(
                        lhs, (-1.0) ** phase * pauli_matrix(img), atol=1e-10
                    )

    def test_inverse_gates(self):
        rng = np.random.default_rng(7)
        gates = random_gates(rng, 2, 15)
        t = clifford_from_gates(2, gates + invert_gates(gates))
        assert t == CliffordTableau.identity(2)


class TestCliffordAct:
    def test_identity_keeps_point(self, cat_n2):
        t = CliffordTableau.identity(2)
        point = cat_n2.points[17]
        assert clifford_act(t, point) == point

    def test_hh_on_zz_stabilizer(self):
        point = stabilizer_point(["+ZI", "+IZ"])
        t = clifford_from_gates(2, ["H 1", "H 2"])
        moved = clifford_act(t, point)
        assert moved == stabilizer_point(["+XI", "+IX"])

    def test_random_dense_oracle(self, cat_n2):
        rng = np.random.default_rng(8)
        for _ in range(40):
            gates = random_gates(rng, 2, 10)
            t = clifford_from_gates(2, gates)
            u = dense_unitary(gates, 2)
            point = cat_n2.points[int(rng.integers(len(cat_n2.points)))]
            moved = clifford_act(t, point)
            lhs = u @ phase_point_matrix(point) @ u.conj().T
            assert np.allclose(lhs, phase_point_matrix(moved), atol=1e-10)

    def test_wrep_pushforward_covariance(self, cat_n2_max):
        from cncsim.decomposer import ExpectationVector, feasibility
        from cncsim.oracle import named_state, wrep_matrix
        from cncsim.simulator import WRep

        rho = named_state("T^2")
        w = feasibility(ExpectationVector.from_dense(rho), cat_n2_max)
        rng = np.random.default_rng(13)
        gates = random_gates(rng, 2, 14)
        t = clifford_from_gates(2, gates)
        u = dense_unitary(gates, 2)
        pushed = WRep(2, {})
        for point, wgt in w.entries.items():
            q = clifford_act(t, point)
            pushed.entries[q] = pushed.entries.get(q, 0.0) + wgt
        assert np.allclose(
            wrep_matrix(pushed.entries, 2), u @ rho @ u.conj().T, atol=1e-10
        )
