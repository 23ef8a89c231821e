import math

import numpy as np
import pytest

from cncsim.decomposer import (
    ExpectationVector,
    build_columns,
    dual_value,
    feasibility,
    robustness,
    robustness_of_magic,
    sandwich_gap,
    tensor_compose,
)
from cncsim.errors import DomainError, InvalidStateError
from cncsim.oracle import named_state, pauli_matrix, phase_point_matrix, wrep_matrix
from cncsim.pauli import all_labels, identity_label, parse_pauli
from cncsim.phasespace import cached_catalog, stabilizer_point
from cncsim.simulator import WRep, product_wrep
from conftest import random_density, random_pure


def lab(text):
    return parse_pauli(text)


class TestExpectationVector:
    def test_from_dense_identity_row(self):
        b = ExpectationVector.from_dense(np.eye(4) / 4)
        assert b.values[0] == pytest.approx(1.0)
        assert np.abs(b.values[1:]).max() < 1e-12

    def test_from_pauli_map(self):
        b = ExpectationVector.from_pauli_map(1, {"Z": 1.0})
        ref = ExpectationVector.from_dense(named_state("stab:+Z"))
        assert np.allclose(b.values, ref.values)

    def test_rejects_bad_trace(self):
        vals = np.zeros(4)
        vals[0] = 0.5
        with pytest.raises(InvalidStateError):
            ExpectationVector(1, vals)

    def test_rejects_out_of_range(self):
        vals = np.zeros(4)
        vals[0] = 1.0
        vals[2] = 1.5
        with pytest.raises(InvalidStateError):
            ExpectationVector(1, vals)


class TestDualValue:
    def test_identity_label_always_one(self, cat_n2):
        for point in cat_n2.points[::17]:
            assert dual_value(point, identity_label(2)) == 1

    def test_outside_is_zero(self):
        point = stabilizer_point(["+ZI", "+IZ"])
        assert dual_value(point, lab("XI")) == 0

    def test_matches_dense_trace(self, cat_n2):
        rng = np.random.default_rng(0)
        for i in rng.integers(len(cat_n2.points), size=12):
            point = cat_n2.points[int(i)]
            amat = phase_point_matrix(point)
            for a in all_labels(2):
                ref = np.trace(amat @ pauli_matrix(a)).real
                assert abs(dual_value(point, a) - ref) < 1e-12


class TestColumns:
    def test_nonzeros_per_column(self, cat_n2):
        cols = build_columns(cat_n2)
        dense = cols.dense
        for omega in cat_n2.sets:
            start, stop = cat_n2.set_ranges[omega]
            nnz = np.count_nonzero(dense[:, start])
            # |Omega| = (1 + xi) * 2^(n - m): 4 for stabilizer-type sets,
            # 8 for m=1, 6 for m=2 at two qubits
            assert nnz == omega.size()
            rows, vals = cols.column_sparse(start)
            assert len(rows) == omega.size()
            assert set(np.abs(vals)) == {1.0}

    def test_identity_row_is_all_ones(self, cat_n2):
        dense = build_columns(cat_n2).dense
        assert np.all(dense[0] == 1.0)

    def test_dense_matches_sparse(self, cat_n2_stab):
        cols = build_columns(cat_n2_stab)
        dense = cols.dense
        for j in (0, 7, 33, 59):
            rows, vals = cols.column_sparse(j)
            rebuilt = np.zeros(16)
            rebuilt[rows] = vals
            assert np.array_equal(rebuilt, dense[:, j])


class TestFeasibility:
    def test_every_single_qubit_state(self, cat_n1):
        rng = np.random.default_rng(1)
        for _ in range(25):
            rho = random_density(rng, 1)
            w = feasibility(ExpectationVector.from_dense(rho), cat_n1)
            assert w is not None and w.is_positive()
            assert np.allclose(wrep_matrix(w.entries, 1), rho, atol=1e-9)

    def test_two_copies_of_equatorial_states(self, cat_n2_max):
        for phi in np.linspace(0, 2 * math.pi, 7, endpoint=False):
            rho = named_state(f"H(phi={phi})^2")
            w = feasibility(ExpectationVector.from_dense(rho), cat_n2_max)
            assert w is not None

    def test_three_h_copies_infeasible(self):
        cat3 = cached_catalog(3, {1, 2, 3})
        b = ExpectationVector.from_dense(named_state("H^3"))
        assert feasibility(b, cat3) is None


class TestRobustness:
    def test_stabilizer_state_is_free(self, cat_n2_max):
        b = ExpectationVector.from_dense(named_state("stab:+ZI,+IZ"))
        res = robustness(b, cat_n2_max)
        assert res.objective == pytest.approx(1.0, abs=1e-9)

    def test_maximally_mixed_stabilizer_robustness(self):
        b = ExpectationVector.from_dense(np.eye(4) / 4)
        res = robustness_of_magic(b)
        assert res.objective == pytest.approx(1.0, abs=1e-9)

    def test_reconstruction_and_support(self, cat_n2_max):
        rng = np.random.default_rng(2)
        for _ in range(5):
            rho = random_pure(rng, 2)
            b = ExpectationVector.from_dense(rho)
            res = robustness(b, cat_n2_max)
            assert res.status == "optimal"
            assert res.residual < 1e-9
            assert res.support_size <= 16
            assert np.allclose(
                wrep_matrix(res.solution.entries, 2), rho, atol=1e-8
            )
            assert res.solution.norm1() == pytest.approx(res.objective, abs=1e-9)

    def test_robustness_never_below_one(self, cat_n2_max):
        rng = np.random.default_rng(3)
        for _ in range(5):
            b = ExpectationVector.from_dense(random_density(rng, 2))
            assert robustness(b, cat_n2_max).objective >= 1 - 1e-9

    def test_stabilizer_catalog_required(self, cat_n2_max):
        b = ExpectationVector.from_dense(np.eye(4) / 4)
        with pytest.raises(DomainError):
            robustness_of_magic(b, cat_n2_max)


class TestSandwich:
    def test_bound_holds_on_random_states(self, cat_n2_max):
        rng = np.random.default_rng(4)
        for _ in range(10):
            b = ExpectationVector.from_dense(random_density(rng, 2))
            r, rs, ok = sandwich_gap(b, cat_n2_max)
            assert ok
            assert r <= rs + 1e-6

    def test_t_two_copies(self, cat_n2_max):
        b = ExpectationVector.from_dense(named_state("T^2"))
        r, rs, ok = sandwich_gap(b, cat_n2_max)
        assert ok
        assert r == pytest.approx(1.0, abs=1e-6)
        assert rs == pytest.approx(2.23205, abs=2e-3)


class TestTraciality:
    def test_pairing_reproduces_traces(self, cat_n2_max):
        rng = np.random.default_rng(5)
        for _ in range(5):
            rho = random_density(rng, 2)
            w = feasibility(ExpectationVector.from_dense(rho), cat_n2_max)
            coeffs = rng.normal(size=16)
            amat = sum(
                c * pauli_matrix(a) for c, a in zip(coeffs, all_labels(2))
            )
            ref = np.trace(amat @ rho).real
            paired = 0.0
            for point, wgt in w.entries.items():
                dual = sum(
                    c * dual_value(point, a)
                    for c, a in zip(coeffs, all_labels(2))
                )
                paired += dual * wgt
            assert abs(paired - ref) < 1e-10


class TestTensorCompose:
    def test_point_times_point_dense(self):
        w1 = product_wrep([(1 / math.sqrt(3),) * 3])
        w0 = WRep(1, {stabilizer_point(["+Z"]): 1.0})
        out = tensor_compose(w1, w0)
        ref = np.kron(named_state("T"), named_state("stab:+Z"))
        assert np.allclose(wrep_matrix(out.entries, 2), ref, atol=1e-12)
        assert out.norm1() == pytest.approx(w1.norm1() * w0.norm1())

    def test_block_norm_identity(self, cat_n2_max):
        # composing an optimal expansion with an optimal stabilizer
        # expansion realizes the product-form 1-norm R(T) * R_S(T)
        b1 = ExpectationVector.from_dense(named_state("T"))
        cat1 = cached_catalog(1, {1})
        r1 = robustness(b1, cat1)
        rs1 = robustness_of_magic(b1)
        out = tensor_compose(r1.solution, rs1.solution)
        assert out.norm1() == pytest.approx(
            r1.objective * rs1.objective, abs=1e-9
        )
        assert np.allclose(
            wrep_matrix(out.entries, 2), named_state("T^2"), atol=1e-8
        )

    def test_nonisotropic_second_factor_rejected(self):
        w1 = product_wrep([(1 / math.sqrt(3),) * 3])
        with pytest.raises(DomainError):
            tensor_compose(w1, w1)
