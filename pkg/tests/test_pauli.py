import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cncsim.errors import DimensionMismatch, DomainError, ParseError
from cncsim.pauli import (
        all_labels,
    beta,
    commutes,
    embed,
    is_real,
    label_from_key,
    label_index,
    parse_pauli,
    parse_signed_pauli,
    product_phase,
    real_labels,
    symplectic,
)
from cncsim.oracle import pauli_matrix


def lab(text):
    return parse_pauli(text)


class TestSymplectic:
    def test_x_z_anticommute(self):
        assert symplectic(lab("X"), lab("Z")) == 1

    def test_alternating(self):
        for a in all_labels(2):
            assert symplectic(a, a) == 0

    def test_xx_zz_commute(self):
        assert symplectic(lab("XX"), lab("ZZ")) == 0

    def test_matches_matrix_commutator(self):
        for a in all_labels(2):
            for b in all_labels(2):
                ta, tb = pauli_matrix(a), pauli_matrix(b)
                comm_zero = np.allclose(ta @ tb, tb @ ta)
                assert (symplectic(a, b) == 0) == comm_zero

    def test_dimension_error(self):
        with pytest.raises(DimensionMismatch):
            symplectic(lab("X"), lab("XX"))


class TestBeta:
    def test_beta_self_is_zero(self):
        for a in all_labels(2):
            assert beta(a, a) == 0

    def test_xi_iz(self):
        assert beta(lab("XI"), lab("IZ")) == 0

    def test_xx_zz(self):
        assert beta(lab("XX"), lab("ZZ")) == 1

    def test_anticommuting_pair_rejected(self):
        with pytest.raises(DomainError):
            beta(lab("X"), lab("Z"))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matrix_oracle_equivalence(self, n):
        labels = list(all_labels(n))
        for a in labels:
            for b in labels:
                if symplectic(a, b):
                    continue
                lhs = pauli_matrix(a) @ pauli_matrix(b)
                rhs = (-1.0) ** beta(a, b) * pauli_matrix(a ^ b)
                assert np.allclose(lhs, rhs, atol=1e-12)

    def test_symmetric_on_commuting_pairs(self):
        for a in all_labels(2):
            for b in all_labels(2):
                if symplectic(a, b) == 0:
                    assert beta(a, b) == beta(b, a)
                    assert beta(a, b) == beta(a, a ^ b)

    def test_cocycle_identity(self):
        labels = list(all_labels(2))
        for a in labels:
            for b in labels:
                if symplectic(a, b):
                    continue
                for c in labels:
                    if symplectic(a, c) or symplectic(b, c):
                        continue
                    total = (
                        beta(a, b) + beta(a ^ b, c) + beta(b, c) + beta(a, b ^ c)
                    ) % 2
                    assert total == 0

    def test_product_phase_general(self):
        for a in all_labels(2):
            for b in all_labels(2):
                k = product_phase(a, b)
                lhs = pauli_matrix(a) @ pauli_matrix(b)
                assert np.allclose(lhs, 1j**k * pauli_matrix(a ^ b), atol=1e-12)


class TestHermiticity:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_square_and_hermitian(self, n):
        rng = np.random.default_rng(n)
        labels = list(all_labels(n))
        picks = labels if n <= 2 else [labels[int(i)] for i in rng.integers(len(labels), size=32)]
        for a in picks:
            t = pauli_matrix(a)
            assert np.allclose(t, t.conj().T, atol=1e-12)
            assert np.allclose(t @ t, np.eye(2**n), atol=1e-12)


class TestRealness:
    def test_y_is_imaginary(self):
        assert not is_real(lab("Y"))

    def test_yy_is_real(self):
        assert is_real(lab("YY"))
        assert np.allclose(pauli_matrix(lab("YY")).imag, 0)

    def test_real_count_n2(self):
        reals = real_labels(2)
        assert len(reals) == 10  # identity plus the nine square observables

    def test_matches_matrix(self):
        for a in all_labels(2):
            assert is_real(a) == bool(np.allclose(pauli_matrix(a).imag, 0))


class TestStrings:
    def test_roundtrip(self):
        for text in ("I", "X", "XZ", "YIX", "ZZZZ"):
            assert str(parse_pauli(text)) == text

    def test_first_character_is_qubit_one(self):
        a = parse_pauli("XZ")
        assert a.x == 0b01 and a.z == 0b10

    def test_signed(self):
        sign, a = parse_signed_pauli("-XZ")
        assert sign == 1 and str(a) == "XZ"
        assert parse_signed_pauli("+Y") == (0, lab("Y"))

    def test_bad_input(self):
        with pytest.raises(ParseError):
            parse_pauli("XQ")
        with pytest.raises(ParseError):
            parse_pauli("-X")
        with pytest.raises(ParseError):
            parse_pauli("")


class TestIndexing:
    def test_key_roundtrip(self):
        for a in all_labels(2):
            assert label_from_key(2, a.key) == a
            assert label_index(a) == a.key

    def test_group_xor(self):
        a, b = lab("XY"), lab("YZ")
        assert (a ^ b) ^ b == a

    def test_embed(self):
        a = embed(lab("X"), 3, 1)
        assert str(a) == "IXI"


@st.composite
def label_pairs(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    key1 = draw(st.integers(min_value=0, max_value=4**n - 1))
    key2 = draw(st.integers(min_value=0, max_value=4**n - 1))
    return label_from_key(n, key1), label_from_key(n, key2)


@settings(max_examples=200, deadline=None)
@given(label_pairs())
def test_symplectic_bilinear(pair):
    a, b = pair
    for c in (a, b, a ^ b):
        assert symplectic(a ^ b, c) == (symplectic(a, c) + symplectic(b, c)) % 2


@settings(max_examples=200, deadline=None)
@given(label_pairs())
def test_beta_defined_iff_commuting(pair):
    a, b = pair
    if commutes(a, b):
        assert beta(a, b) in (0, 1)
    else:
        with pytest.raises(DomainError):
            beta(a, b)
