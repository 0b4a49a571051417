import numpy as np
import pytest
from hypothesis import given

from helpers import pauli_pairs, paulis
from stabrewire.dense import pauli_matrix
from stabrewire.pauli import (PauliError, PauliOperator, anticommutes, commutes, format_pauli, multiply,
                              parse_pauli, product, same_up_to_sign)


def P(text, n=None):
    return parse_pauli(text, n)


# -- oracle values -----------------------------------------------------------------

@pytest.mark.parametrize("a,b,expected", [
    ("X", "Y", "iZ"), ("Y", "Z", "iX"), ("Z", "X", "iY"),
    ("Y", "X", "-iZ"), ("Z", "Y", "-iX"), ("X", "Z", "-iY"),
    ("X", "X", "I"), ("Y", "Y", "I"),
])
def test_single_qubit_products(a, b, expected):
    got = multiply(P(a), P(b))
    assert format_pauli(got) == expected


def test_two_qubit_product_phase():
    # (X x Z)(Z x X) = (XZ) x (ZX) = (-iY) x (iY) = Y x Y
    assert format_pauli(multiply(P("XZ"), P("ZX"))) == "YY"


def test_parse_dense_and_sparse_agree():
    assert P("X1 Z3", 4) == P("XIZI")
    assert P("-Y2", 3) == P("-IYI")
    assert P("Z8").n == 8


def test_parse_identity_needs_n():
    with pytest.raises(PauliError):
        P("I I")
    assert P("I", 3).weight == 0


@pytest.mark.parametrize("bad", ["X0", "Q1", "X1 X1", "XYZ?"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(PauliError):
        P(bad, 3)


def test_sparse_label_beyond_n_rejected():
    with pytest.raises(PauliError):
        P("X5", 3)


def test_length_mismatch_rejected():
    with pytest.raises(PauliError):
        multiply(P("XX"), P("XXX"))
    with pytest.raises(PauliError):
        commutes(P("XX"), P("XXX"))


def test_non_hermitian_constructor_rejected():
    with pytest.raises(PauliError):
        PauliOperator(1, 1, 0, 1)


def test_weight_and_support():
    p = P("X1 Y3 Z7", 9)
    assert p.weight == 3
    assert p.support == (0, 2, 6)


def test_commutation_table():
    assert anticommutes(P("XI"), P("ZI"))
    assert commutes(P("XX"), P("ZZ"))
    assert commutes(P("XIXIXIX"), P("ZIZIZIZ"))
    assert anticommutes(P("Y"), P("Z"))


def test_empty_product_needs_n():
    with pytest.raises(PauliError):
        product([])
    assert product([], 2) == P("II")


# -- properties -----------------------------------------------------------------------

@given(paulis())
def test_format_parse_round_trip(p):
    assert parse_pauli(format_pauli(p)) == p
    assert parse_pauli(format_pauli(p, sparse=True), p.n) == p


@given(pauli_pairs(max_n=3))
def test_multiply_matches_dense_matrices(pair):
    a, b = pair
    prod = multiply(a, b)
    mat = (1j ** prod.phase) * pauli_matrix(prod.unsigned())
    assert np.allclose(mat, pauli_matrix(a) @ pauli_matrix(b))


@given(pauli_pairs(max_n=3))
def test_commutation_matches_dense(pair):
    a, b = pair
    ma, mb = pauli_matrix(a), pauli_matrix(b)
    assert commutes(a, b) == np.allclose(ma @ mb, mb @ ma)


@given(pauli_pairs())
def test_commutation_symmetric_and_products(pair):
    a, b = pair
    assert commutes(a, b) == commutes(b, a)
    ab, ba = multiply(a, b), multiply(b, a)
    assert same_up_to_sign(ab, ba)
    assert (ab.phase == ba.phase) == commutes(a, b)


@given(paulis())
def test_square_is_identity(p):
    sq = multiply(p, p)
    assert sq == PauliOperator.identity(p.n)


@given(pauli_pairs(), paulis(n=1))
def test_multiplication_associative(pair, _):
    a, b = pair
    c = multiply(a, b).hermitian()
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
