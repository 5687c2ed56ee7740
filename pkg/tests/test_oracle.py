import json

import numpy as np
import pytest
from hypothesis import given

from paulicomp.composer import SparsePauliOp, compose_sequential
from paulicomp.core import encode_context, parse_pauli_string
from paulicomp.errors import DenseTooLarge
from paulicomp.oracle import assert_equiv, dense_kronecker, one_nonzero_per_row, sparse_to_dense
from conftest import pauli_text


def test_dense_x():
    assert np.array_equal(dense_kronecker(parse_pauli_string("X")), [[0, 1], [1, 0]])


def test_dense_identity():
    assert np.array_equal(dense_kronecker(parse_pauli_string("I")), np.eye(2))


def test_dense_xz_by_hand():
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 2], expected[1, 3], expected[2, 0], expected[3, 1] = 1, -1, 1, -1
    assert np.array_equal(dense_kronecker(parse_pauli_string("XZ")), expected)


def test_dense_guard():
    with pytest.raises(DenseTooLarge):
        dense_kronecker(parse_pauli_string("I" * 13))


@given(pauli_text)
def test_dense_is_hermitian_involution(text):
    d = dense_kronecker(parse_pauli_string(text[:6]))
    assert np.array_equal(d, d.conj().T)
    assert np.array_equal(d @ d, np.eye(len(d)))


def test_sparse_to_dense_examples(ctx_of):
    assert np.array_equal(sparse_to_dense(compose_sequential(ctx_of("Z"))), np.diag([1, -1]))
    assert np.array_equal(sparse_to_dense(compose_sequential(ctx_of("Y"))), [[0, -1j], [1j, 0]])
    d = sparse_to_dense(compose_sequential(ctx_of("XZ")))
    assert np.array_equal(d, dense_kronecker(parse_pauli_string("XZ")))
    assert one_nonzero_per_row(d)


@pytest.mark.parametrize("text", ["XZ", "YY", "ZYXI"])
def test_assert_equiv_match(text):
    s = parse_pauli_string(text)
    report = assert_equiv(compose_sequential(encode_context(s)), s)
    assert report.match and report.row is None


def test_assert_equiv_detects_fault():
    s = parse_pauli_string("Z")
    op = compose_sequential(encode_context(s), packed=False)
    m = op.m.copy()
    m[0] ^= 1
    bad = SparsePauliOp(op.n, op.k.copy(), m, packed=False)
    report = assert_equiv(bad, s)
    assert not report.match
    assert (report.row, report.col) == (0, 0)
    assert report.expected == 1 and report.got == -1
    assert json.loads(report.to_json())["expected"] == [1.0, 0.0]


@given(pauli_text)
def test_matches_dense_agrees_with_full_comparison(text):
    from paulicomp.oracle import matches_dense

    s = parse_pauli_string(text[:6])
    op = compose_sequential(encode_context(s), packed=False)
    dense = dense_kronecker(s)
    assert matches_dense(op, dense)
    m = op.m.copy()
    m[-1] ^= 2
    bad = SparsePauliOp(op.n, op.k.copy(), m, packed=False)
    assert matches_dense(bad, dense) == np.array_equal(sparse_to_dense(bad), dense) == False
    extra = dense.copy()
    extra[0, (int(op.k[0]) + 1) % len(dense)] = 1
    assert not matches_dense(op, extra)
