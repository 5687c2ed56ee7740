"""Dense brute-force reference built from explicit Kronecker products.

Nothing here reads ``k`` or ``m`` except :func:`sparse_to_dense`, which only
scatters them into a matrix; the reference matrix itself is folded from the
2x2 Pauli matrices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np

from .core import PauliString
from .composer import SparsePauliOp
from .errors import DenseTooLarge

DENSE_MAX_QUBITS = 12

PAULI_MATRICES = (
    np.array([[1, 0], [0, 1]], dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def _guard(n: int, limit: int):
    if n > limit:
        raise DenseTooLarge(n, limit)


def dense_kronecker(s: PauliString, limit: int = DENSE_MAX_QUBITS) -> np.ndarray:
    """Left fold ``sigma_{x_{n-1}} (x) ... (x) sigma_{x_0}``."""
    _guard(s.n, limit)
    out = PAULI_MATRICES[s.labels[-1]]
    for label in reversed(s.labels[:-1]):
        out = np.kron(out, PAULI_MATRICES[label])
    return out


def sparse_to_dense(op: SparsePauliOp, limit: int = DENSE_MAX_QUBITS) -> np.ndarray:
    _guard(op.n, limit)
    out = np.zeros((op.size, op.size), dtype=np.complex128)
    out[np.arange(op.size), op.k.astype(np.intp)] = op.phases()
    return out


@dataclass
class EquivReport:
    match: bool
    n: int
    row: int | None = None
    col: int | None = None
    expected: complex | None = None
    got: complex | None = None

    def to_json(self) -> str:
        d = asdict(self)
        for key in ("expected", "got"):
            if d[key] is not None:
                d[key] = [d[key].real, d[key].imag]
        return json.dumps(d)


def one_nonzero_per_row(dense: np.ndarray) -> bool:
    return bool(np.all(np.count_nonzero(dense, axis=1) == 1))


def matches_dense(op: SparsePauliOp, dense: np.ndarray, one_per_row: bool = False) -> bool:
    """Exact equality of ``sparse_to_dense(op)`` and ``dense`` without materializing the former.

    Every gathered entry ``dense[j, k[j]]`` must equal the phase, and ``dense``
    may hold no other nonzeros; together these force one nonzero per row.
    Pass ``one_per_row=True`` when ``dense`` is already known to have exactly
    one nonzero per row to skip the count.
    """
    if dense.shape != (op.size, op.size):
        return False
    gathered = dense[np.arange(op.size), op.k.astype(np.intp)]
    if not np.array_equal(gathered, op.phases()):
        return False
    return one_per_row or np.count_nonzero(dense) == op.size


def assert_equiv(op: SparsePauliOp, s: PauliString, limit: int = DENSE_MAX_QUBITS) -> EquivReport:
    """Exact comparison against the Kronecker fold; entries are Gaussian integers so no tolerance."""
    _guard(max(op.n, s.n), limit)
    if op.n != s.n:
        return EquivReport(False, op.n)
    expected = dense_kronecker(s, limit)
    got = sparse_to_dense(op, limit)
    bad = np.argwhere(expected != got)
    if len(bad) == 0:
        return EquivReport(True, op.n)
    row, col = (int(x) for x in bad[0])
    return EquivReport(False, op.n, row, col, complex(expected[row, col]), complex(got[row, col]))
