"""Benchmark workloads (two-local, stabilizer, TFIM, Heisenberg, term files) and matrix-free evaluation.

Builders index qubits the way the tensor expressions are written: qubit ``q``
is the ``q``-th factor from the left, i.e. text position ``q``.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .composer import EngineKind, SparsePauliOp, compose
from .core import DEFAULT_MAX_QUBITS, PauliString, encode_context, parse_pauli_string
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InconsistentLength,
    NoTerms,
    NotNormalized,
    ParseError,
    PauliError,
    TooFewQubits,
    TruncatedInput,
    FormatError,
)

STATE_MAGIC = b"PSIV"
STATE_HEADER = struct.Struct("<4sB3x")
NORM_TOL = 1e-9


@dataclass(frozen=True)
class PauliTerm:
    coeff: complex
    string: PauliString

    def __post_init__(self):
        if not np.isfinite(self.coeff):
            raise ValueError(f"non-finite coefficient {self.coeff!r}")


@dataclass
class PauliSum:
    n: int
    terms: list[PauliTerm] = field(default_factory=list)

    def __post_init__(self):
        for i, t in enumerate(self.terms):
            if t.string.n != self.n:
                raise InconsistentLength(i + 1, self.n, t.string.n)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n,):
            raise DimensionMismatch(self.n, int(math.log2(max(len(self.amplitudes), 1))))

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "StateVector":
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "StateVector":
        amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        return cls(n, amps / np.linalg.norm(amps))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def to_bytes(self) -> bytes:
        return STATE_HEADER.pack(STATE_MAGIC, self.n) + self.amplitudes.astype("<c16").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "StateVector":
        if len(data) < STATE_HEADER.size:
            raise TruncatedInput(STATE_HEADER.size, len(data))
        magic, n = STATE_HEADER.unpack_from(data)
        if magic != STATE_MAGIC:
            raise FormatError(f"bad state magic {magic!r}")
        needed = STATE_HEADER.size + 16 * (1 << n)
        if len(data) < needed:
            raise TruncatedInput(needed, len(data))
        amps = np.frombuffer(data, dtype="<c16", count=1 << n, offset=STATE_HEADER.size)
        return cls(n, amps.astype(np.complex128))

    def write(self, path):
        with open(path, "wb") as f:
            f.write(self.to_bytes())

    @classmethod
    def read(cls, path) -> "StateVector":
        with open(path, "rb") as f:
            return cls.from_bytes(f.read())


def _from_positions(n: int, placed: dict[int, str]) -> PauliString:
    text = "".join(placed.get(q, "I") for q in range(n))
    return parse_pauli_string(text, max_n=max(n, DEFAULT_MAX_QUBITS))


def build_two_local(n: int, j: int, axis: str) -> PauliString:
    """``I^{(x)j} (x) s s (x) I^{(x)(n-j-2)}`` for ``s`` in X, Y, Z."""
    axis = axis.upper()
    if axis not in ("X", "Y", "Z"):
        raise ValueError(f"axis must be X, Y or Z, got {axis!r}")
    if not 0 <= j <= n - 2:
        raise IndexOutOfRange(f"bond index {j} outside [0, {n - 2}] for n={n}")
    return _from_positions(n, {j: axis, j + 1: axis})


def build_single(n: int, j: int, axis: str) -> PauliString:
    if not 0 <= j < n:
        raise IndexOutOfRange(f"qubit index {j} outside [0, {n - 1}]")
    return _from_positions(n, {j: axis.upper()})


def build_stabilizer_generators(n: int) -> list[PauliString]:
    if n < 1:
        raise TooFewQubits("stabilizer generators need n >= 1")
    return [build_single(n, j, "Z") for j in range(n)]


def build_tfim(n: int, J: float, h: float) -> PauliSum:
    """``-J sum Z_j Z_{j+1} - h sum X_j``; zero coefficients are kept."""
    if n < 2:
        raise TooFewQubits(f"TFIM needs n >= 2, got {n}")
    terms = [PauliTerm(-J, build_two_local(n, j, "Z")) for j in range(n - 1)]
    terms += [PauliTerm(-h, build_single(n, j, "X")) for j in range(n)]
    return PauliSum(n, terms)


def build_heisenberg(n: int, Jx: float, Jy: float, Jz: float) -> PauliSum:
    if n < 2:
        raise TooFewQubits(f"Heisenberg chain needs n >= 2, got {n}")
    terms = []
    for j in range(n - 1):
        for coeff, axis in ((Jx, "X"), (Jy, "Y"), (Jz, "Z")):
            terms.append(PauliTerm(coeff, build_two_local(n, j, axis)))
    return PauliSum(n, terms)


def stabilizer_sum(n: int) -> PauliSum:
    return PauliSum(n, [PauliTerm(1.0, s) for s in build_stabilizer_generators(n)])


def parse_terms(lines) -> PauliSum:
    """Parse ``<coeff> <pauli_text>`` lines; ``#`` starts a comment."""
    terms = []
    n = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected '<coeff> <pauli>', got {raw.strip()!r}")
        try:
            coeff = float(parts[0].replace("−", "-"))
        except ValueError:
            raise ParseError(lineno, f"bad coefficient {parts[0]!r}") from None
        if not math.isfinite(coeff):
            raise ParseError(lineno, f"non-finite coefficient {parts[0]!r}")
        try:
            s = parse_pauli_string(parts[1])
        except PauliError as e:
            raise ParseError(lineno, str(e)) from None
        if n is None:
            n = s.n
        elif s.n != n:
            raise InconsistentLength(lineno, n, s.n)
        terms.append(PauliTerm(coeff, s))
    if n is None:
        raise NoTerms()
    return PauliSum(n, terms)


def load_terms(path) -> PauliSum:
    with open(path, encoding="utf-8") as f:
        return parse_terms(f)


def apply_op(op: SparsePauliOp, psi: StateVector, out: np.ndarray | None = None) -> StateVector:
    """``out[j] = phase(m[j]) * psi[k[j]]``."""
    if op.n != psi.n:
        raise DimensionMismatch(op.n, psi.n)
    if out is None:
        out = np.empty(op.size, dtype=np.complex128)
    np.take(psi.amplitudes, op.k.astype(np.intp), out=out)
    out *= op.phases()
    return StateVector(op.n, out)


def expectation(H: PauliSum, psi: StateVector, engine: EngineKind | None = None) -> complex:
    """``<psi|H|psi>`` one term at a time, reusing a single scratch vector."""
    if H.n != psi.n:
        raise DimensionMismatch(H.n, psi.n)
    norm = psi.norm()
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(norm)
    scratch = np.empty(1 << psi.n, dtype=np.complex128)
    total = 0j
    for term in H:
        op = compose(encode_context(term.string), engine)
        apply_op(op, psi, out=scratch)
        total += term.coeff * np.vdot(psi.amplitudes, scratch)
    return complex(total)


def compose_all(H: PauliSum, engine: EngineKind | None = None) -> list[SparsePauliOp]:
    return [compose(encode_context(t.string), engine) for t in H]
