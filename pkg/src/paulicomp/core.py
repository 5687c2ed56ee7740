"""Pauli labels, strings, the compact (n, n_Y, row, value) context and 2-bit phase codes.

Orientation: a string's text is read most-significant qubit first, so the
leftmost character is ``x_{n-1}`` and ``labels[0]`` is ``x_0`` (the rightmost
tensor factor).
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyString,
    InconsistentContext,
    InvalidCharacter,
    QubitCountOutOfRange,
    TooManyQubits,
    TruncatedInput,
)

DEFAULT_MAX_QUBITS = 30
# the serialized header keeps n in 6 bits
MAX_SERIALIZED_QUBITS = 63


class PauliLabel(enum.IntEnum):
    I = 0
    X = 1
    Y = 2
    Z = 3

    @classmethod
    def from_char(cls, char: str) -> "PauliLabel":
        return cls[char.upper()]


# lookup tables indexed by label code (I, X, Y, Z)
FLIP_TABLE = (0, 1, 1, 0)
VALUE_TABLE = (1, 1, 0, 0)


class PhaseCode(enum.IntEnum):
    """2-bit phase: bit 0 is the sign, bit 1 selects the imaginary unit."""

    PLUS_ONE = 0
    MINUS_ONE = 1
    PLUS_I = 2
    MINUS_I = 3


PHASE_VALUES = (1 + 0j, -1 + 0j, 1j, -1j)
# (-i)^k for k = 0..3
_INITIAL_PHASE = (PhaseCode.PLUS_ONE, PhaseCode.MINUS_I, PhaseCode.MINUS_ONE, PhaseCode.PLUS_I)


def phase_value(code: int) -> complex:
    return PHASE_VALUES[code]


def initial_phase(n_y: int) -> PhaseCode:
    """Code of ``(-i) ** n_y``."""
    if n_y < 0:
        raise ValueError("n_y must be non-negative")
    return _INITIAL_PHASE[n_y & 3]


def phase_negate_mask(v_bit: int) -> int:
    """XOR mask applied to a phase code: negate where the value bit is 0."""
    return 0b01 if v_bit == 0 else 0b00


@dataclass(frozen=True)
class PauliString:
    labels: tuple[PauliLabel, ...]

    def __post_init__(self):
        if len(self.labels) == 0:
            raise EmptyString()

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return "".join(label.name for label in reversed(self.labels))

    @classmethod
    def from_codes(cls, codes, max_n: int = DEFAULT_MAX_QUBITS) -> "PauliString":
        """Build from label codes ordered ``x_0, x_1, ...``."""
        labels = tuple(PauliLabel(int(c)) for c in codes)
        if len(labels) > max_n:
            raise TooManyQubits(len(labels), max_n)
        return cls(labels)


def parse_pauli_string(text: str, max_n: int = DEFAULT_MAX_QUBITS) -> PauliString:
    if not text:
        raise EmptyString()
    labels = []
    for pos, char in enumerate(text):
        try:
            labels.append(PauliLabel.from_char(char))
        except KeyError:
            raise InvalidCharacter(pos, char) from None
    if len(labels) > max_n:
        raise TooManyQubits(len(labels), max_n)
    labels.reverse()
    return PauliString(tuple(labels))


def random_pauli_string(n: int, rng: np.random.Generator) -> PauliString:
    return PauliString(tuple(PauliLabel(int(c)) for c in rng.integers(0, 4, size=n)))


@dataclass(frozen=True)
class Context:
    """Compact descriptor of a Pauli string.

    ``r`` has bit l set where x_l flips a basis bit (X or Y); ``v`` has bit l set
    where x_l is I or X. Y positions are exactly ``r & ~v``.
    """

    n: int
    n_y: int
    r: int
    v: int

    def __post_init__(self):
        if self.n < 1:
            raise QubitCountOutOfRange(self.n)
        full = (1 << self.n) - 1
        if self.r & ~full or self.v & ~full:
            raise InconsistentContext("row/value bitstrings have bits set at positions >= n")
        if self.r < 0 or self.v < 0:
            raise InconsistentContext("bitstrings must be non-negative")
        if not 0 <= self.n_y <= self.n:
            raise InconsistentContext(f"n_y={self.n_y} outside [0, {self.n}]")
        if self.n_y != (self.r & ~self.v).bit_count():
            raise InconsistentContext("n_y disagrees with the number of Y positions in r, v")

    @property
    def z_mask(self) -> int:
        """Positions whose label alternates sign across the doubling (Y or Z)."""
        return ~self.v & ((1 << self.n) - 1)

    def to_pauli_string(self) -> PauliString:
        labels = []
        for l in range(self.n):
            rb = (self.r >> l) & 1
            vb = (self.v >> l) & 1
            labels.append([[PauliLabel.Z, PauliLabel.I], [PauliLabel.Y, PauliLabel.X]][rb][vb])
        return PauliString(tuple(labels))

    def to_json(self) -> str:
        width = max(1, (self.n + 3) // 4)
        return json.dumps(
            {
                "n": self.n,
                "n_y": self.n_y,
                "row_bits_hex": f"{self.r:0{width}x}",
                "value_bits_hex": f"{self.v:0{width}x}",
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Context":
        d = json.loads(text)
        return cls(
            n=int(d["n"]),
            n_y=int(d["n_y"]),
            r=int(d["row_bits_hex"], 16),
            v=int(d["value_bits_hex"], 16),
        )


def encode_context(s: PauliString) -> Context:
    r = v = n_y = 0
    for l, label in enumerate(s.labels):
        r |= FLIP_TABLE[label] << l
        v |= VALUE_TABLE[label] << l
        n_y += label == PauliLabel.Y
    return Context(n=s.n, n_y=n_y, r=r, v=v)


def context_serialize(c: Context) -> bytes:
    if not 1 <= c.n <= MAX_SERIALIZED_QUBITS:
        raise QubitCountOutOfRange(c.n)
    width = (c.n + 7) // 8
    header = c.n | ((c.n_y & 3) << 6)
    return bytes([header]) + c.r.to_bytes(width, "little") + c.v.to_bytes(width, "little")


def context_deserialize(data: bytes) -> Context:
    if len(data) < 1:
        raise TruncatedInput(1, 0)
    n = data[0] & 0x3F
    if n == 0:
        raise QubitCountOutOfRange(n)
    width = (n + 7) // 8
    needed = 1 + 2 * width
    if len(data) < needed:
        raise TruncatedInput(needed, len(data))
    r = int.from_bytes(data[1 : 1 + width], "little")
    v = int.from_bytes(data[1 + width : needed], "little")
    full = (1 << n) - 1
    if r & ~full or v & ~full:
        raise InconsistentContext("padding bits above n are set")
    # the full Y count is recoverable from the bitstrings; the header only keeps its residue
    n_y = (r & ~v).bit_count()
    if (n_y & 3) != data[0] >> 6:
        raise InconsistentContext("header n_y residue disagrees with the bitstrings")
    return Context(n=n, n_y=n_y, r=r, v=v)
