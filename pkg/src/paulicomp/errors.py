"""Exception types raised across the package."""


class PauliError(ValueError):
    """Base class for every validation error raised by paulicomp."""


class EmptyString(PauliError):
    def __init__(self):
        super().__init__("Pauli string is empty")


class InvalidCharacter(PauliError):
    def __init__(self, position: int, char: str):
        self.position = position
        self.char = char
        super().__init__(f"invalid Pauli label {char!r} at position {position}")


class TooManyQubits(PauliError):
    def __init__(self, n: int, max_n: int):
        self.n = n
        self.max_n = max_n
        super().__init__(f"{n} qubits exceeds the configured maximum of {max_n}")


class TruncatedInput(PauliError):
    def __init__(self, needed: int, got: int):
        self.needed = needed
        self.got = got
        super().__init__(f"truncated input: need {needed} bytes, got {got}")


class QubitCountOutOfRange(PauliError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"qubit count {n} outside the encodable range [1, 63]")


class InconsistentContext(PauliError):
    pass


class InvalidPeCount(PauliError):
    def __init__(self, n_pes):
        self.n_pes = n_pes
        super().__init__(f"PE count must be a power of two >= 1, got {n_pes}")


class MemoryPreflightFailed(PauliError, MemoryError):
    def __init__(self, requested_bytes: int, budget_bytes: int):
        self.requested_bytes = requested_bytes
        self.budget_bytes = budget_bytes
        super().__init__(
            f"allocation of {requested_bytes} bytes exceeds budget of {budget_bytes} bytes"
        )


class DenseTooLarge(PauliError):
    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(f"dense operator for n={n} exceeds the dense guard n <= {limit}")


class IndexOutOfRange(PauliError):
    pass


class TooFewQubits(PauliError):
    pass


class ParseError(PauliError):
    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class InconsistentLength(PauliError):
    def __init__(self, line: int, expected: int, got: int):
        self.line = line
        super().__init__(f"line {line}: string has {got} qubits, expected {expected}")


class NoTerms(PauliError):
    def __init__(self):
        super().__init__("no Pauli terms found; qubit count is undefined")


class DimensionMismatch(PauliError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"dimension mismatch: operator has n={expected}, state has n={got}")


class NotNormalized(PauliError):
    def __init__(self, norm: float):
        self.norm = norm
        super().__init__(f"state vector is not normalized (norm={norm!r})")


class FormatError(PauliError):
    """Malformed binary or text payload (bad magic, version, or length)."""
