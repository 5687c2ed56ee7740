"""Sparse (index, phase) composition of n-qubit Pauli strings."""
from .core import (
    Context,
    PauliLabel,
    PauliString,
    PhaseCode,
    context_deserialize,
    context_serialize,
    encode_context,
    initial_phase,
    parse_pauli_string,
    phase_negate_mask,
    phase_value,
)
from .composer import (
    EngineKind,
    SparsePauliOp,
    compose,
    compose_direct,
    compose_pe_parallel,
    compose_sequential,
)

__all__ = [
    "Context",
    "EngineKind",
    "PauliLabel",
    "PauliString",
    "PhaseCode",
    "SparsePauliOp",
    "compose",
    "compose_direct",
    "compose_pe_parallel",
    "compose_sequential",
    "context_deserialize",
    "context_serialize",
    "encode_context",
    "initial_phase",
    "parse_pauli_string",
    "phase_negate_mask",
    "phase_value",
]
