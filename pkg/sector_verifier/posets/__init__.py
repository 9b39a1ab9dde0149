from sector_verifier.posets.core import (
    MutuallyDisjointZigZag,
    PosetBackend,
    Reflection,
    Splitting,
    ValidationReport,
    Violation,
    ZigZag,
    cap_witness,
    connect,
    is_disjoint,
    is_q_indicator,
    is_q_small,
    validate_mdz,
    validate_reflection,
    validate_splitting,
    validate_zigzag,
)

__all__ = [
    "MutuallyDisjointZigZag",
    "PosetBackend",
    "Reflection",
    "Splitting",
    "ValidationReport",
    "Violation",
    "ZigZag",
    "cap_witness",
    "connect",
    "is_disjoint",
    "is_q_indicator",
    "is_q_small",
    "validate_mdz",
    "validate_reflection",
    "validate_splitting",
    "validate_zigzag",
]
