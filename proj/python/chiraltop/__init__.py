"""Invariants and classification of chiral vector bundles."""

from ._core import (
    AbelianGroup,
    Bundle,
    ChiraltopError,
    Grid,
    QuantumSystem,
    SphereMap,
    build_model,
    class_label,
    classify_space,
    compose,
    invariants,
    lower_band,
    models,
    pi_classifying,
    pi_unitary,
    split,
    tensor,
    validate,
    winding5_probe,
)

__all__ = [
    "AbelianGroup",
    "Bundle",
    "ChiraltopError",
    "Grid",
    "QuantumSystem",
    "SphereMap",
    "build_model",
    "class_label",
    "classify_space",
    "compose",
    "invariants",
    "lower_band",
    "models",
    "pi_classifying",
    "pi_unitary",
    "split",
    "tensor",
    "validate",
    "winding5_probe",
]
