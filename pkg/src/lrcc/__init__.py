"""Locally repairable convertible codes in the merge regime.

Finite-field towers, block-structured parity-check matrices, locally
repairable codes with (r, delta) locality, two base-code constructions, and
access-optimal conversion between initial and final codes.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .gf import FieldElement, FieldTower, make_tower
from .linalg import BlockStructure, MatrixGF, block_select
from .code import LinearCode, WorkCeilingExceeded
from .lrc import (
    LocalityPartition,
    Regime,
    access_lb_new,
    access_lb_old,
    find_B_set,
    is_mr,
    is_optimal_lrc,
    singleton_bound,
    superlinear_length_bound,
    verify_locality,
)
from .construct import BaseCode, BaseCodeASpec, BaseCodeBSpec, build_base_a, build_base_b
from .convert import ConversionPlan, ConversionTrace, audit_optimality, convert, make_plan

__all__ = [
    "__version__",
    "FieldElement",
    "FieldTower",
    "make_tower",
    "BlockStructure",
    "MatrixGF",
    "block_select",
    "LinearCode",
    "WorkCeilingExceeded",
    "LocalityPartition",
    "Regime",
    "access_lb_new",
    "access_lb_old",
    "find_B_set",
    "is_mr",
    "is_optimal_lrc",
    "singleton_bound",
    "superlinear_length_bound",
    "verify_locality",
    "BaseCode",
    "BaseCodeASpec",
    "BaseCodeBSpec",
    "build_base_a",
    "build_base_b",
    "ConversionPlan",
    "ConversionTrace",
    "audit_optimality",
    "convert",
    "make_plan",
]
