"""Exact calculus for decorated shadow graphs (Rust extension)."""

from .shadow_py import (  # noqa: F401
    Shadow,
    classify_sp,
    fuzz,
    plumb_det,
    plumb_witness,
)

__all__ = ["Shadow", "classify_sp", "fuzz", "plumb_det", "plumb_witness"]
