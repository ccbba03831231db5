"""Rectilinear grid interpolation as recursive quantization of flat storage."""

from mcube._core import (
    DomainError,
    Grid,
    IoError,
    MemoryGuardError,
    NonFiniteError,
    PoleError,
    locate_window,
    quantize,
    r6,
    __version__,
)

__all__ = [
    "DomainError",
    "Grid",
    "IoError",
    "MemoryGuardError",
    "NonFiniteError",
    "PoleError",
    "locate_window",
    "quantize",
    "r6",
    "__version__",
]
