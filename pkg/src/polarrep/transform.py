"""Polar transform ``x = u F^{(x)n}`` in natural (non bit-reversed) order, plus encoders.

Index convention: stage ``s`` of the butterfly combines positions that differ in
bit ``s`` of the index. Row ``i`` of the generator has a one in column ``j``
exactly when the bits of ``j`` are a subset of the bits of ``i``; the first half
of a codeword is therefore ``transform(u_a ^ u_b)`` and the second half is
``transform(u_b)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .design import CodeSpec, ConcatenatedCodeSpec


@dataclass(frozen=True)
class PolarParams:
    """Block length ``N = 2**n`` of a polar code."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n!r}")

    @property
    def N(self) -> int:
        return 1 << int(self.n)

    @classmethod
    def from_length(cls, N: int) -> "PolarParams":
        if N < 1 or N & (N - 1):
            raise ValueError(f"N must be a power of two, got {N}")
        return cls(int(N).bit_length() - 1)


def as_bits(bits, length: int | None = None, name: str = "bits") -> np.ndarray:
    """Validate a 0/1 sequence and return it as a ``uint8`` array."""
    arr = np.asarray(bits)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0 and 1")
    arr = arr.astype(np.uint8)
    if length is not None and arr.shape[-1:] != (length,):
        raise ValueError(f"{name} must have length {length}, got shape {arr.shape}")
    return arr


def transform(u, params: PolarParams) -> np.ndarray:
    """Compute ``u G_N`` over GF(2) with the O(N log N) butterfly.

    ``u`` may be a single word of length N or a batch of shape ``(B, N)``; the
    transform acts on the last axis. The transform is its own inverse.
    """
    N = params.N
    x = as_bits(u, N, "u").copy()
    lead = x.shape[:-1]
    half = 1
    while half < N:
        # view as (..., blocks, 2, half): block positions with bit s clear/set
        v = x.reshape(*lead, N // (2 * half), 2, half)
        v[..., 0, :] ^= v[..., 1, :]
        half *= 2
    return x


def naive_generator(params: PolarParams) -> np.ndarray:
    """The full N x N matrix ``F^{(x)n}`` built by repeated Kronecker products."""
    F = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    G = np.ones((1, 1), dtype=np.uint8)
    for _ in range(params.n):
        G = np.kron(G, F)
    return G


def gf2_matmul(a, b) -> np.ndarray:
    """Matrix product over GF(2) (reference helper for small operands)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return ((a @ b) & 1).astype(np.uint8)


def scatter_info(info, spec: "CodeSpec") -> np.ndarray:
    """Place info bits on the information set; frozen positions are zero."""
    info = as_bits(info, spec.K, "info")
    u = np.zeros(info.shape[:-1] + (spec.params.N,), dtype=np.uint8)
    u[..., spec.info_array] = info
    return u


def encode_polar(info, spec: "CodeSpec") -> np.ndarray:
    """Encode K info bits (or a ``(B, K)`` batch) into polar codewords."""
    return transform(scatter_info(info, spec), spec.params)


def source_word_concatenated(info, spec: "ConcatenatedCodeSpec") -> np.ndarray:
    """Pre-transform source word: each info bit copied onto its logical unit."""
    info = as_bits(info, spec.K, "info")
    u = np.zeros(info.shape[:-1] + (spec.params.N,), dtype=np.uint8)
    for k, unit in enumerate(spec.units):
        u[..., list(unit)] = info[..., k : k + 1]
    return u


def encode_concatenated(info, spec: "ConcatenatedCodeSpec") -> np.ndarray:
    """Encode with the outer repetition code followed by the inner polar code.

    Info bit ``k`` feeds logical unit ``spec.units[k]``: a single channel of the
    enlarged set, or every channel of one repetition block.
    """
    return transform(source_word_concatenated(info, spec), spec.params)
