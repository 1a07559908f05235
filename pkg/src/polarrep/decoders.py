"""Successive decoders for plain and repetition-concatenated polar codes.

All decoders work on channel LLRs ``log P(y|0) / P(y|1)`` and share one path
metric: a decision ``u`` taken against decision LLR ``lam`` adds
``log(1 + exp(-(1 - 2u) lam))``, i.e. ``-log Pr(u | y, earlier decisions)``.
Frozen and repeated bits are charged the same way. A complete path's metric is
therefore ``-log Pr(u | y)`` under a uniform prior on the source word, and its
ordering agrees with maximum likelihood.

Ties prefer bit 0, then the lower-ranked path. ``min_sum=True`` replaces the
exact check-node rule with the min-sum approximation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from .design import CodeSpec, ConcatenatedCodeSpec
from .transform import encode_concatenated, encode_polar, transform


class ResourceLimitError(RuntimeError):
    """Brute-force decoding requested beyond the configured dimension limit."""


@dataclass(frozen=True, eq=False)
class DecodeResult:
    info_bits: np.ndarray
    codeword: np.ndarray
    metric: float
    source_word: np.ndarray


def _check_llr(llr, N: int) -> np.ndarray:
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    if llr.shape[-1:] != (N,):
        raise ValueError(f"LLR vector must have length {N}, got shape {llr.shape}")
    return llr


def _tables(spec):
    """Kernel tables: per-index role, block head of each member, frozen-node stages."""
    if isinstance(spec, CodeSpec):
        spec = spec.as_concatenated()
    kind, head_of = spec.decoder_tables()
    return kind, head_of, kern.zero_stages(kind == kern.FROZEN)


def _result(u: np.ndarray, metric: float, spec) -> DecodeResult:
    u = u.astype(np.uint8)
    if isinstance(spec, ConcatenatedCodeSpec):
        info = u[list(spec.info_set)]
    else:
        info = u[spec.info_array]
    return DecodeResult(info, transform(u, spec.params), float(metric), u)


def sc_decode(llr, spec: CodeSpec, min_sum: bool = False) -> DecodeResult:
    """Successive cancellation: hard decision on every information index."""
    llr = _check_llr(llr, spec.N)
    u = np.empty(spec.N, dtype=np.uint8)
    frozen = spec.frozen_mask
    metric = kern.sc_word(llr, frozen, kern.zero_stages(frozen), min_sum, u)
    return _result(u, metric, spec)


def sc_list_decode(llr, spec: CodeSpec, L: int, min_sum: bool = False) -> DecodeResult:
    """Successive list decoding keeping the L most likely paths."""
    if L < 1:
        raise ValueError("list size must be positive")
    llr = _check_llr(llr, spec.N)
    kind, head_of, zstage = _tables(spec)
    u = np.empty(spec.N, dtype=np.uint8)
    metric = kern.list_word(llr, kind, head_of, zstage, int(L), min_sum, u)
    return _result(u, metric, spec)


def rep_sc_decode(llr, spec: ConcatenatedCodeSpec, min_sum: bool = False) -> DecodeResult:
    """SC decoding with a two-branch fork over each repetition block.

    At a block's first index both values of the block bit are pursued. Inside
    the block each branch decides the other indices by the SC rule and forces
    the block's repeated indices to its own bit; at the block's last index the
    branch with the smaller path metric survives (ties: bit 0).
    """
    llr = _check_llr(llr, spec.N)
    kind, head_of, zstage = _tables(spec)
    u = np.empty(spec.N, dtype=np.uint8)
    metric = kern.rep_sc_word(llr, kind, head_of, zstage, min_sum, u)
    return _result(u, metric, spec)


def rep_list_decode(llr, spec: ConcatenatedCodeSpec, L: int, min_sum: bool = False) -> DecodeResult:
    """List decoding with repetition blocks.

    A block head forks every path without pruning; until the block closes, each
    value of the block bit keeps its own L best paths, and at the block's last
    index the union is cut back to L. With L = 1 this is ``rep_sc_decode``.
    """
    if L < 1:
        raise ValueError("list size must be positive")
    llr = _check_llr(llr, spec.N)
    kind, head_of, zstage = _tables(spec)
    u = np.empty(spec.N, dtype=np.uint8)
    metric = kern.list_word(llr, kind, head_of, zstage, int(L), min_sum, u)
    return _result(u, metric, spec)


def codeword_metric(llr, codewords) -> np.ndarray:
    """Path metric ``-log Pr(c | y)`` of complete codewords (rows of ``codewords``)."""
    llr = np.asarray(llr, dtype=np.float64)
    signed = np.where(np.asarray(codewords, dtype=bool), llr, -llr)
    return np.logaddexp(0.0, signed).sum(axis=-1)


def _codebook(spec):
    K = spec.K
    infos = np.array(list(itertools.product((0, 1), repeat=K)), dtype=np.uint8).reshape(-1, K)
    if isinstance(spec, ConcatenatedCodeSpec):
        return infos, encode_concatenated(infos, spec)
    return infos, encode_polar(infos, spec)


def ml_decode_bruteforce(llr, spec: CodeSpec | ConcatenatedCodeSpec, max_k: int = 20) -> DecodeResult:
    """Exhaustive maximum-likelihood decoding over all ``2**K`` codewords.

    Maximizes the correlation ``sum((1 - 2 c) llr) / 2``; the reported metric
    is the common path metric ``-log Pr(c | y)`` of the winner. Ties go to the
    lexicographically smallest info word.
    """
    if spec.K > max_k:
        raise ResourceLimitError(f"K={spec.K} exceeds the brute-force limit {max_k}")
    llr = _check_llr(llr, spec.N)
    infos, codes = _codebook(spec)
    corr = ((1.0 - 2.0 * codes) * llr).sum(axis=1) / 2.0
    best = int(np.argmax(corr))  # first maximum = smallest info word
    c = codes[best]
    return DecodeResult(infos[best], c, float(codeword_metric(llr, c)), transform(c, spec.params))


def decode_batch(llrs, spec, decoder: str, L: int = 1, min_sum: bool = False):
    """Decode a ``(B, N)`` batch; returns ``(source_words, metrics)``.

    ``decoder`` is one of ``sc``, ``scl``, ``rep_sc``, ``rep_scl``, ``ml``. The
    plain decoders refuse specs that carry repetition blocks.
    """
    llrs = _check_llr(np.atleast_2d(llrs), spec.N)
    B, N = llrs.shape
    u = np.empty((B, N), dtype=np.uint8)
    metrics = np.empty(B)
    if decoder in ("sc", "scl") and isinstance(spec, ConcatenatedCodeSpec) and spec.blocks:
        raise ValueError(f"decoder {decoder!r} cannot decode repetition blocks; use 'rep_{decoder}'")
    if decoder == "ml":
        for t in range(B):
            r = ml_decode_bruteforce(llrs[t], spec)
            u[t] = r.source_word
            metrics[t] = r.metric
        return u, metrics
    kind, head_of, zstage = _tables(spec)
    if decoder == "sc":
        frozen = (kind == kern.FROZEN).astype(np.uint8)
        kern.sc_batch(llrs, frozen, zstage, min_sum, u, metrics)
    elif decoder == "rep_sc":
        kern.rep_sc_batch(llrs, kind, head_of, zstage, min_sum, u, metrics)
    elif decoder in ("scl", "rep_scl"):
        if L < 1:
            raise ValueError("list size must be positive")
        kern.list_batch(llrs, kind, head_of, zstage, int(L), min_sum, u, metrics)
    else:
        raise ValueError(f"unknown decoder {decoder!r}")
    return u, metrics


def info_from_source(u: np.ndarray, spec) -> np.ndarray:
    """Info bits read off decoded source words (first index of each unit)."""
    idx = list(spec.info_set)
    return np.asarray(u)[..., idx]


def recompute_metric(llr, source_word) -> float:
    """Path metric of a complete source word by a genie pass (independent check)."""
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    u = np.ascontiguousarray(source_word, dtype=np.uint8)
    lam = np.empty(llr.shape[0])
    kern.genie_word(llr, u, False, lam)
    signed = np.where(u.astype(bool), lam, -lam)
    return float(np.logaddexp(0.0, signed).sum())
