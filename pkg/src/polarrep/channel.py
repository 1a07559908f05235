"""BPSK over AWGN with unit symbol energy, LLR computation and seeded streams."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LLR_CLAMP = 1e3


@dataclass(frozen=True)
class ChannelParams:
    es_n0_db: float

    @property
    def sigma2(self) -> float:
        """Noise variance per real dimension."""
        return 1.0 / (2.0 * 10.0 ** (self.es_n0_db / 10.0))

    @classmethod
    def from_ebn0(cls, eb_n0_db: float, rate: float) -> "ChannelParams":
        return cls(ebn0_to_esn0(eb_n0_db, rate))


@dataclass(frozen=True)
class RngStream:
    """Random stream fully determined by ``(master_seed, stream_id)``.

    ``substream`` separates independent draws (data bits, noise) that belong to
    the same stream id.
    """

    master_seed: int
    stream_id: int

    def generator(self, substream: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence([self.master_seed & (2**64 - 1), self.stream_id & (2**64 - 1), substream])
        return np.random.Generator(np.random.PCG64(seq))


def bpsk_modulate(bits) -> np.ndarray:
    """Map 0 -> +1 and 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def awgn_apply(symbols, params: ChannelParams, rng: RngStream | np.random.Generator) -> np.ndarray:
    symbols = np.asarray(symbols, dtype=np.float64)
    gen = rng.generator(1) if isinstance(rng, RngStream) else rng
    return symbols + math.sqrt(params.sigma2) * gen.standard_normal(symbols.shape)


def llr_bi_awgn(received, params: ChannelParams) -> np.ndarray:
    """Channel LLRs ``2 y / sigma2``, clamped to +-1000."""
    llr = (2.0 / params.sigma2) * np.asarray(received, dtype=np.float64)
    return np.clip(llr, -LLR_CLAMP, LLR_CLAMP)


def ebn0_to_esn0(eb_n0_db: float, rate: float) -> float:
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    return eb_n0_db + 10.0 * math.log10(rate)


def esn0_to_ebn0(es_n0_db: float, rate: float) -> float:
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    return es_n0_db - 10.0 * math.log10(rate)
