"""Bit-channel failure probabilities under successive decoding.

Three estimators share one result type:

* ``awgn_reliability_ga``: density evolution with the Gaussian approximation
  (each decision LLR is modelled as N(m, 2m)).
* ``bec_reliability``: the exact erasure recursion on the BEC.
* ``genie_mc_reliability``: Monte Carlo with a genie that feeds correct earlier
  decisions, i.e. the quantity the two analytic routes approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .channel import LLR_CLAMP, ChannelParams, RngStream, llr_bi_awgn
from .transform import PolarParams

_PHI_SWITCH = 10.0


@dataclass(frozen=True)
class DesignChannel:
    """Design channel: ``kind`` is ``"bi-awgn"`` (value = Es/N0 in dB) or ``"bec"`` (value = epsilon)."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("bi-awgn", "bec"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.kind == "bec" and not 0.0 <= self.value <= 1.0:
            raise ValueError(f"BEC erasure probability must lie in [0, 1], got {self.value}")

    @classmethod
    def bi_awgn(cls, es_n0_db: float) -> "DesignChannel":
        return cls("bi-awgn", float(es_n0_db))

    @classmethod
    def bec(cls, epsilon: float) -> "DesignChannel":
        return cls("bec", float(epsilon))

    def to_dict(self) -> dict:
        if self.kind == "bi-awgn":
            return {"channel": "bi-awgn", "es_n0_db": self.value}
        return {"channel": "bec", "epsilon": self.value}

    @classmethod
    def from_dict(cls, d: dict) -> "DesignChannel":
        if d["channel"] == "bi-awgn":
            return cls.bi_awgn(d["es_n0_db"])
        if d["channel"] == "bec":
            return cls.bec(d["epsilon"])
        raise ValueError(f"unknown channel {d['channel']!r}")


@dataclass(frozen=True, eq=False)
class ReliabilityProfile:
    """Per-index failure probabilities for one design channel.

    ``method`` is ``"ga"``, ``"bec"`` (exact recursion) or ``"genie"``;
    ``llr_mean`` is present only for ``"ga"``.
    """

    channel: DesignChannel
    method: str
    pe: np.ndarray
    llr_mean: np.ndarray | None = None
    trials: int | None = None
    seed: int | None = None

    def __post_init__(self):
        pe = np.asarray(self.pe, dtype=np.float64)
        if pe.ndim != 1 or pe.size < 1 or pe.size & (pe.size - 1):
            raise ValueError("pe must be a 1-D array whose length is a power of two")
        if np.any(pe < 0.0) or np.any(pe > 1.0):
            raise ValueError("pe values must lie in [0, 1]")
        pe.setflags(write=False)
        object.__setattr__(self, "pe", pe)
        if self.llr_mean is not None:
            m = np.asarray(self.llr_mean, dtype=np.float64)
            if m.shape != pe.shape:
                raise ValueError("llr_mean must have the same length as pe")
            m.setflags(write=False)
            object.__setattr__(self, "llr_mean", m)

    @property
    def params(self) -> PolarParams:
        return PolarParams.from_length(self.pe.size)

    @property
    def N(self) -> int:
        return self.pe.size


@dataclass(frozen=True)
class EquivalentBlockChannel:
    block: tuple[int, ...]
    pe_equiv: float


class UnsupportedMethodError(ValueError):
    """The reliability profile lacks the data an operation needs."""


def qfunc(x):
    """Gaussian tail probability Q(x)."""
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / math.sqrt(2.0))


def pe_from_mean(m):
    """Error probability of a symmetric Gaussian LLR N(m, 2m): Q(sqrt(m/2))."""
    return qfunc(np.sqrt(np.maximum(np.asarray(m, dtype=np.float64), 0.0) / 2.0))


def log_phi(x):
    """Logarithm of the phi function used for check-node density evolution."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    lo = (x > 0.0) & (x < _PHI_SWITCH)
    hi = x >= _PHI_SWITCH
    out[lo] = -0.4527 * x[lo] ** 0.86 + 0.0218
    xh = x[hi]
    out[hi] = 0.5 * np.log(np.pi / xh) - xh / 4.0 + np.log1p(-10.0 / (7.0 * xh))
    return out


def phi(x):
    return np.exp(log_phi(x))


def phi_inv_log(log_y, tol: float = 1e-9):
    """Invert phi given ``log(phi(x))`` by bisection to ``tol`` absolute accuracy in x."""
    log_y = np.asarray(log_y, dtype=np.float64)
    lo = np.zeros_like(log_y)
    # log phi(x) <= -x/4 + 0.5 log(pi/x) for large x, so this bracket is safe
    hi = np.maximum(4.0 * (-log_y) + 40.0, 20.0)
    while np.any(hi - lo > tol):
        mid = 0.5 * (lo + hi)
        above = log_phi(mid) > log_y
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    out = 0.5 * (lo + hi)
    return np.where(log_y >= 0.0, 0.0, out)


def check_node_mean(m):
    """Mean of the check-node (boxplus) combination of two N(m, 2m) LLRs."""
    m = np.asarray(m, dtype=np.float64)
    lp = log_phi(m)
    p = np.exp(lp)
    # 1 - (1 - phi)^2 = phi (2 - phi), kept in the log domain for large m
    return phi_inv_log(lp + np.log(2.0 - p))


def _polarize(root, params: PolarParams, minus, plus) -> np.ndarray:
    # index bits from MSB to LSB select minus (0) or plus (1) at each stage
    vals = np.array([root], dtype=np.float64)
    for _ in range(params.n):
        nxt = np.empty(2 * vals.size)
        nxt[0::2] = minus(vals)
        nxt[1::2] = plus(vals)
        vals = nxt
    return vals


def awgn_reliability_ga(params: PolarParams, es_n0_db: float) -> ReliabilityProfile:
    """Gaussian-approximation density evolution for BPSK over AWGN."""
    if not math.isfinite(es_n0_db):
        raise ValueError("es_n0_db must be finite")
    root = 4.0 * 10.0 ** (es_n0_db / 10.0)
    means = _polarize(root, params, check_node_mean, lambda m: 2.0 * m)
    return ReliabilityProfile(DesignChannel.bi_awgn(es_n0_db), "ga", pe_from_mean(means), means)


def bec_erasure_probabilities(params: PolarParams, epsilon: float) -> np.ndarray:
    return _polarize(epsilon, params, lambda z: 2.0 * z - z * z, lambda z: z * z)


def bec_reliability(params: PolarParams, epsilon: float) -> ReliabilityProfile:
    """Exact BEC polarization; an erased decision is a fair coin, so pe = z/2."""
    channel = DesignChannel.bec(epsilon)
    z = bec_erasure_probabilities(params, epsilon)
    return ReliabilityProfile(channel, "bec", z / 2.0)


def genie_decision_llrs(llr: np.ndarray) -> np.ndarray:
    """Decision LLRs of all indices when the all-zero word was sent and a genie
    supplies every earlier decision. ``llr`` has shape ``(trials, N)``."""
    N = llr.shape[-1]
    if N == 1:
        return llr.copy()
    h = N // 2
    a, b = llr[..., :h], llr[..., h:]
    sign = np.sign(a) * np.sign(b)
    aa, ab = np.abs(a), np.abs(b)
    upper = sign * (np.minimum(aa, ab) + np.log1p(np.exp(-(aa + ab))) - np.log1p(np.exp(-np.abs(aa - ab))))
    return np.concatenate([genie_decision_llrs(upper), genie_decision_llrs(a + b)], axis=-1)


def _channel_llrs_all_zero(channel: DesignChannel, shape, gen: np.random.Generator) -> np.ndarray:
    if channel.kind == "bec":
        erased = gen.random(shape) < channel.value
        return np.where(erased, 0.0, LLR_CLAMP)
    cp = ChannelParams(channel.value)
    y = 1.0 + math.sqrt(cp.sigma2) * gen.standard_normal(shape)
    return llr_bi_awgn(y, cp)


def genie_error_counts(llr_decisions: np.ndarray) -> np.ndarray:
    """Per-index error counts for the all-zero word; LLR ties count one half."""
    return (llr_decisions < 0.0).sum(axis=0) + 0.5 * (llr_decisions == 0.0).sum(axis=0)


def genie_mc_reliability(
    params: PolarParams,
    channel: DesignChannel,
    trials: int,
    seed: int,
    chunk: int = 8192,
) -> ReliabilityProfile:
    """Genie-aided Monte Carlo estimate of every bit channel's failure probability.

    Trials run in fixed chunks; chunk ``c`` draws from stream ``(seed, c)`` so the
    estimate depends only on ``(trials, seed)``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    N = params.N
    errors = np.zeros(N)
    done = 0
    c = 0
    while done < trials:
        t = min(chunk, trials - done)
        gen = RngStream(seed, c).generator()
        llr = _channel_llrs_all_zero(channel, (t, N), gen)
        errors += genie_error_counts(genie_decision_llrs(llr))
        done += t
        c += 1
    return ReliabilityProfile(channel, "genie", errors / trials, None, trials, seed)


def equivalent_block_reliability(profile: ReliabilityProfile, block) -> EquivalentBlockChannel:
    """Single equivalent channel of a repetition block: LLR means add across members."""
    if profile.llr_mean is None:
        raise UnsupportedMethodError(f"method {profile.method!r} provides no LLR means")
    block = tuple(int(i) for i in block)
    if not block or any(b >= a for a, b in zip(block[1:], block)) or block[0] < 0 or block[-1] >= profile.N:
        raise ValueError(f"block must be a non-empty, strictly increasing set of valid indices: {block}")
    m = float(profile.llr_mean[list(block)].sum())
    return EquivalentBlockChannel(block, float(pe_from_mean(m)))


def predicted_wer(pe_values) -> float:
    """Word error rate of successive decoding, ``1 - prod(1 - p)``."""
    p = np.asarray(pe_values, dtype=np.float64).ravel()
    if np.any(~np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("failure probabilities must lie in [0, 1]")
    if np.any(p == 1.0):
        return 1.0
    return float(min(1.0, max(0.0, -np.expm1(np.log1p(-p).sum()))))
