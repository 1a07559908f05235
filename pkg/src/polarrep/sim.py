"""Monte Carlo word-error-rate sweeps.

Trials are grouped in fixed-size batches. Batch ``b`` covers trials
``b*batch_size .. (b+1)*batch_size - 1`` and draws its info words from
substream 0 and its noise from substream 1 of ``RngStream(master_seed, b)``,
so every trial is a pure function of ``(master_seed, trial index)`` and the
same at every SNR point. Batches are reduced strictly in index order and the
stopping rule is applied after each one, which makes the output independent of
how many worker processes computed the batches.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import ChannelParams, RngStream, awgn_apply, bpsk_modulate, ebn0_to_esn0, llr_bi_awgn
from .decoders import decode_batch, info_from_source
from .design import ConcatenatedCodeSpec
from .specio import load_spec
from .transform import encode_concatenated, encode_polar

DECODERS = ("sc", "scl", "rep_sc", "rep_scl", "ml")
CSV_COLUMNS = (
    "eb_n0_db",
    "es_n0_db",
    "decoder",
    "list_size",
    "trials",
    "word_errors",
    "wer",
    "ci95_halfwidth",
    "stop_reason",
    "seed",
)


@dataclass
class SweepConfig:
    code_spec_path: str
    decoder: str
    snr_points: list[float]
    list_size: int = 1
    min_word_errors: int = 100
    max_trials_per_point: int = 10**7
    master_seed: int = 0
    workers: int = 1
    batch_size: int = 1000
    min_sum: bool = False

    def __post_init__(self):
        self.snr_points = [float(s) for s in self.snr_points]
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {', '.join(DECODERS)}, got {self.decoder!r}")
        if not self.snr_points:
            raise ValueError("snr_points must not be empty")
        if any(b <= a for a, b in zip(self.snr_points, self.snr_points[1:])):
            raise ValueError("snr_points must be strictly increasing")
        for name in ("list_size", "min_word_errors", "max_trials_per_point", "workers", "batch_size"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.decoder in ("sc", "rep_sc", "ml") and self.list_size != 1:
            raise ValueError(f"decoder {self.decoder!r} takes no list size")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    @classmethod
    def from_json(cls, path, **overrides) -> "SweepConfig":
        d = json.loads(Path(path).read_text())
        d.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**d)


@dataclass(frozen=True)
class WerEstimate:
    eb_n0_db: float
    es_n0_db: float
    trials: int
    word_errors: int
    stop_reason: str

    @property
    def wer(self) -> float:
        return self.word_errors / self.trials

    @property
    def ci95_halfwidth(self) -> float:
        p = self.wer
        return 1.96 * math.sqrt(p * (1.0 - p) / self.trials)


def _encode(info, spec):
    if isinstance(spec, ConcatenatedCodeSpec):
        return encode_concatenated(info, spec)
    return encode_polar(info, spec)


def run_batch(spec, decoder: str, list_size: int, es_n0_db: float, master_seed: int,
              batch: int, size: int, min_sum: bool = False) -> int:
    """Word errors among the first ``size`` trials of batch ``batch``."""
    stream = RngStream(master_seed, batch)
    info = stream.generator(0).integers(0, 2, size=(size, spec.K), dtype=np.uint8)
    cp = ChannelParams(es_n0_db)
    y = awgn_apply(bpsk_modulate(_encode(info, spec)), cp, stream)
    u, _ = decode_batch(llr_bi_awgn(y, cp), spec, decoder, list_size, min_sum)
    return int(np.any(info_from_source(u, spec) != info, axis=1).sum())


_worker_spec = None


def _init_worker(spec):
    global _worker_spec
    _worker_spec = spec


def _worker_batch(args):
    return run_batch(_worker_spec, *args)


def check_compatible(spec, decoder: str, ml_max_k: int = 20) -> None:
    if decoder == "ml" and spec.K > ml_max_k:
        raise ValueError(f"ml decoding enumerates 2**K codewords; K={spec.K} exceeds {ml_max_k}")
    if decoder in ("sc", "scl") and isinstance(spec, ConcatenatedCodeSpec) and spec.blocks:
        raise ValueError(f"decoder {decoder!r} cannot decode a scheme with repetition blocks; use rep_{decoder}")


def simulate_point(spec, config: SweepConfig, eb_n0_db: float, pool=None) -> WerEstimate:
    es_n0_db = ebn0_to_esn0(eb_n0_db, spec.rate)
    B = config.batch_size
    cap = config.max_trials_per_point
    n_batches = -(-cap // B)

    def args(b):
        size = min(B, cap - b * B)
        return (config.decoder, config.list_size, es_n0_db, config.master_seed, b, size, config.min_sum)

    trials = errors = 0
    if pool is None:
        results = (run_batch(spec, *args(b)) for b in range(n_batches))
    else:
        results = _ordered_results(pool, args, n_batches, 2 * config.workers)
    for b, e in enumerate(results):
        trials += min(B, cap - b * B)
        errors += e
        if errors >= config.min_word_errors:
            return WerEstimate(eb_n0_db, es_n0_db, trials, errors, "min_word_errors")
        if trials >= cap:
            break
    return WerEstimate(eb_n0_db, es_n0_db, trials, errors, "max_trials")


def _ordered_results(pool, args, n_batches: int, depth: int):
    # keep a bounded window of batches in flight; yield strictly in order
    pending = {}
    nxt = 0
    try:
        for b in range(n_batches):
            while nxt < n_batches and nxt < b + depth:
                pending[nxt] = pool.submit(_worker_batch, args(nxt))
                nxt += 1
            yield pending.pop(b).result()
    finally:
        for f in pending.values():
            f.cancel()
        for f in pending.values():
            if not f.cancelled():
                f.result()


def simulate(config: SweepConfig, spec=None) -> list[WerEstimate]:
    """Run the sweep; ``spec`` overrides loading ``config.code_spec_path``."""
    if spec is None:
        spec = load_spec(config.code_spec_path)
    check_compatible(spec, config.decoder)
    if config.workers == 1:
        return [simulate_point(spec, config, s) for s in config.snr_points]
    # warm the compiled kernels once so forked workers inherit them
    run_batch(spec, config.decoder, config.list_size, 0.0, 0, 0, 1, config.min_sum)
    with ProcessPoolExecutor(config.workers, initializer=_init_worker, initargs=(spec,)) as pool:
        return [simulate_point(spec, config, s, pool) for s in config.snr_points]


def results_csv(results, config: SweepConfig) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        w.writerow([
            repr(r.eb_n0_db),
            repr(r.es_n0_db),
            config.decoder,
            config.list_size,
            r.trials,
            r.word_errors,
            repr(r.wer),
            repr(r.ci95_halfwidth),
            r.stop_reason,
            config.master_seed,
        ])
    return buf.getvalue()


def read_results_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for k in ("eb_n0_db", "es_n0_db", "wer", "ci95_halfwidth"):
            r[k] = float(r[k])
        for k in ("list_size", "trials", "word_errors", "seed"):
            r[k] = int(r[k])
    return rows


def crossing_snr(snr, wer, target: float) -> float | None:
    """Eb/N0 where the WER curve crosses ``target``, interpolating log10(WER) linearly.

    Returns None if the curve never crosses the target. Zero-error points end
    the usable part of the curve.
    """
    snr = np.asarray(snr, dtype=np.float64)
    wer = np.asarray(wer, dtype=np.float64)
    lt = math.log10(target)
    for k in range(len(snr) - 1):
        a, b = wer[k], wer[k + 1]
        if a <= 0.0:
            return None
        if a >= target > b:
            if b <= 0.0:
                return float(snr[k + 1])
            la, lb = math.log10(a), math.log10(b)
            return float(snr[k] + (la - lt) / (la - lb) * (snr[k + 1] - snr[k]))
    return None
