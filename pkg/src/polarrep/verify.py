"""Built-in oracle suites behind ``polarrep verify``.

Each suite returns a ``SuiteResult``; ``run_suites`` runs a selection and the
CLI turns any failure into exit status 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest, norm

from .channel import ChannelParams, llr_bi_awgn
from .decoders import (
    decode_batch,
    ml_decode_bruteforce,
    rep_list_decode,
    rep_sc_decode,
    sc_decode,
    sc_list_decode,
)
from .design import ConcatenatedCodeSpec, SearchParams, design_concatenated, select_information_set
from .oracles import BruteForcePosterior
from .reliability import DesignChannel, awgn_reliability_ga, bec_reliability, genie_mc_reliability
from .transform import PolarParams, gf2_matmul, naive_generator, transform


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _noisy_llrs(gen, spec, trials: int, es_n0_db: float) -> np.ndarray:
    from .sim import _encode  # local: sim imports specio, which imports design

    info = gen.integers(0, 2, size=(trials, spec.K), dtype=np.uint8)
    cp = ChannelParams(es_n0_db)
    y = 1.0 - 2.0 * _encode(info, spec) + math.sqrt(cp.sigma2) * gen.standard_normal((trials, spec.N))
    return llr_bi_awgn(y, cp)


def suite_transform(seed: int = 0, trials: int = 1000) -> SuiteResult:
    """Butterfly vs Kronecker matrix: exhaustive for N <= 16, random words at N = 32."""
    for n in range(0, 5):
        p = PolarParams(n)
        N = p.N
        idx = np.arange(1 << N, dtype=np.int64)
        words = ((idx[:, None] >> np.arange(N)) & 1).astype(np.uint8)
        if not np.array_equal(transform(words, p), gf2_matmul(words, naive_generator(p))):
            return SuiteResult("transform", False, f"mismatch at N={N}")
    p = PolarParams(5)
    words = np.random.default_rng(seed).integers(0, 2, size=(trials, 32), dtype=np.uint8)
    if not np.array_equal(transform(words, p), gf2_matmul(words, naive_generator(p))):
        return SuiteResult("transform", False, "mismatch at N=32")
    return SuiteResult("transform", True, f"exhaustive N<=16, {trials} random words at N=32")


def suite_inverse(seed: int = 0, trials: int = 1000) -> SuiteResult:
    gen = np.random.default_rng(seed)
    for n in range(0, 11):
        p = PolarParams(n)
        w = gen.integers(0, 2, size=(trials, p.N), dtype=np.uint8)
        if not np.array_equal(transform(transform(w, p), p), w):
            return SuiteResult("inverse", False, f"transform is not an involution at N={p.N}")
    return SuiteResult("inverse", True, f"x == T(T(x)) for N=1..1024, {trials} words each")


_THREE_SIGMA = 2.0 * float(norm.sf(3.0))


def bec_index_pvalues(analytic_pe, empirical_pe, trials: int) -> np.ndarray:
    """Two-sided exact binomial p-values of the per-index erasure counts."""
    out = np.empty(len(analytic_pe))
    for i, (a, e) in enumerate(zip(analytic_pe, empirical_pe)):
        k = int(round(2.0 * e * trials))
        z = min(1.0, 2.0 * a)
        if z in (0.0, 1.0):
            out[i] = 1.0 if k == round(z * trials) else 0.0
        else:
            out[i] = binomtest(k, trials, z).pvalue
    return out


def suite_bec(n: int = 4, trials: int = 100_000, epsilon: float = 0.5, seed: int = 0) -> SuiteResult:
    """Exact erasure recursion vs genie Monte Carlo, per index within 3 sigma."""
    p = PolarParams(n)
    analytic = bec_reliability(p, epsilon).pe
    empirical = genie_mc_reliability(p, DesignChannel.bec(epsilon), trials, seed).pe
    # each trial adds half an error per erasure: erasures ~ Binomial(trials, 2 pe).
    # "3 sigma" is applied as the equivalent two-sided level of an exact binomial
    # test, which stays meaningful for indices with only a handful of erasures
    pvals = bec_index_pvalues(analytic, empirical, trials)
    bad = np.where(pvals < _THREE_SIGMA)[0].tolist()
    detail = f"N={p.N}, eps={epsilon}, {trials} trials, min p-value {pvals.min():.3g}"
    return SuiteResult("bec", not bad, detail if not bad else f"{detail}; outside 3 sigma at {bad}")


def suite_degeneracy(seed: int = 0, trials: int = 1000) -> SuiteResult:
    """sc == scl(L=1) == rep_sc(no blocks) == rep_scl(L=1, no blocks); rep_sc == rep_scl(L=1)."""
    gen = np.random.default_rng(seed)
    prof = awgn_reliability_ga(PolarParams(6), 0.0)
    plain = select_information_set(prof, 32)
    llrs = _noisy_llrs(gen, plain, trials, 0.0)
    ref, ref_m = decode_batch(llrs, plain, "sc")
    for t in range(min(trials, 50)):
        if not np.array_equal(sc_decode(llrs[t], plain).source_word, ref[t]):
            return SuiteResult("degeneracy", False, "single-word and batch sc disagree")
    for dec, L in (("scl", 1), ("rep_sc", 1), ("rep_scl", 1)):
        u, m = decode_batch(llrs, plain, dec, L)
        if not (np.array_equal(u, ref) and np.array_equal(m, ref_m)):
            return SuiteResult("degeneracy", False, f"{dec}(L={L}) differs from sc on a plain code")
    conc = design_concatenated(prof, 32, SearchParams(delta_max=8, block_len_max=3))
    if not conc.blocks:
        return SuiteResult("degeneracy", False, "reference design produced no blocks")
    llrs = _noisy_llrs(gen, conc, trials, 0.0)
    a, am = decode_batch(llrs, conc, "rep_sc")
    b, bm = decode_batch(llrs, conc, "rep_scl", 1)
    if not (np.array_equal(a, b) and np.array_equal(am, bm)):
        return SuiteResult("degeneracy", False, "rep_scl(L=1) differs from rep_sc")
    for t in range(min(trials, 50)):
        # single-word entry points agree with the batch kernels
        if not (np.array_equal(rep_sc_decode(llrs[t], conc).source_word, a[t])
                and np.array_equal(rep_list_decode(llrs[t], conc, 1).source_word, a[t])):
            return SuiteResult("degeneracy", False, "single-word and batch decoders disagree")
    return SuiteResult("degeneracy", True, f"{trials} trials on a plain and a {len(conc.blocks)}-block code, bitwise")


def suite_list_ml(seed: int = 0, trials: int = 1000, es_n0_db: float = 0.0) -> SuiteResult:
    """SCL with L = 2**K keeps every codeword, so its winner has the ML metric."""
    gen = np.random.default_rng(seed)
    spec = select_information_set(awgn_reliability_ga(PolarParams(3), es_n0_db), 4)
    llrs = _noisy_llrs(gen, spec, trials, es_n0_db)
    worst = 0.0
    for t in range(trials):
        a = sc_list_decode(llrs[t], spec, 2**spec.K).metric
        b = ml_decode_bruteforce(llrs[t], spec).metric
        worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    ok = worst <= 1e-9
    return SuiteResult("list_ml", ok, f"N=8, K=4, L=16, {trials} trials, max relative metric gap {worst:.2e}")


def rep_reference_spec() -> ConcatenatedCodeSpec:
    """N=16 scheme with a block whose span contains an information index."""
    prof = awgn_reliability_ga(PolarParams(4), 0.0)
    return design_concatenated(prof, 8, SearchParams(delta_max=4, block_len_max=3))


def suite_rep_bruteforce(seed: int = 0, trials: int = 1000, es_n0_db: float = 0.0,
                         spec: ConcatenatedCodeSpec | None = None) -> SuiteResult:
    """Block decisions of rep_sc against exhaustive evaluation of the branch posteriors."""
    spec = rep_reference_spec() if spec is None else spec
    if not spec.blocks:
        return SuiteResult("rep_bruteforce", False, "reference scheme has no blocks")
    gen = np.random.default_rng(seed)
    post = BruteForcePosterior(spec.params)
    frozen = np.array([i not in set(spec.enlarged_set) for i in range(spec.N)])
    llrs = _noisy_llrs(gen, spec, trials, es_n0_db)
    checked = 0
    for t in range(trials):
        u = rep_sc_decode(llrs[t], spec).source_word
        for blk in spec.blocks:
            choice, seqs, _ = post.rep_block_choice(llrs[t], frozen, blk, u[: blk[0]])
            if choice != u[blk[0]] or not np.array_equal(seqs[choice], u[blk[0] : blk[-1] + 1]):
                return SuiteResult("rep_bruteforce", False, f"trial {t}: block {blk} decided {u[blk[0]]}, oracle {choice}")
            checked += 1
    return SuiteResult("rep_bruteforce", True, f"N=16, blocks {list(spec.blocks)}, {checked} block decisions")


def suite_spec(path) -> SuiteResult:
    from .specio import check_spec_file

    problems = check_spec_file(path)
    if problems:
        return SuiteResult("spec", False, f"{path}: " + "; ".join(problems))
    return SuiteResult("spec", True, f"{path}: all invariants hold")


SUITES = ("transform", "inverse", "bec", "degeneracy", "list_ml", "rep_bruteforce")


def run_suites(names=SUITES, n: int = 4, trials: int | None = None, seed: int = 0, spec_path=None) -> list[SuiteResult]:
    out = []
    for name in names:
        if name == "transform":
            out.append(suite_transform(seed))
        elif name == "inverse":
            out.append(suite_inverse(seed))
        elif name == "bec":
            out.append(suite_bec(n, trials or 100_000, seed=seed))
        elif name == "degeneracy":
            out.append(suite_degeneracy(seed, trials or 1000))
        elif name == "list_ml":
            out.append(suite_list_ml(seed, trials or 1000))
        elif name == "rep_bruteforce":
            out.append(suite_rep_bruteforce(seed, trials or 1000))
        elif name == "spec":
            out.append(suite_spec(spec_path))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return out
