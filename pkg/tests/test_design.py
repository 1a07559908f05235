import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polarrep import (
    CodeSpec,
    ConcatenatedCodeSpec,
    DesignChannel,
    PolarParams,
    ReliabilityProfile,
    SearchParams,
    UnsupportedMethodError,
    awgn_reliability_ga,
    bec_reliability,
    design_concatenated,
    equivalent_block_reliability,
    predicted_wer,
    scheme_predicted_wer,
    select_information_set,
    validate_scheme,
)
from polarrep.design import candidate_window
from polarrep.reliability import qfunc
from scipy.special import erfcinv


def profile_from_pe(pe):
    """GA-style profile whose means reproduce the given pe exactly."""
    pe = np.asarray(pe, dtype=float)
    m = 2.0 * (math.sqrt(2.0) * erfcinv(2.0 * pe)) ** 2
    return ReliabilityProfile(DesignChannel.bi_awgn(0.0), "ga", qfunc(np.sqrt(m / 2)), m)


def layouts(profile, K, delta_max, block_len_max, window):
    """Every admissible layout: span-disjoint blocks from the window, each led by
    its most reliable member, plus any choice of single channels."""
    pe = profile.pe
    N = profile.N
    cands = []
    for size in range(2, block_len_max + 1):
        for c in itertools.combinations(sorted(window), size):
            if all(pe[c[0]] <= pe[j] for j in c[1:]):
                cands.append(c)
    cands.sort()

    def block_sets(start, chosen, last_end):
        yield list(chosen)
        for k in range(start, len(cands)):
            b = cands[k]
            if b[0] > last_end:
                yield from block_sets(k + 1, chosen + [b], b[-1])

    for blocks in block_sets(0, [], -1):
        extra = sum(len(b) - 1 for b in blocks)
        if extra > delta_max or len(blocks) > K:
            continue
        used = {i for b in blocks for i in b}
        free = [i for i in range(N) if i not in used]
        for singles in itertools.combinations(free, K - len(blocks)):
            yield blocks, singles


def layout_wer(profile, blocks, singles):
    ps = [profile.pe[i] for i in singles] + [equivalent_block_reliability(profile, b).pe_equiv for b in blocks]
    return predicted_wer(ps)


def brute_force_best(profile, K, delta_max, block_len_max, window=None):
    window = range(profile.N) if window is None else window
    best = None
    for blocks, singles in layouts(profile, K, delta_max, block_len_max, window):
        key = (layout_wer(profile, blocks, singles), len(blocks))
        if best is None or key < best[0]:
            best = (key, blocks, singles)
    return best


def test_select_information_set_examples():
    prof = ReliabilityProfile(DesignChannel.bec(0.5), "bec", [0.4, 0.1, 0.2, 0.01])
    assert select_information_set(prof, 2).info_set == (1, 3)
    assert select_information_set(prof, 4).info_set == (0, 1, 2, 3)
    tied = ReliabilityProfile(DesignChannel.bec(0.5), "bec", [0.2, 0.1, 0.2, 0.2])
    assert select_information_set(tied, 2).info_set == (0, 1)
    for bad in (0, 5):
        with pytest.raises(ValueError):
            select_information_set(prof, bad)


def test_select_information_set_n256():
    prof = awgn_reliability_ga(PolarParams(8), -0.5)
    spec = select_information_set(prof, 128)
    assert spec.K == 128 and spec.rate == 0.5
    sel = prof.pe[list(spec.info_set)]
    rest = prof.pe[list(spec.frozen_set)]
    assert sel.max() <= rest.min()


def test_codespec_invariants():
    spec = CodeSpec(PolarParams(3), (3, 5, 7))
    assert spec.frozen_set == (0, 1, 2, 4, 6) and spec.rate == 3 / 8
    with pytest.raises(ValueError):
        CodeSpec(PolarParams(3), (5, 3))
    with pytest.raises(ValueError):
        CodeSpec(PolarParams(3), (3, 8))


def test_concatenated_rates():
    spec = ConcatenatedCodeSpec(PolarParams(3), (3, 5, 6, 7), ((3, 5),), 3)
    assert spec.inner_rate == 0.5 and spec.outer_rate == 0.75
    assert math.isclose(spec.rate, spec.inner_rate * spec.outer_rate)
    assert spec.units == ((3, 5), (6,), (7,)) and spec.info_set == (3, 6, 7)


def test_four_channel_example_matches_enumeration():
    prof = profile_from_pe([0.001, 0.3, 0.25, 0.4])
    spec = design_concatenated(prof, 2, SearchParams(delta_max=1, block_len_max=2))
    (wer, _), blocks, singles = brute_force_best(prof, 2, 1, 2)
    assert blocks == [(2, 3)] and singles == (0,)
    assert spec.blocks == ((2, 3),) and spec.enlarged_set == (0, 2, 3)
    assert math.isclose(scheme_predicted_wer(spec, prof), wer, rel_tol=1e-12)
    assert wer < predicted_wer([0.001, 0.25])


def test_delta_zero_is_plain():
    prof = awgn_reliability_ga(PolarParams(6), 0.0)
    spec = design_concatenated(prof, 32, SearchParams(delta_max=0))
    assert spec.blocks == () and spec.enlarged_set == select_information_set(prof, 32).info_set


def test_full_rate_is_plain():
    prof = awgn_reliability_ga(PolarParams(4), 0.0)
    spec = design_concatenated(prof, 16)
    assert spec.blocks == () and spec.enlarged_set == tuple(range(16))


def test_requires_llr_means():
    with pytest.raises(UnsupportedMethodError):
        design_concatenated(bec_reliability(PolarParams(4), 0.3), 8)


@pytest.mark.parametrize("es", [-2.0, -0.5, 1.0, 3.0])
@pytest.mark.parametrize("K,delta,blen", [(2, 2, 3), (4, 1, 2), (4, 3, 3), (5, 2, 3), (3, 4, 4)])
def test_design_matches_exhaustive_enumeration_n8(es, K, delta, blen):
    prof = awgn_reliability_ga(PolarParams(3), es)
    spec = design_concatenated(prof, K, SearchParams(delta_max=delta, block_len_max=blen))
    (wer, nblocks), _, _ = brute_force_best(prof, K, delta, blen)
    got = scheme_predicted_wer(spec, prof)
    assert math.isclose(got, wer, rel_tol=1e-9, abs_tol=1e-15)
    if not math.isclose(got, predicted_wer(sorted(prof.pe)[:K]), rel_tol=1e-12):
        assert len(spec.blocks) == nblocks
    assert validate_scheme(spec, prof) == []


@given(st.lists(st.floats(1e-4, 0.49), min_size=8, max_size=8), st.integers(1, 7), st.integers(1, 3))
def test_design_matches_enumeration_random_profiles(pe, K, delta):
    prof = profile_from_pe(pe)
    spec = design_concatenated(prof, K, SearchParams(delta_max=delta, block_len_max=3))
    (wer, _), _, _ = brute_force_best(prof, K, delta, 3)
    assert math.isclose(scheme_predicted_wer(spec, prof), wer, rel_tol=1e-9, abs_tol=1e-15)
    assert validate_scheme(spec, prof) == []
    assert spec.K == K and spec.N == 8


def test_design_respects_candidate_window_n16():
    prof = awgn_reliability_ga(PolarParams(4), 0.0)
    window = candidate_window(prof.pe, 8, 6)
    spec = design_concatenated(prof, 8, SearchParams(delta_max=2, block_len_max=3, candidate_window=6))
    (wer, _), _, _ = brute_force_best(prof, 8, 2, 3, window)
    assert math.isclose(scheme_predicted_wer(spec, prof), wer, rel_tol=1e-9)
    assert all(i in set(window) for b in spec.blocks for i in b)


@pytest.mark.parametrize("n,es", [(6, -1.0), (8, -0.5), (9, 0.0), (10, -1.0)])
def test_dominance_rate_and_validity(n, es):
    prof = awgn_reliability_ga(PolarParams(n), es)
    K = (1 << n) // 2
    spec = design_concatenated(prof, K)
    assert spec.K == K and spec.N == 1 << n and spec.rate == 0.5
    assert scheme_predicted_wer(spec, prof) <= predicted_wer(np.sort(prof.pe)[:K])
    assert validate_scheme(spec, prof) == []


def test_design_deterministic():
    prof = awgn_reliability_ga(PolarParams(8), -0.5)
    a = design_concatenated(prof, 128)
    b = design_concatenated(prof, 128)
    assert a.blocks == b.blocks and a.enlarged_set == b.enlarged_set
    assert a.blocks and scheme_predicted_wer(a, prof) < predicted_wer(np.sort(prof.pe)[:128])


def test_block_heads_are_most_reliable():
    prof = awgn_reliability_ga(PolarParams(8), -0.5)
    spec = design_concatenated(prof, 128)
    for b in spec.blocks:
        assert prof.pe[b[0]] == prof.pe[list(b)].min()


def test_validate_reports_violations():
    prof = awgn_reliability_ga(PolarParams(4), 0.0)
    good = design_concatenated(prof, 8, SearchParams(delta_max=4, block_len_max=3))
    assert good.blocks and validate_scheme(good, prof) == []

    shared = ConcatenatedCodeSpec(PolarParams(4), (9, 10, 11, 12, 13, 14, 15), ((9, 11), (11, 13)), 5)
    assert any(m.startswith("non-overlap") for m in validate_scheme(shared))

    rate = ConcatenatedCodeSpec(PolarParams(4), (12, 13, 14, 15), ((12, 13),), 4)
    assert any(m.startswith("rate preservation") for m in validate_scheme(rate))

    subset = ConcatenatedCodeSpec(PolarParams(4), (12, 13, 14), ((11, 13),), 2)
    assert any(m.startswith("subset") for m in validate_scheme(subset))

    span = ConcatenatedCodeSpec(PolarParams(4), (8, 9, 10, 11, 12, 13), ((8, 11), (9, 12)), 4)
    assert any("interleave" in m for m in validate_scheme(span))


def test_validate_head_rule_explicit():
    prof = profile_from_pe([0.4, 0.3, 0.2, 0.1])
    # head 1 (pe 0.3) is less reliable than member 2 (pe 0.2)
    spec = ConcatenatedCodeSpec(PolarParams(2), (1, 2, 3), ((1, 2),), 2)
    assert any(m.startswith("head reliability") for m in validate_scheme(spec, prof))
    prof2 = profile_from_pe([0.1, 0.4, 0.3, 0.2])
    ok = ConcatenatedCodeSpec(PolarParams(2), (0, 2, 3), ((0, 2),), 2)
    assert validate_scheme(ok, prof2) == []
