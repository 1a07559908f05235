"""Information-set selection and the repetition-block layout search.

A concatenated scheme keeps length N and dimension K of a plain polar code but
spreads the K info bits over an enlarged set of channels: a few info bits are
each carried by a *repetition block* of several channels. Blocks are disjoint,
their index spans do not interleave (so successive decoding never tracks more
than two block hypotheses), and every block starts with its most reliable
channel.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _kernels as kern
from .reliability import (
    ReliabilityProfile,
    UnsupportedMethodError,
    equivalent_block_reliability,
    pe_from_mean,
    predicted_wer,
)
from .transform import PolarParams

# cost -log(1 - pe) used when pe == 1
_MAX_UNIT_COST = 50.0


def _index_tuple(values) -> tuple[int, ...]:
    return tuple(int(v) for v in values)


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """Plain polar code: information set plus the profile it was chosen from."""

    params: PolarParams
    info_set: tuple[int, ...]
    profile: ReliabilityProfile | None = None

    def __post_init__(self):
        info = _index_tuple(self.info_set)
        if any(b <= a for a, b in zip(info, info[1:])):
            raise ValueError("info_set must be strictly increasing")
        if info and (info[0] < 0 or info[-1] >= self.params.N):
            raise ValueError("info_set indices out of range")
        object.__setattr__(self, "info_set", info)

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def K(self) -> int:
        return len(self.info_set)

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def info_array(self) -> np.ndarray:
        return np.array(self.info_set, dtype=np.int64)

    @property
    def frozen_set(self) -> tuple[int, ...]:
        info = set(self.info_set)
        return tuple(i for i in range(self.N) if i not in info)

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.ones(self.N, dtype=np.uint8)
        mask[self.info_array] = 0
        return mask

    def as_concatenated(self) -> "ConcatenatedCodeSpec":
        return ConcatenatedCodeSpec(self.params, self.info_set, (), self.K, self.profile)


@dataclass(frozen=True, eq=False)
class ConcatenatedCodeSpec:
    """Inner polar code on ``enlarged_set`` protected by outer repetition blocks.

    The constructor only normalizes types; ``validate_scheme`` reports broken
    invariants, so a corrupted spec can still be loaded and inspected.
    """

    params: PolarParams
    enlarged_set: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    K: int
    profile: ReliabilityProfile | None = None

    def __post_init__(self):
        object.__setattr__(self, "enlarged_set", _index_tuple(self.enlarged_set))
        object.__setattr__(self, "blocks", tuple(sorted(_index_tuple(b) for b in self.blocks)))
        object.__setattr__(self, "K", int(self.K))

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def inner_rate(self) -> float:
        return len(self.enlarged_set) / self.N

    @property
    def outer_rate(self) -> float:
        return self.K / len(self.enlarged_set)

    @property
    def frozen_set(self) -> tuple[int, ...]:
        a = set(self.enlarged_set)
        return tuple(i for i in range(self.N) if i not in a)

    @property
    def units(self) -> tuple[tuple[int, ...], ...]:
        """Channel groups carrying one info bit each, ordered by first index."""
        blocked = {i for b in self.blocks for i in b}
        singles = [(i,) for i in self.enlarged_set if i not in blocked]
        return tuple(sorted(singles + list(self.blocks)))

    @property
    def info_set(self) -> tuple[int, ...]:
        """First channel of every unit: where each info bit is first decided."""
        return tuple(u[0] for u in self.units)

    def decoder_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-index role (frozen/info/head/member/last) and the head of each member."""
        kind = np.full(self.N, kern.FROZEN, dtype=np.int8)
        head_of = np.full(self.N, -1, dtype=np.int64)
        kind[list(self.enlarged_set)] = kern.INFO
        for b in self.blocks:
            kind[b[0]] = kern.HEAD
            kind[list(b[1:])] = kern.MEMBER
            kind[b[-1]] = kern.LAST
            head_of[list(b)] = b[0]
        return kind, head_of


@dataclass(frozen=True)
class SearchParams:
    """Bounds on the layout search.

    delta_max: at most this many channels beyond K (``|A*| - K``).
    block_len_max: largest block size.
    candidate_window: number of channels, centred on the rate-K threshold in
        reliability rank, that may join blocks.
    """

    delta_max: int = 16
    block_len_max: int = 4
    candidate_window: int = 48

    def __post_init__(self):
        if self.delta_max < 0:
            raise ValueError("delta_max must be non-negative")
        if self.block_len_max < 2:
            raise ValueError("block_len_max must be at least 2")
        if self.candidate_window < 0:
            raise ValueError("candidate_window must be non-negative")


def reliability_order(pe) -> np.ndarray:
    """Indices sorted by increasing failure probability, ties to the lower index."""
    return np.argsort(np.asarray(pe), kind="stable")


def select_information_set(profile: ReliabilityProfile, K: int) -> CodeSpec:
    """The K channels with the smallest failure probabilities."""
    N = profile.N
    if not 1 <= K <= N:
        raise ValueError(f"K must lie in [1, {N}], got {K}")
    info = np.sort(reliability_order(profile.pe)[:K])
    return CodeSpec(profile.params, tuple(info), profile)


def scheme_pe_values(spec: ConcatenatedCodeSpec, profile: ReliabilityProfile) -> list[float]:
    """One failure probability per unit: equivalent channels for blocks, raw pe otherwise."""
    out = []
    for unit in spec.units:
        if len(unit) == 1:
            out.append(float(profile.pe[unit[0]]))
        else:
            out.append(equivalent_block_reliability(profile, unit).pe_equiv)
    return out


def scheme_predicted_wer(spec: ConcatenatedCodeSpec, profile: ReliabilityProfile) -> float:
    return predicted_wer(scheme_pe_values(spec, profile))


def candidate_window(pe, K: int, width: int) -> np.ndarray:
    order = reliability_order(pe)
    lo = max(0, K - width // 2)
    hi = min(len(order), lo + width)
    return np.sort(order[lo:hi])


def admissible_blocks(profile: ReliabilityProfile, window, block_len_max: int, max_extra: int):
    """Every block of window channels that starts with its most reliable channel."""
    pe = profile.pe
    window = [int(i) for i in window]
    longest = min(block_len_max, max_extra + 1)
    for size in range(2, longest + 1):
        for combo in itertools.combinations(window, size):
            head = pe[combo[0]]
            if all(head <= pe[j] for j in combo[1:]):
                yield combo


def _unit_cost(p: float) -> float:
    return _MAX_UNIT_COST if p >= 1.0 else -math.log1p(-p)


@njit(cache=True)
def _best_layout(order_rank, unit_cost, blk_head, blk_last, blk_cost, blk_members, blk_size,
                 n_window, K, delta_max, t_lo, t_hi):
    """Exact minimum-cost layout over span-disjoint blocks.

    For a prefix length ``t`` of the reliability order, every unblocked channel
    of rank < t carries one info bit and every other unblocked channel is
    frozen; an optimal layout always has this form for some ``t``. For fixed
    ``t``, a block changes the cost by ``cost(block) - sum(cost of its members
    of rank < t)`` and the unit count by ``1 - #(members of rank < t)``; a DP
    over window positions in index order with state (count balance, extra
    channels) then finds the best span-disjoint block set. Ties prefer fewer
    blocks.
    """
    A = 2 * delta_max + 1
    E = delta_max + 1
    nb = blk_head.shape[0]
    INF = np.inf
    best_total = INF
    best_nblk = 1 << 30
    best_t = -1
    best_choice = np.full(nb, False)
    for t in range(t_lo, t_hi + 1):
        need = t - K  # required sum over blocks of (#members of rank < t) - 1
        if need < -delta_max or need > delta_max:
            continue
        base = 0.0
        for i in range(order_rank.shape[0]):
            if order_rank[i] < t:
                base += unit_cost[i]
        f = np.full((n_window + 1, A, E), INF)
        cnt = np.full((n_window + 1, A, E), 1 << 30, dtype=np.int64)
        back = np.full((n_window + 1, A, E), -2, dtype=np.int64)
        f[0, delta_max, 0] = 0.0
        cnt[0, delta_max, 0] = 0
        # blocks are sorted by head position
        b = 0
        for r in range(n_window):
            # skip position r
            for a in range(A):
                for e in range(E):
                    v = f[r, a, e]
                    if v < INF and (v < f[r + 1, a, e] or (v == f[r + 1, a, e] and cnt[r, a, e] < cnt[r + 1, a, e])):
                        f[r + 1, a, e] = v
                        cnt[r + 1, a, e] = cnt[r, a, e]
                        back[r + 1, a, e] = -1
            while b < nb and blk_head[b] == r:
                q = blk_last[b] + 1
                inside = 0
                delta = blk_cost[b]
                for k in range(blk_size[b]):
                    ch = blk_members[b, k]
                    if order_rank[ch] < t:
                        inside += 1
                        delta -= unit_cost[ch]
                da = inside - 1
                de = blk_size[b] - 1
                for a in range(A):
                    a2 = a + da
                    if a2 < 0 or a2 >= A:
                        continue
                    for e in range(E - de):
                        v = f[r, a, e]
                        if v == INF:
                            continue
                        v2 = v + delta
                        c2 = cnt[r, a, e] + 1
                        if v2 < f[q, a2, e + de] or (v2 == f[q, a2, e + de] and c2 < cnt[q, a2, e + de]):
                            f[q, a2, e + de] = v2
                            cnt[q, a2, e + de] = c2
                            back[q, a2, e + de] = b
                b += 1
        a_end = need + delta_max
        for e in range(E):
            v = f[n_window, a_end, e]
            if v == INF:
                continue
            total = base + v
            c = cnt[n_window, a_end, e]
            if total < best_total or (total == best_total and c < best_nblk):
                best_total = total
                best_nblk = c
                best_t = t
                # walk the back pointers
                best_choice[:] = False
                r = n_window
                a = a_end
                ee = e
                while r > 0:
                    bb = back[r, a, ee]
                    if bb == -1:
                        r -= 1
                    else:
                        best_choice[bb] = True
                        inside = 0
                        for k in range(blk_size[bb]):
                            if order_rank[blk_members[bb, k]] < t:
                                inside += 1
                        a -= inside - 1
                        ee -= blk_size[bb] - 1
                        r = blk_head[bb]
    return best_t, best_choice


def design_concatenated(
    profile: ReliabilityProfile,
    K: int,
    search: SearchParams | None = None,
) -> ConcatenatedCodeSpec:
    """Rate- and length-preserving repetition layout minimizing the predicted WER.

    The search is exact over every admissible layout: any number of blocks
    (including none) drawn from the candidate window with span-disjoint
    blocks and at most ``search.delta_max`` extra channels, the remaining info
    bits sitting on single channels. Minimizing the predicted WER is the same
    as minimizing ``sum(-log(1 - pe))`` over the K units.
    """
    search = search or SearchParams()
    if profile.llr_mean is None:
        raise UnsupportedMethodError(f"method {profile.method!r} provides no LLR means")
    N = profile.N
    if not 1 <= K <= N:
        raise ValueError(f"K must lie in [1, {N}], got {K}")
    plain = select_information_set(profile, K).as_concatenated()
    if search.delta_max == 0 or K == N:
        return plain

    window = candidate_window(profile.pe, K, search.candidate_window)
    blocks = list(admissible_blocks(profile, window, search.block_len_max, search.delta_max))
    if not blocks:
        return plain
    wpos = {int(w): r for r, w in enumerate(window)}
    blocks.sort(key=lambda b: (wpos[b[0]], b))
    rank = np.empty(N, dtype=np.int64)
    rank[reliability_order(profile.pe)] = np.arange(N)
    unit_cost = np.array([_unit_cost(p) for p in profile.pe])
    block_pe = pe_from_mean(np.array([profile.llr_mean[list(b)].sum() for b in blocks]))
    members = np.full((len(blocks), search.block_len_max), -1, dtype=np.int64)
    for k, b in enumerate(blocks):
        members[k, : len(b)] = b
    t_choice, chosen = _best_layout(
        rank,
        unit_cost,
        np.array([wpos[b[0]] for b in blocks], dtype=np.int64),
        np.array([wpos[b[-1]] for b in blocks], dtype=np.int64),
        np.array([_unit_cost(p) for p in block_pe]),
        members,
        np.array([len(b) for b in blocks], dtype=np.int64),
        len(window),
        K,
        search.delta_max,
        max(0, K - search.delta_max),
        min(N, K + search.delta_max),
    )
    picked = [blocks[k] for k in np.flatnonzero(chosen)]
    if t_choice < 0 or not picked:
        return plain
    blocked = {i for b in picked for i in b}
    singles = [i for i in range(N) if rank[i] < t_choice and i not in blocked]
    enlarged = sorted(singles + sorted(blocked))
    spec = ConcatenatedCodeSpec(profile.params, tuple(enlarged), tuple(picked), K, profile)
    if scheme_predicted_wer(spec, profile) > scheme_predicted_wer(plain, profile):
        return plain
    return spec


def validate_scheme(spec: ConcatenatedCodeSpec, profile: ReliabilityProfile | None = None) -> list[str]:
    """All broken invariants of a concatenated scheme, as readable messages."""
    problems = []
    N = spec.N
    a_star = spec.enlarged_set
    if any(i < 0 or i >= N for i in a_star):
        problems.append("range: enlarged set has indices outside [0, N)")
    if any(b <= a for a, b in zip(a_star, a_star[1:])):
        problems.append("enlarged set: indices must be strictly increasing")
    a_set = set(a_star)
    seen: dict[int, int] = {}
    for k, b in enumerate(spec.blocks):
        if len(b) < 2:
            problems.append(f"block size: block {list(b)} has fewer than 2 indices")
        if any(y <= x for x, y in zip(b, b[1:])):
            problems.append(f"block order: block {list(b)} is not strictly increasing")
        if not set(b) <= a_set:
            problems.append(f"subset: block {list(b)} is not contained in the enlarged set")
        for i in b:
            if i in seen and seen[i] != k:
                problems.append(f"non-overlap: index {i} appears in blocks {list(spec.blocks[seen[i]])} and {list(b)}")
            seen[i] = k
    spans = sorted((min(b), max(b), b) for b in spec.blocks if b)
    for (lo1, hi1, b1), (lo2, hi2, b2) in zip(spans, spans[1:]):
        if lo2 <= hi1 and not set(b1) & set(b2):
            problems.append(f"non-overlap: spans of blocks {list(b1)} and {list(b2)} interleave")
    extra = sum(len(b) - 1 for b in spec.blocks)
    if spec.K != len(a_star) - extra:
        problems.append(
            f"rate preservation: K={spec.K} but |A*| - sum(|b| - 1) = {len(a_star) - extra}"
        )
    if spec.blocks and not spec.K < len(a_star):
        problems.append(f"enlarged set: need K < |A*| <= N, got K={spec.K}, |A*|={len(a_star)}")
    if len(a_star) > N:
        problems.append("enlarged set: larger than N")
    if spec.K < 1:
        problems.append("dimension: K must be positive")
    if profile is not None:
        if profile.N != N:
            problems.append(f"profile: length {profile.N} does not match N={N}")
        else:
            pe = profile.pe
            for b in spec.blocks:
                if all(0 <= j < N for j in b):
                    if any(pe[b[0]] > pe[j] for j in b[1:]):
                        problems.append(
                            f"head reliability: block {list(b)} does not start with its most reliable channel"
                        )
    return problems
