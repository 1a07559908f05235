"""Exhaustive reference computations for short codes (N <= 16).

Every quantity here is obtained by enumerating all ``2**N`` source words and
marginalizing exactly; nothing is shared with the recursive decoders beyond
the transform itself.
"""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .transform import PolarParams, naive_generator


class BruteForcePosterior:
    """Posterior over source words ``u`` given channel LLRs, uniform prior.

    Words are indexed with ``u_0`` as the most significant bit, so all words
    sharing a prefix ``u_0 .. u_{k-1}`` occupy one contiguous range.
    """

    def __init__(self, params: PolarParams):
        if params.N > 16:
            raise ValueError("exhaustive posterior is limited to N <= 16")
        self.params = params
        N = params.N
        idx = np.arange(1 << N, dtype=np.int64)
        self.words = ((idx[:, None] >> (N - 1 - np.arange(N))) & 1).astype(np.uint8)
        # codewords by the naive matrix product, independent of the butterfly
        G = naive_generator(params).astype(np.int64)
        self.codewords = ((self.words.astype(np.int64) @ G) & 1).astype(np.uint8)
        self._signs = 1.0 - 2.0 * self.codewords

    def log_likelihood(self, llr) -> np.ndarray:
        """``log P(y | x(u))`` for every u, up to a common constant."""
        return self._signs @ np.asarray(llr, dtype=np.float64) / 2.0

    def prefix_logprob(self, ll: np.ndarray, prefix) -> float:
        N = self.params.N
        k = len(prefix)
        start = 0
        for b in prefix:
            start = 2 * start + int(b)
        start <<= N - k
        return float(logsumexp(ll[start : start + (1 << (N - k))]))

    def decision_llr(self, ll: np.ndarray, prefix) -> float:
        """``log Pr(u_i = 0 | y, prefix) / Pr(u_i = 1 | y, prefix)`` with i = len(prefix)."""
        prefix = list(prefix)
        return self.prefix_logprob(ll, prefix + [0]) - self.prefix_logprob(ll, prefix + [1])

    def sc_decisions(self, llr, frozen) -> np.ndarray:
        """Successive decisions by exhaustive marginalization (ties to 0)."""
        ll = self.log_likelihood(llr)
        u: list[int] = []
        for i in range(self.params.N):
            if frozen[i]:
                u.append(0)
            else:
                u.append(1 if self.decision_llr(ll, u) < 0.0 else 0)
        return np.array(u, dtype=np.uint8)

    def rep_block_choice(self, llr, frozen, block, prefix) -> tuple[int, list[np.ndarray], list[float]]:
        """Branch selection for a repetition block starting right after ``prefix``.

        Each branch fixes the block bit, decides the indices strictly inside the
        block by the successive rule, forces the remaining block indices to the
        block bit, and is scored by the joint probability of its sequence given
        ``y`` and the prefix. Returns the chosen bit (ties to 0), both
        sequences and both log-probabilities.
        """
        ll = self.log_likelihood(llr)
        i, j = block[0], block[-1]
        members = set(block)
        seqs, scores = [], []
        for b in (0, 1):
            u = list(prefix) + [b]
            for k in range(i + 1, j + 1):
                if k in members:
                    u.append(b)
                elif frozen[k]:
                    u.append(0)
                else:
                    u.append(1 if self.decision_llr(ll, u) < 0.0 else 0)
            seqs.append(np.array(u[i:], dtype=np.uint8))
            scores.append(self.prefix_logprob(ll, u) - self.prefix_logprob(ll, prefix))
        choice = 1 if scores[1] > scores[0] else 0
        return choice, seqs, scores
