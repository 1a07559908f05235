"""
Bit-channel failure probabilities for N = 256 at Es/N0 = -0.5 dB.

Computes the Gaussian-approximation profile, shows how it splits around the
rate-1/2 threshold, and cross-checks the ordering against a genie-aided
Monte Carlo estimate.
"""

import numpy as np
from scipy.stats import spearmanr

from polarrep import DesignChannel, PolarParams, awgn_reliability_ga, genie_mc_reliability, predicted_wer

p = PolarParams(8)
es = -0.5
prof = awgn_reliability_ga(p, es)

order = np.argsort(prof.pe, kind="stable")
threshold = prof.pe[order[127]]
print(f"N={p.N}, Es/N0={es} dB")
print(f"rate-1/2 threshold: pe <= {threshold:.3e} for the 128 best channels")
print(f"predicted SC word error rate of the K=128 code: {predicted_wer(prof.pe[order[:128]]):.4f}")

## channels near the threshold dominate the predicted WER

near = order[118:138]
print("\nrank  index   pe")
for r, i in zip(range(118, 138), near):
    mark = "<-" if r == 127 else ""
    print(f"{r:4d}  {i:5d}   {prof.pe[i]:.3e} {mark}")

worst_info = prof.pe[order[:128]]
share = np.sort(worst_info)[-16:].sum() / worst_info.sum()
print(f"\nthe 16 weakest information channels carry {share:.0%} of sum(pe)")

## genie-aided Monte Carlo: same quantity, no Gaussian approximation

mc = genie_mc_reliability(PolarParams(6), DesignChannel.bi_awgn(es), 50_000, seed=3)
ga = awgn_reliability_ga(PolarParams(6), es)
print(f"\nN=64: Spearman rank correlation GA vs genie MC = {spearmanr(ga.pe, mc.pe).statistic:.4f}")
