"""
Designing the repetition layout.

Starting from the plain K=128 code, the search enlarges the information set
by a few channels just above the threshold and merges weak channels into
repetition blocks, keeping N and K fixed. Each block acts as one equivalent
channel whose LLR mean is the sum of its members'.
"""

import numpy as np

from polarrep import (
    PolarParams,
    SearchParams,
    awgn_reliability_ga,
    design_concatenated,
    ebn0_to_esn0,
    equivalent_block_reliability,
    predicted_wer,
    scheme_predicted_wer,
    select_information_set,
    validate_scheme,
)

N, K = 256, 128
es = ebn0_to_esn0(2.5, K / N)
prof = awgn_reliability_ga(PolarParams.from_length(N), es)
plain = select_information_set(prof, K)
print(f"design point Eb/N0=2.5 dB (Es/N0={es:.3f} dB), N={N}, K={K}")
print(f"plain code predicted WER: {predicted_wer(prof.pe[list(plain.info_set)]):.4f}")

for search in (SearchParams(delta_max=4), SearchParams(), SearchParams(delta_max=24, block_len_max=5)):
    spec = design_concatenated(prof, K, search)
    print(f"\n{search}")
    print(f"  |A*|={len(spec.enlarged_set)}, {len(spec.blocks)} blocks, "
          f"R_i={spec.inner_rate:.4f}, R_o={spec.outer_rate:.4f}")
    print(f"  predicted WER {scheme_predicted_wer(spec, prof):.4f}, violations: {validate_scheme(spec, prof)}")

spec = design_concatenated(prof, K)
print("\nblocks of the default design:")
for b in spec.blocks:
    eq = equivalent_block_reliability(prof, b).pe_equiv
    members = ", ".join(f"{i}:{prof.pe[i]:.2e}" for i in b)
    print(f"  {list(b)}  members [{members}]  ->  equivalent {eq:.2e}")

## the extra channels come from just below the threshold

rank = np.empty(N, dtype=int)
rank[np.argsort(prof.pe, kind="stable")] = np.arange(N)
added = sorted(set(spec.enlarged_set) - set(plain.info_set))
print(f"\nchannels added to the information set (reliability rank): {[(i, int(rank[i])) for i in added]}")
