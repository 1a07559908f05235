"""
Decoding one noisy word five ways.

SC, list decoding, the repetition-aware SC decoder, its list version and
brute-force ML on a short concatenated code. The path metric reported by
every decoder is -log Pr(u | y), so the numbers are directly comparable.
"""

import numpy as np

from polarrep import (
    ChannelParams,
    PolarParams,
    RngStream,
    SearchParams,
    awgn_apply,
    awgn_reliability_ga,
    bpsk_modulate,
    design_concatenated,
    encode_concatenated,
    llr_bi_awgn,
    ml_decode_bruteforce,
    rep_list_decode,
    rep_sc_decode,
    sc_decode,
    sc_list_decode,
    select_information_set,
)

p = PolarParams(4)
es = -1.0
prof = awgn_reliability_ga(p, es)
conc = design_concatenated(prof, 8, SearchParams(delta_max=4, block_len_max=3))
plain = select_information_set(prof, 8)
print(f"N=16, K=8 at Es/N0={es} dB")
print(f"plain information set      {plain.info_set}")
print(f"enlarged set {conc.enlarged_set} with blocks {conc.blocks}")

cp = ChannelParams(es)
for seed in range(40):
    stream = RngStream(seed, 0)
    info = stream.generator(0).integers(0, 2, 8, dtype=np.uint8)
    llr = llr_bi_awgn(awgn_apply(bpsk_modulate(encode_concatenated(info, conc)), cp, stream), cp)
    if rep_sc_decode(llr, conc).info_bits.tolist() != info.tolist():
        break
print(f"\nfirst seed where rep_sc fails: {seed}; sent info {info.tolist()}")

results = {
    "rep_sc": rep_sc_decode(llr, conc),
    "rep_scl L=2": rep_list_decode(llr, conc, 2),
    "rep_scl L=8": rep_list_decode(llr, conc, 8),
    "ml": ml_decode_bruteforce(llr, conc),
}
for name, r in results.items():
    ok = "ok " if r.info_bits.tolist() == info.tolist() else "err"
    print(f"  {name:12s} {ok} metric {r.metric:8.4f}  info {r.info_bits.tolist()}")

## the plain decoders on the plain code, same channel realization statistics

print("\nsame LLRs through the plain code's decoders (different code, for scale):")
for name, r in (("sc", sc_decode(llr, plain)), ("scl L=4", sc_list_decode(llr, plain, 4))):
    print(f"  {name:12s} metric {r.metric:8.4f}")
