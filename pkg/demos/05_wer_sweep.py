"""
A short WER sweep: SC on the plain code vs the repetition-aware SC decoder on
the concatenated code, both designed at Eb/N0 = 2.5 dB for N=256, R=1/2.

Uses few word errors per point so it finishes in a minute or two; the
acceptance suite runs the same comparison with full statistics. The CSV it
writes has the same columns as ``polarrep simulate``.
"""

import sys
import tempfile
from pathlib import Path

from polarrep import PolarParams, SweepConfig, awgn_reliability_ga, design_concatenated, ebn0_to_esn0, select_information_set, simulate
from polarrep.sim import crossing_snr, results_csv
from polarrep.specio import save_spec

N, K = 256, 128
snr = [2.0, 2.5, 3.0, 3.5]
errors = int(sys.argv[1]) if len(sys.argv) > 1 else 40

prof = awgn_reliability_ga(PolarParams.from_length(N), ebn0_to_esn0(2.5, K / N))
out = Path(tempfile.mkdtemp())
save_spec(select_information_set(prof, K), out / "plain.json")
save_spec(design_concatenated(prof, K), out / "conc.json")

curves = {}
for name, spec, decoder in (("SC", "plain.json", "sc"), ("concatenated", "conc.json", "rep_sc")):
    cfg = SweepConfig(str(out / spec), decoder, snr, min_word_errors=errors, master_seed=1)
    res = simulate(cfg)
    (out / f"{decoder}.csv").write_text(results_csv(res, cfg))
    curves[name] = res
    print(f"\n{name} ({decoder})")
    for r in res:
        print(f"  Eb/N0 {r.eb_n0_db:4.2f} dB  WER {r.wer:.2e} +- {r.ci95_halfwidth:.1e}  ({r.word_errors}/{r.trials})")

a = crossing_snr(snr, [r.wer for r in curves["SC"]], 1e-2)
b = crossing_snr(snr, [r.wer for r in curves["concatenated"]], 1e-2)
if a is not None and b is not None:
    print(f"\ngain at WER 1e-2: {a - b:.2f} dB")
print(f"CSV files in {out}")
