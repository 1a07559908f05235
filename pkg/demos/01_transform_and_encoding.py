"""
Polar transform and the two encoders.

Walks through the natural-order transform x = u G_N, checks it against the
explicit Kronecker matrix, then encodes a plain code and a small concatenated
code whose outer repetition block ties u_0 and u_3 together.
"""

import numpy as np

from polarrep import CodeSpec, ConcatenatedCodeSpec, PolarParams, encode_concatenated, encode_polar, transform
from polarrep.transform import gf2_matmul, naive_generator, source_word_concatenated

## the kernel and its Kronecker powers

p = PolarParams(2)
print("G_4 = F (x) F, natural row order:")
print(naive_generator(p))
print()

for u in ([0, 1], [1, 1]):
    print(f"N=2: u={u} -> x={transform(u, PolarParams(1)).tolist()}")

## butterfly vs matrix, and the transform is its own inverse

p = PolarParams(5)
rng = np.random.default_rng(1)
u = rng.integers(0, 2, size=(1000, p.N))
same = np.array_equal(transform(u, p), gf2_matmul(u, naive_generator(p)))
back = np.array_equal(transform(transform(u, p), p), u)
print(f"\nN=32, 1000 random words: butterfly == matrix: {same}; T(T(u)) == u: {back}")

## a plain code: info bits on the information set, zeros elsewhere

spec = CodeSpec(PolarParams(2), (3,))
print(f"\nN=4, A={{3}}: info (1) -> codeword {encode_polar([1], spec).tolist()}")

## the concatenated code of the four-channel example

conc = ConcatenatedCodeSpec(PolarParams(2), (0, 3), ((0, 3),), 1)
print(f"\nN=4, A*={{0,3}}, block {{0,3}}, K={conc.K}")
print(f"  inner rate {conc.inner_rate}, outer rate {conc.outer_rate}, overall {conc.rate}")
print(f"  info (1) -> source word {source_word_concatenated([1], conc).tolist()}"
      f" -> codeword {encode_concatenated([1], conc).tolist()}")
