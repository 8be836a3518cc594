# %% [markdown]
# The Feldman pseudo-metric replaces Hamming by Levenshtein, so shifts become
# invisible and substitutions are always Lipschitz.
#
# Usage: python3 05_feldman.py [output-dir]   (diagrams are written there)

# %%
import sys
import tempfile
from pathlib import Path

import numpy as np

from dillscope import analysis, metrics
from dillscope.catalog import builtin
from dillscope.diagram import space_time, write_atomic
from dillscope.dillmap import iterate
from dillscope.reproduce import random_periodic
from dillscope.words import periodic, shift

rng = np.random.default_rng(1)
x = random_periodic(rng, max_period=10)
c = metrics.curve(metrics.LEVENSHTEIN, x, shift(x, 1), metrics.geometric_lengths(2, 14))
print("x =", x)
print([str(s.raw) for s in c.samples])  # never more than 1

# %% certified upper bounds from aligned blocks
b = metrics.feldman_periodic_bounds(periodic("", "0110"), periodic("1", "0110"))
print("uppers", [str(u) for u in b.uppers], "tail", b.tail_estimate)

# %% Lipschitz bound for Fibonacci: images stay within 2x the input distance
fib = builtin("fibonacci")
for _ in range(4):
    x, y = random_periodic(rng), random_periodic(rng)
    bound = metrics.feldman_periodic_bounds(x, y).upper
    est = metrics.curve(metrics.LEVENSHTEIN, fib(x), fib(y), metrics.geometric_lengths(6, 12)).estimate.value
    print(f"d(x,y) <= {float(bound):.4f}   d(Fx,Fy) ~ {float(est):.4f}")

# %% XOr: (0^{2^k-1}1)^inf reaches 1^inf after 2^k - 1 steps
xor = builtin("xor")
for k in range(1, 5):
    y = periodic("", "0" * (2**k - 1) + "1")
    print(k, iterate(xor, y, 2**k - 1, 32))

# %% zero_keep: 1^inf is stable, (10)^inf drifts
print(analysis.classify_feldman(builtin("zero_keep")))
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
zk = builtin("zero_keep")
write_atomic(out / "zero_keep_ones.ppm", space_time(zk, periodic("", "1"), 8, 128))
write_atomic(out / "zero_keep_alternating.ppm", space_time(zk, periodic("", "10"), 8, 128))
write_atomic(out / "xor_sierpinski.ppm", space_time(xor, periodic("0" * 127 + "1", "0"), 128, 128))
print("diagrams in", out)
