# %% [markdown]
# In the Besicovitch pseudo-metric, two words are close when they differ on a
# small density of positions. Non-uniform dill maps need not respect this.

# %%
from fractions import Fraction

import numpy as np

from dillscope import analysis, metrics
from dillscope.catalog import builtin
from dillscope.dillmap import iterate
from dillscope.reproduce import random_periodic
from dillscope.words import periodic

fib = builtin("fibonacci")
w = analysis.besicovitch_witness(fib)
print("inputs", w.x, w.y, "distance", metrics.besicovitch_exact_periodic(w.x, w.y))
print("images", fib(w.x), fib(w.y), "distance", w.image_distance)
c = metrics.curve(metrics.HAMMING, fib(w.x), fib(w.y), metrics.geometric_lengths(10, 20))
print("curve estimate at 2^20:", float(c.estimate.value))

# %% Thue-Morse is an isometry, Cantor contracts by 2/3
tm, cantor = builtin("thue_morse"), builtin("cantor")
rng = np.random.default_rng(0)
for _ in range(5):
    x, y = random_periodic(rng), random_periodic(rng)
    d = metrics.besicovitch_exact_periodic(x, y)
    print(d, metrics.besicovitch_exact_periodic(tm(x), tm(y)),
          metrics.besicovitch_exact_periodic(cantor(x), cantor(y)), Fraction(2, 3) * d)

# %% the Min CA wipes out (1^{p-1}0)^inf, at distance 1/p from 1^inf
mn = builtin("min")
for p in (2, 4, 8):
    y = periodic("", "1" * (p - 1) + "0")
    print(p, metrics.besicovitch_exact_periodic(periodic("", "1"), y), iterate(mn, y, p - 1, 24))

# %% the composed rule keeps ones-blocks of length 2 alive instead
md = builtin("min_doubling")
for t in range(4):
    print(t, iterate(md, periodic("", "110"), t, 48))
