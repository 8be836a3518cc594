# %% [markdown]
# Hamming and half-weighted Levenshtein distances on finite words,
# and normalized distance curves on infinite ones.

# %%
from dillscope.editdist import hamming, lcs_length, levenshtein, levenshtein_oracle
from dillscope.metrics import HAMMING, LEVENSHTEIN, curve, geometric_lengths
from dillscope.words import Word, periodic

u, v = Word("010101"), Word("101010")
print("hamming    ", hamming(u, v))      # every position differs
print("levenshtein", levenshtein(u, v))  # drop the first letter of u and the last of v
print("lcs        ", lcs_length(u, v))
print("0000 vs 00001:", levenshtein("0000", "00001"))

# %% the fast kernel agrees with exhaustive deletion search
print(levenshtein("0110100", "1001011"), levenshtein_oracle("0110100", "1001011"))

# %% [markdown]
# A shift costs one deletion on each side, whatever the prefix length,
# while Hamming sees every position differ.

# %%
x, y = periodic("", "01"), periodic("", "10")
lengths = geometric_lengths(2, 12)
for kind in (HAMMING, LEVENSHTEIN):
    c = curve(kind, x, y, lengths)
    print(kind, [f"{float(d):.4f}" for d in c.normalized], "estimate", float(c.estimate.value))

# %%
print(curve(LEVENSHTEIN, x, y, [4, 8, 16]).to_csv())
