# %% [markdown]
# Occurrence matrices, irreducible components and the classifier report
# for every built-in rule.

# %%
from dillscope import analysis
from dillscope.catalog import BUILTIN_NAMES, builtin

fib = builtin("fibonacci")
M = analysis.occurrence_matrix(fib)
print(M)
print(analysis.matrix_power(M, 10))
print("rho", analysis.spectral_radius(M))
print("|fib^t(0)|", [analysis.growth(fib, 0, t) for t in range(10)])

# %% components: zero_keep has a slow letter 0 and a fast letter 1
dec = analysis.components(builtin("zero_keep"))
for c in dec.components:
    print(c.letters, f"rho={c.rho.value:.3f}", "terminal" if c.terminal else "", "maximum" if c.maximum else "")
print("maxal", sorted(dec.maxal))

# %%
for name in BUILTIN_NAMES:
    r = analysis.classify(builtin(name))
    bes, fel = r["besicovitch"], r["feldman"]
    print(f"{name:13} {bes['status']:19} {bes['regime']:15} feldman L={fel['lipschitz']} "
          f"equicontinuous={fel['equicontinuous']}")

# %%
print(analysis.report_json(analysis.classify(builtin("cantor"))))
