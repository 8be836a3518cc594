# %% [markdown]
# Dill maps slide a window of width s along an infinite word and concatenate
# the images. Substitutions have s = 1; cellular automata have images of length 1.

# %%
from dillscope.catalog import builtin
from dillscope.dillmap import (apply, check_cocycle_identity, cocycle, compose_subst_ca,
                               iterate, parse_rule)
from dillscope.words import SubstitutionOrbit, periodic

fib, xor, mn, dbl = (builtin(n) for n in ("fibonacci", "xor", "min", "doubling"))
print(fib.table_text())
x = periodic("1", "0")
print("F(1 0^inf)       =", apply(fib, x, 12))
print("F as periodic    =", fib(periodic("", "0")))
print("Thue-Morse fixed =", SubstitutionOrbit(builtin("thue_morse"), 0).prefix(32))

# %% composing a substitution after a cellular automaton
md = compose_subst_ca(dbl, mn)
print(md.table_text())

# %% the cocycle tells where the image of a shifted word starts
x = periodic("1101", "001")
for n in range(5):
    print(n, cocycle(fib, x, n), check_cocycle_identity(fib, x, n, 64))

# %% iterating: XOr turns (0^7 1)^inf into 1^inf in 7 steps
y = periodic("", "00000001")
for t in range(8):
    print(t, iterate(xor, y, t, 32))

# %% rules can also come from text
swap = parse_rule("alphabet=ab\ndiameter=1\na -> b\nb -> aa\n", name="swap")
print(swap, apply(swap, periodic("", "ab", swap.alphabet), 10))
