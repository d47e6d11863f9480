"""Independent generator for the P9 effect-poset fixture.

The nine effects are 2x2 real symmetric matrices with exact rational entries.
X <= Y holds iff Y - X is positive semidefinite, which for a symmetric 2x2
matrix [[p, q], [q, r]] means p >= 0, r >= 0 and p*r - q*q >= 0. The fuzzy
complement is X' = I - X and the intuitionistic complement is the projection
onto the kernel of X (zero for every full-rank effect).
"""
from fractions import Fraction as Fr

def m(p, q, r):
    return (Fr(p), Fr(q), Fr(r))

I = m(1, 0, 1)
Z = m(0, 0, 0)
E = m("1/2", 0, "1/2")
F = m("3/4", 0, "1/4")
G = m("1/2", 0, "1/4")
M = m("7/16", "1/8", "3/16")

def sub(x, y):
    return tuple(a - b for a, b in zip(x, y))

def psd(x):
    p, q, r = x
    return p >= 0 and r >= 0 and p * r - q * q >= 0

def det(x):
    p, q, r = x
    return p * r - q * q

effects = {"0": Z, "1": I, "E": E, "F": F, "F'": sub(I, F), "G": G,
           "G'": sub(I, G), "M": M, "M'": sub(I, M)}
assert sub(I, E) == E
for x in effects.values():
    assert psd(x) and psd(sub(I, x))

names = list(effects)
out = ["# P9: effect poset on R^2 (generated by tools/gen_p9.py)"]
out.append("elements: " + " ".join(names))
out.append("zero: 0")
out.append("one: 1")
for x in names:
    for y in names:
        if x != y and psd(sub(effects[y], effects[x])):
            out.append(f"le: {x} {y}")
comp = {"0": "1", "1": "0", "E": "E", "F": "F'", "F'": "F", "G": "G'",
        "G'": "G", "M": "M'", "M'": "M"}
for x in names:
    assert sub(I, effects[x]) == effects[comp[x]]
    out.append(f"inv: {x} {comp[x]}")
for x in names:
    if x == "0":
        target = "1"
    else:
        assert det(effects[x]) != 0
        target = "0"
    out.append(f"bzinv: {x} {target}")
print("\n".join(out))
