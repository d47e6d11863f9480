"""Independent generator for the B30 structure fixture.

Pastes the Boolean blocks of the B30 Greechie diagram with plain Python sets,
checks the lattice and orthomodular laws by brute force, prints the relation
chain used by the orthoarguesian counterexample, and writes the fixture in
the structure file format.
"""
import itertools
import sys

BLOCKS = ["aon", "nci", "ihg", "gfe", "ebs", "sra", "bml", "lkc"]

def paste(blocks):
    elems = {}          # name -> frozenset of (block, subset) representatives
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    def key_names(block, sub):
        rest = [x for x in block if x not in sub]
        names = []
        if not sub:
            names.append("0")
        if not rest:
            names.append("1")
        if len(sub) == 1:
            names.append(sub[0])
        if len(rest) == 1:
            names.append(rest[0] + "'")
        if not names:
            names.append("+".join(sorted(sub)))
        return names

    subsets = []
    for b in blocks:
        for r in range(len(b) + 1):
            for sub in itertools.combinations(b, r):
                ks = key_names(b, sub)
                for k in ks:
                    parent.setdefault(k, k)
                for k in ks[1:]:
                    union(ks[0], k)
                subsets.append((b, sub, ks[0]))
    classes = {}
    for b, sub, k in subsets:
        classes.setdefault(find(k), []).append((b, sub))

    def pick(root):
        names = set()
        for b, sub in classes[root]:
            names.update(key_names(b, sub))
        for pref in ("0", "1"):
            if pref in names:
                return pref
        atoms = sorted(n for n in names if len(n) == 1)
        if atoms:
            return atoms[0]
        primes = sorted(n for n in names if n.endswith("'"))
        if primes:
            return primes[0]
        return sorted(names)[0]

    name = {root: pick(root) for root in classes}
    le = set()
    inv = {}
    for b in blocks:
        subs = [s for r in range(len(b) + 1) for s in itertools.combinations(b, r)]
        for s in subs:
            ks = name[find(key_names(b, s)[0])]
            comp = tuple(x for x in b if x not in s)
            inv[ks] = name[find(key_names(b, comp)[0])]
            for t in subs:
                if set(s) <= set(t):
                    le.add((ks, name[find(key_names(b, t)[0])]))
    els = sorted(set(name.values()))
    changed = True
    while changed:
        changed = False
        for (x, y) in list(le):
            for (y2, z) in list(le):
                if y == y2 and (x, z) not in le:
                    le.add((x, z))
                    changed = True
    return els, le, inv

def main():
    els, le, inv = paste(BLOCKS)
    leq = lambda x, y: (x, y) in le or x == y
    lbs = lambda x, y: [z for z in els if leq(z, x) and leq(z, y)]
    ubs = lambda x, y: [z for z in els if leq(x, z) and leq(y, z)]
    def meet(x, y):
        c = [z for z in lbs(x, y) if all(leq(w, z) for w in lbs(x, y))]
        assert len(c) == 1, (x, y)
        return c[0]
    def join(x, y):
        c = [z for z in ubs(x, y) if all(leq(z, w) for w in ubs(x, y))]
        assert len(c) == 1, (x, y)
        return c[0]
    for x in els:
        assert inv[inv[x]] == x
        assert meet(x, inv[x]) == "0"
    for x, y in itertools.product(els, els):
        assert leq(meet(x, join(inv[x], meet(x, y))), y)
    sas = lambda x, y: meet(join(x, inv[y]), y)
    ab, ac = sas("a", inv["b"]), sas("a", inv["c"])
    bc = join("b", "c")
    ei = join(ab, ac)
    inner = meet(bc, ei)
    rhs = join("b", meet(ab, join(ac, inner)))
    print("elements", len(els), file=sys.stderr)
    print("a^b' =", ab, " a^c' =", ac, " b|c =", bc, " e|i =", ei,
          " l'&(e|i) =", inner, " rhs =", rhs, " a<=rhs:", leq("a", rhs), file=sys.stderr)
    out = ["# B30: pasted from the 8-block Greechie loop (generated by tools/gen_b30.py)"]
    out.append("elements: " + " ".join(els))
    out.append("zero: 0")
    out.append("one: 1")
    for (x, y) in sorted(le):
        if x != y:
            out.append(f"le: {x} {y}")
    for x in els:
        out.append(f"inv: {x} {inv[x]}")
    print("\n".join(out))

main()
