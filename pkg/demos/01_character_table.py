# Character table of SL_2(F_q), built from oscillator pieces.
#
# Every irreducible character shows up inside a Weil representation attached
# to a small quadratic space.  Rank 0 is the trivial character, rank 1 comes
# from the one-variable oscillator pair, and rank 2 comes from the two planes
# of discriminant + and -.

import numpy as np

from tensorrank import assemble_chartable

q = 7
T = assemble_chartable(q)

print("classes:", [str(c.label) for c in T.classes])
print("sizes:  ", T.sizes.astype(int))
print()

for r in T.records:
    row = " ".join(f"{v.real:6.2f}" if abs(v.imag) < 1e-9 else f"{v.real:+.2f}{v.imag:+.2f}i" for v in r.values)
    print(f"{r.id:14s} rank {r.rank} dim {r.dim:3d} | {row}")

# sanity: the rows form an orthonormal basis of class functions
print()
print("rows:", len(T.records), "= q + 4")
print("sum of dim^2:", int(np.sum(T.dims**2)), "= |G| =", q * (q * q - 1))
print("max |gram - I|:", np.max(np.abs(T.gram() - np.eye(q + 4))))

# per rank
for k in (0, 1, 2):
    print(f"rank {k}:", [r.id for r in T.by_rank(k)])
