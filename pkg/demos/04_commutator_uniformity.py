# How evenly does the commutator map [x, y] = x y x^-1 y^-1 hit SL_2(F_q)?
#
# N(g) = #{(x, y) : [x, y] = g} / |G|, normalised per element.  Frobenius
# gives N(g) = sum over irreps of chi(g) / chi(1), so the deviation from 1 is
# controlled by small-dimensional characters.  Compare with a brute-force
# count for small q and watch q * max|N - 1| stay bounded.

import numpy as np

from tensorrank import assemble_chartable, brute_fibers, commutator_report, frobenius_N
from tensorrank.harmonic import uniformity_report

q = 5
T = assemble_chartable(q)
print("Frobenius:", np.round(frobenius_N(T), 6))
print("brute:    ", np.round(brute_fibers(q), 6))
print()

rep = commutator_report(13)
for row in rep.rows()[:6]:
    print(row[:5])
print("partition residual:", rep.partition_residual())
print("bounds hold (S1, S2):", rep.bounds_hold())
print()

primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53]
for r in uniformity_report(primes):
    print(f"q={r.q:3d}  max|N-1| = {r.max_dev:.5f}   q*max = {r.constant:.3f}")
