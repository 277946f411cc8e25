# The oscillator representation on functions on F_q.
#
# omega(g) is a q x q unitary matrix for every g in SL_2(F_q).  It splits
# into even and odd functions, of dimensions (q+1)/2 and (q-1)/2.

import numpy as np

from tensorrank import AdditiveCharacter, GroupElement, OscillatorRep, char_omega_closed, enumerate_classes
from tensorrank.oscillator import homomorphism_residual, intertwining_number, split_components

q = 5
psi = AdditiveCharacter(q)
rep = OscillatorRep(psi)

g = GroupElement(2, 1, 1, 1, q)
W = rep(g)
print("omega(g) shape:", W.shape)
print("unitary residual:", np.max(np.abs(W @ W.conj().T - np.eye(q))))
print("homomorphism residual (all pairs):", homomorphism_residual(rep))

# trace on each class vs the closed form
for c in enumerate_classes(q)[1:]:  # the closed form excludes the identity
    t = rep.character(c.rep)
    f = char_omega_closed(c.rep, 1, psi)
    print(f"{str(c.label):16s} trace {t.real:+.4f}{t.imag:+.4f}i  closed {f.real:+.4f}{f.imag:+.4f}i")

parts = split_components(rep)
print("even/odd dims:", parts.dim_even, parts.dim_odd)
print("(chi, chi) =", round(intertwining_number(rep), 10), "-> exactly two irreducible pieces")
