# Splitting a rank 2 Weil representation under O_2 x SL_2.
#
# For a quadratic plane V, functions on V carry commuting actions of the
# orthogonal group O(V) and of SL_2.  Each irreducible tau of O(V) picks out
# an SL_2 representation Theta(tau).  Comparing the plus and minus planes:
#   - the minus plane gives Theta(1) = Steinberg, Theta(sgn) = 0,
#     and principal-looking pieces of dimension q - 1;
#   - the plus plane gives Theta(1) = 1 + Steinberg, Theta(sgn) = 1,
#     and pieces of dimension q + 1.

import numpy as np

from tensorrank import AdditiveCharacter, QuadraticSpace, enumerate_classes, eta_decompose, steinberg_char

q = 7
psi = AdditiveCharacter(q)
st = np.array([steinberg_char(c.rep) for c in enumerate_classes(q)])

for tag in ("2-", "2+"):
    rep = eta_decompose(QuadraticSpace(tag, q), psi)
    print(f"plane {tag}: reconstruction residual {rep.residual:.1e}")
    for th in rep.thetas:
        flag = "irreducible" if th.irreducible else ("zero" if not th.appears else f"norm {th.norm:.0f}")
        print(f"   tau={th.tau:8s} dim tau {th.tau_dim}  dim Theta {th.dim:3d}  {flag}")
    theta1 = rep.theta("1").character
    print("   Theta(1) - St:", np.round(np.max(np.abs(theta1 - st)), 10),
          " Theta(1) - 1 - St:", np.round(np.max(np.abs(theta1 - 1 - st)), 10))
    print()
