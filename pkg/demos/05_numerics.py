"""Multiprecision evaluation with error radii: nested sums, the ordered
exponential along a path, and the five-term relation for D(z)."""

import mpmath

from mzv_forge.numerics import (PLPath, bloch_wigner, five_term_check, group_like_residual, li_eval, ordered_exp,
                                zeta_via_ordered_exp)

print("zeta(2)      li_eval     :", li_eval([2]))
print("zeta(2)      ordered_exp :", zeta_via_ordered_exp([2]))
print("zeta(1,2)    li_eval     :", li_eval([1, 2]))
print("Li_{1,1}(-1,-1)          :", li_eval([1, 1], [-1, -1]))
print("Li_{2,1}(1/2, w)         :", li_eval([2, 1], [0.5, mpmath.expjpi(mpmath.mpf(2) / 3)]))

s = ordered_exp(PLPath.tangential([0, 1], [0, 1]), 4)
worst, bound = group_like_residual(s)
print("\ngroup-likeness residual at w_max = 4:", mpmath.nstr(worst, 3))

z = 0.3 + 0.8j
print("D(z) =", mpmath.nstr(bloch_wigner(z), 20))
print("five-term sum:", five_term_check(0.3 + 0.4j, -0.2 + 0.5j)["sum"])
