"""Residues of the multiple zeta function and its values at non-positive integers."""

from mzv_forge.mzf_continuation import (Hyperplane, directional_discrepancy_check, format_discrepancy,
                                        limit_last_to_zero, multiple_residue_at_ones, residue, value_at_nonpositive)

for k in range(5):
    print(f"Res zeta(s1,s2) on s1+s2 = {2 - k}:", residue(2, Hyperplane(1, k)).expanded())
print("depth 3, l = 2, k = 2:", residue(3, Hyperplane(2, 2)).expanded())
print("multiple residue at (1,..,1):", [str(multiple_residue_at_ones(m)) for m in (1, 2, 3, 4)])

print("\nlim_{s1->0} zeta(s1, 0) =", value_at_nonpositive(1, [0, 0]))
print("lim_{s2->0} zeta(0, s2) =", limit_last_to_zero(0))
print("zeta(0,0,0) =", value_at_nonpositive(1, [0, 0, 0]))
print()
print(format_discrepancy(directional_discrepancy_check()))
