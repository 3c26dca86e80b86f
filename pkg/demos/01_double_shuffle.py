"""Solve the regularized double shuffle system in low weight and compare the
resulting dimension bounds with d_k = d_{k-2} + d_{k-3}."""

from mzv_forge.double_shuffle import DoubleShuffleSolver, dimension_table, expected_dimensions

solver = DoubleShuffleSolver()
for w in (3, 4):
    solver.solve_up_to(w)
    print(f"weight {w}:")
    for line in solver.solution_lines(w):
        print("   ", line)

table = dimension_table(7)
expected = expected_dimensions(7)
print("\nk   bound  d_k")
for k in range(2, 8):
    print(f"{k:<3} {table[k - 1]:<6} {expected[k]}")
