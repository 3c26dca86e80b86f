"""Shuffle versus stuffle regularization of divergent zeta values."""

from mzv_forge.regularization import (compare_regularizations, shuffle_asymptotic, stuffle_asymptotic,
                                      stuffle_regularize)
from mzv_forge.words_and_products import zeta_composition

for ns in [(1, 1), (2, 1), (1, 1, 1), (2, 1, 1)]:
    c = zeta_composition(*ns)
    print(c)
    print("  shuffle:", shuffle_asymptotic(c))
    print("  stuffle:", stuffle_asymptotic(c))
    print("  stuffle - shuffle:", compare_regularizations(c) or 0)
