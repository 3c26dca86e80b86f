"""Exact and numerical toolkit for multiple zeta values and multiple polylogarithms.

Submodules:

- ``exact_algebra``: rationals, sparse polynomials, rational functions, Bernoulli numbers.
- ``words_and_products``: words, compositions, shuffle and stuffle products.
- ``symbols``: formal iterated-integral symbols I(a0; a1..am; a_end).
- ``hopf``: Goncharov coproduct, antipode, cobracket, symbol maps.
- ``regularization``: shuffle and stuffle regularization and their comparison.
- ``double_shuffle``: relation generation and exact reduction.
- ``mzf_continuation``: residues and non-positive values of the multiple zeta function.
- ``numerics``: multiprecision evaluation with error radii.
- ``cli``: the ``mzv-forge`` command line.
"""

from .arguments import Arg, parse_arg
from .double_shuffle import DoubleShuffleSolver, dimension_table, generate_relations, reduce
from .exact_algebra import LinComb, MultiPoly, RatFunc, bernoulli, zeta_nonpositive
from .hopf import antipode, cobracket, coproduct, reduced_coproduct
from .mzf_continuation import directional_discrepancy_check, multiple_residue_at_ones, residue, value_at_nonpositive
from .numerics import BigComplex, PLPath, li_eval, ordered_exp
from .regularization import shuffle_regularize, stuffle_regularize
from .symbols import ISymbol, isym
from .words_and_products import Composition, Word, shuffle, stuffle, zeta_composition

__version__ = "0.1.0"

__all__ = [
    "Arg", "parse_arg", "DoubleShuffleSolver", "dimension_table", "generate_relations", "reduce",
    "LinComb", "MultiPoly", "RatFunc", "bernoulli", "zeta_nonpositive",
    "antipode", "cobracket", "coproduct", "reduced_coproduct",
    "directional_discrepancy_check", "multiple_residue_at_ones", "residue", "value_at_nonpositive",
    "BigComplex", "PLPath", "li_eval", "ordered_exp",
    "shuffle_regularize", "stuffle_regularize", "ISymbol", "isym",
    "Composition", "Word", "shuffle", "stuffle", "zeta_composition", "__version__",
]
