"""Coproduct, antipode and cobracket of iterated-integral symbols."""

from mzv_forge.hopf import (antipode, cobracket, coproduct, format_element, format_tensor, format_wedge,
                            reduced_coproduct)
from mzv_forge.symbols import isym

s = isym("a0", ["a1", "a2", "a3"], "a4")
print("Delta", s)
print(format_tensor(coproduct(s)))

t = isym("0", ["1", "x"], "y")
print("\nDelta'", t)
print(format_tensor(reduced_coproduct(t)))
print("\nS", t, "=", format_element(antipode(t)))
print("\ndelta I(0; x, y; 1):")
print(format_wedge(cobracket(isym("0", ["x", "y"], "1"))))
