"""The rational lattice map degenerates to the box-ball carrier rule.

Substituting x = exp(-X/eps) and letting eps -> 0 turns products into sums
and sums into min/max: the field equation becomes the piecewise-linear
update that the automaton implements in integers.  This script measures how
fast the rational map approaches its tropical limit on a field taken from an
actual automaton run.
"""

import math

from solitonlab import (
    BBSCState,
    SystemParams,
    bbsc_step,
    bbsc_sweep,
    field_from_state,
    param_correspondence,
    tropical_step,
    ud_limit_check,
)
from fractions import Fraction

state = BBSCState((3, 0, 0, 0, 1, 0), c_box=3, c_carrier=1)
for _ in range(3):
    state = bbsc_step(state)
nxt, loads = bbsc_sweep(state)
field = field_from_state(state, loads)
print("occupancies:", state.u)
print("tropical X':", [f"{v:+.0f}" for v in tropical_step(field)])
print("automaton u':", nxt.u[: len(state.u)], "(same data, shifted by A)\n")

print(" eps      max |rational - tropical|")
for eps, gap in ud_limit_check(field, [1.0, 0.1, 0.01, 0.001]):
    print(f" {eps:<8g} {gap:.6e}")
print(f" (the residue per unit eps approaches log 2 = {math.log(2):.4f}"
      " at min/max ties)\n")

for a, b in [(Fraction(5, 6), Fraction(14, 15)),
             (Fraction(14, 15), Fraction(5, 6)),
             (Fraction(5, 6), Fraction(5, 6))]:
    regime = param_correspondence(SystemParams(a, b))
    print(f"alpha={a}, beta={b}: capacity regime {regime}")
print("(box capacity above/below carrier capacity mirrors beta vs alpha)")
