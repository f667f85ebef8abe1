"""How speed and size depend on the wavenumber, in all three regimes.

The closed forms make the pattern visible: amplitude always dips to zero at
the interval midpoint; speed crosses 1 there, from below when beta > alpha
and from above when alpha > beta, and is identically 1 when they coincide.
The scan() report certifies the monotone branches on a fine grid.
"""

import json
from fractions import Fraction

from solitonlab import SystemParams, amplitude, scan_monotonicity, velocity

REGIMES = [
    ("beta > alpha (subluminal)", SystemParams(Fraction(5, 6), Fraction(14, 15))),
    ("alpha > beta (superluminal)", SystemParams(Fraction(14, 15), Fraction(5, 6))),
    ("alpha = beta (frozen)", SystemParams(Fraction(5, 6), Fraction(5, 6))),
]

for label, params in REGIMES:
    span = params.alpha + params.beta - 1
    print(f"{label}:  p in (0, {span})")
    print("   p/span    velocity   amplitude")
    for k in range(1, 10):
        p = span * k / 10
        print(f"   {k/10:.1f}      {velocity(params, p):8.4f}   "
              f"{amplitude(params, p):8.4f}")
    report = scan_monotonicity(params, 101)
    print("  scan:", json.dumps(report), "\n")
