"""Coherent states, their measures and the diagonal-moment test.

Run: python demos/04_resolution_of_unity.py
"""

from fractions import Fraction

import numpy as np

from qdeform.coherent import (
    adjudicate_glauber,
    adjudicate_k0_one,
    glauber_e,
    glauber_EE,
    gram_accumulation,
    perelomov11,
    perelomov2,
    resolve_unity,
)

for fam in (perelomov11(Fraction(3, 2), 0.5), perelomov11(2, 0.9), glauber_e(0.9), perelomov2(4, 0.9)):
    rep = resolve_unity(fam)
    print(f"{fam.label:12s} {rep.measure['measure']}  max|M_n-1| = {rep.max_deviation:.1e}  moments[:4] = {np.round(rep.moments[:4], 12)}")

# A brute-force check without the angular shortcut: sum W |z><z| over
# radial nodes and equally spaced angles.
G = gram_accumulation(perelomov11(Fraction(3, 2), 0.7), 6)
print(f"\nGram accumulation, Perelomov11 k0=3/2: |G - I| = {np.abs(G - np.eye(7)).max():.1e}")

# Coefficient conventions and the k0 = 1 disk weight, decided by the integral.
print()
for a in (adjudicate_glauber("E", 0.9), adjudicate_glauber("EE", 0.9), adjudicate_k0_one(0.9)):
    print(a.summary_line())

# The E_q Glauber family with the E_q^{-x} weight: moments grow like q^-n(n+1).
rep = resolve_unity(glauber_EE(0.5, convention="operator"), 5)
print("\nGlauberEE, q=0.5, operator convention:", [f"{m:.6g}" for m in rep.moments])
