"""The seven su_q(1,1) realizations: relations, universality, q -> 1.

Run: python demos/02_realizations.py
"""

import itertools
from fractions import Fraction

import numpy as np

from qdeform.algebra import SU11_REALIZATIONS, RealizationSpec, build, classical_limit_scan, verify_algebra

q, k0, n_max = 0.5, Fraction(3, 2), 30

print(f"q = {q}, k0 = {k0}, n_max = {n_max}: worst scaled residual per realization")
for name in SU11_REALIZATIONS:
    rep = verify_algebra(build(RealizationSpec.from_name(name, q, k0=k0), n_max))
    worst = max(rep.residuals, key=rep.residuals.get)
    print(f"  {name:9s} {rep.residuals[worst]:.2e} ({worst})  pass={rep.passed}")

# Raw matrices differ wildly (Dyson forms are not symmetric), but on unit
# kets every realization gives the same generators.
unit = {n: build(RealizationSpec.from_name(n, q, k0=k0), n_max).to_unit().matrices() for n in SU11_REALIZATIONS}
worst = max(
    np.abs(a - b).max() / max(1, np.abs(a).max())
    for x, y in itertools.combinations(unit.values(), 2)
    for a, b in zip(x, y)
)
print(f"\nunit-basis spread across realizations: {worst:.1e}")
print("Q_- superdiagonal (unit basis):", np.round(np.diag(unit["D-B"][2], 1)[:5].real, 6))

# Approach to the classical algebra. Raw Dyson/Macfarlane and asymmetric
# Fock-Bargmann matrices converge only linearly in q - 1.
grid = (0.99, 1.01, 0.999, 1.001, 0.9999, 1.0001)
print("\nfitted order in |q-1|   unit   raw")
for name in SU11_REALIZATIONS:
    u = classical_limit_scan(name, grid, k0=k0).order
    r = classical_limit_scan(name, grid, k0=k0, basis="raw").order
    print(f"  {name:9s}            {u:5.2f}  {r:5.2f}")
