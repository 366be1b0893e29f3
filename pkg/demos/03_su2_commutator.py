"""Which bracket closes the su_q(2) commutator.

The Dyson and Holstein-Primakoff su_q(2) generators satisfy
[Q+, Q-] = [2 Q3]_q exactly. Written with base q^2 the relation holds only
for spin 1/2, where 2 Q3 = +-1 and every base agrees.

Run: python demos/03_su2_commutator.py
"""

from qdeform.algebra import RealizationSpec, build, su2_commutator_exact, verify_algebra

q = 0.9
print(" J   base q      base q^2")
for J in range(1, 9):
    rep = verify_algebra(build(RealizationSpec.from_name("su2-D", q, J=J)))
    print(f"{J:2d}   {rep.diagnostics['commutator_base_q']:.1e}     {rep.diagnostics['commutator_base_q2']:.1e}")

print("\nexact check on |n), J = 4:")
for n in range(5):
    lhs, rhs_q = su2_commutator_exact(4, n, base_power=1)
    _, rhs_q2 = su2_commutator_exact(4, n, base_power=2)
    print(f"  n={n}: lhs = {lhs}   base q: {lhs == rhs_q}   base q^2: {lhs == rhs_q2}")
