"""q-numbers, exact and floating, and the q-gamma integral.

Run: python demos/01_q_numbers.py
"""

import math

import numpy as np

from qdeform.qcalc import SYMMETRIC, JacksonRule, jackson_integral
from qdeform.qcore import (
    q_brace,
    q_brace_poly,
    q_bracket,
    q_bracket_poly,
    q_exp_e_neg_lattice,
    q_factorial,
    recessive_anchor,
)

q = 0.9

# Symmetric brackets are palindromic Laurent polynomials; braces are not.
for n in range(1, 5):
    print(f"[{n}] = {str(q_bracket_poly(n)):<28} {{{n}}} = {q_brace_poly(n)}")

# Floats agree with the exact forms. As q -> 1, [x] -> x quadratically and {x} -> x linearly.
print("\n[4]_0.9 =", q_bracket(4, q), " exact:", float(q_bracket_poly(4)(q)))
for eps in (1e-2, 1e-3, 1e-4):
    print(f"q = 1+{eps:g}:  [4]-4 = {q_bracket(4, 1 + eps) - 4:.3e}   {{4}}-4 = {q_brace(4, 1 + eps) - 4:.3e}")

# e_q^{-x} only decays along the lattice c q^-k, c = 1/(1/q - q); on that
# lattice the Jackson integral of x^n e_q^{-x} is [n]!.
c = recessive_anchor(q)
print(f"\nlattice anchor c = {c:.6f}")
rule = JacksonRule(SYMMETRIC, q, upper=math.inf, anchor=c)
for n in range(0, 11, 2):
    val = jackson_integral(lambda x: x**n * q_exp_e_neg_lattice(x, q), rule)
    print(f"n={n:2d}  integral = {val:.12g}   [n]! = {q_factorial(n, q):.12g}")

# Along the lattice the weight decays geometrically.
xs = c * q ** -np.arange(10.0, 14.0)
print("\non lattice:", q_exp_e_neg_lattice(xs, q))
