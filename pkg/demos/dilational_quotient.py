"""Build the five-dimensional dilational quotient and look at what makes it compact.

Run with ``python3 demos/dilational_quotient.py``.
"""

import numpy as np
import sympy

from ecsplane.construct import build_dilational
from ecsplane.planewave import closed_form_curvature, random_point
from ecsplane.quotient import classify_quotient
from ecsplane.symplectic import sigma_matrix_on_E

cert = build_dilational(5, 3)
spec = cert.spec
q = cert.gamma.sigma.q
print("q =", q, " q + 1/q =", q + 1 / q)
print("A =\n", spec.A.matrix)

# the Z-spectral system fixes the exponents of the sigma spectrum on E
zs = cert.extras["zspectral"]
print("E =", zs["E"], " J =", zs["J"])
ev = np.sort(np.linalg.eigvals(sigma_matrix_on_E(spec, cert.gamma.sigma)).real)
print("sigma on E:", ev)
print("q^E       :", np.sort(q ** np.array(zs["E"], dtype=float)))

# conjugation by gamma preserves the lattice, with an integer matrix in its basis
K = np.array(cert.extras["integral_matrix"])
print("integral matrix:\n", K)
x = sympy.Symbol("x")
print("charpoly:", sympy.factor(sympy.Matrix(K.tolist()).charpoly(x).as_expr()))

for check in cert.checks.checks:
    print(f"  {'PASS' if check.passed else 'FAIL'}  {check.name:22s} {check.residual:.2e}")

rep = closed_form_curvature(spec, random_point(spec, np.random.default_rng(0)))
print("Olszak rank:", rep.olszak_rank)
print("classification:", classify_quotient(cert).to_json())
