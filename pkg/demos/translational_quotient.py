"""Build a translational quotient from the integer cubic x^3 - 6x^2 + 5x - 1.

Run with ``python3 demos/translational_quotient.py``.
"""

import numpy as np

from ecsplane.construct import build_translational, theta_from_charpoly, want_b_residuals
from ecsplane.quotient import classify_quotient

theta = theta_from_charpoly((-1, 5, -6, 1))
print("Theta =\n", theta.T)
print("eigenvalues:", theta.eigenvalues)

cert = build_translational(5, theta, seed_amp=0.3, period=1.0, theta=1.0)
spec = cert.spec
B = cert.extras["riccati"]

# the period monodromy of the Riccati solution realizes the spectrum of Theta
print("exp(-int B):", np.sort(np.exp(-B.integral_over_period())))

# f must not be constant and A must be nonzero and traceless
trace_range, drift, size = want_b_residuals(spec, B)
print(f"trace range of B over a period {trace_range:.3f}, drift of A {drift:.1e}, |A| {size:.3f}")
ts = np.linspace(0.0, 1.0, 5)
print("f on one period:", np.round(spec.profile.f(ts), 4))

print("integral matrix:\n", np.array(cert.extras["integral_matrix"]))
for check in cert.checks.checks:
    print(f"  {'PASS' if check.passed else 'FAIL'}  {check.name:22s} {check.residual:.2e}")
print("classification:", classify_quotient(cert).to_json())
