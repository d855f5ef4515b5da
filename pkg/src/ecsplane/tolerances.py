"""Numerical tolerances shared across modules.

All thresholds pass through :func:`tol`, which multiplies by the value of the
``ECS_TOL_SCALE`` environment variable (default 1) and by any scale pushed
with :func:`scaled`.
"""

import contextlib
import os

EXACT = 1e-12  # algebraic identities on double inputs, relative
RANK = 1e-10  # singular value cut for rank decisions, relative
GROUP = 1e-10  # isometry / conjugation identities for S elements
SAMPLE = 1e-8  # profile identities on sample grids, relative
ODE_RTOL = 1e-12
ODE_ATOL = 1e-13

_stack = [1.0]


def scale():
    try:
        env = float(os.environ.get("ECS_TOL_SCALE", "1"))
    except ValueError:
        env = 1.0
    return env * _stack[-1]


def tol(value):
    return value * scale()


@contextlib.contextmanager
def scaled(factor):
    _stack.append(_stack[-1] * float(factor))
    try:
        yield
    finally:
        _stack.pop()
