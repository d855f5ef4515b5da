"""Compact quotients of standard ECS plane waves, with machine-checked certificates.

The modules build on one another:

- :mod:`pseudo` and :mod:`profiles`: inner products of any signature, the operator A, the profile f
- :mod:`planewave` and :mod:`curvature`: the metric, closed-form curvature and a finite-difference oracle
- :mod:`symplectic`: the solution space (E, Omega), the sigma-action, first-order subspaces
- :mod:`isometry`: S, H, S ⋉ H acting on points, Killing fields
- :mod:`quotient`: G(sigma), lattices and certificate verification
- :mod:`construct` (with :mod:`zspectral`, :mod:`floquet`): the two build pipelines
- :mod:`serialize`, :mod:`audit`, :mod:`cli`: JSON documents and the command line
"""

from .construct import build_dilational, build_translational, search_integer_theta, theta_from_charpoly
from .errors import EcsError
from .isometry import Isometry, KillingTriple, SigmaElement, apply_isometry, compose, invert, validate_sigma
from .planewave import PlaneWaveSpec, Point, closed_form_curvature, metric_at
from .profiles import FourierProfile, FourierSeries, Interval, InverseSquare, LogPeriodic
from .pseudo import PseudoSpace, check_operator, is_generic, signature_of
from .quotient import QuotientCertificate, classify_quotient, verify_certificate
from .symplectic import SolutionVector, Subspace, flow, omega, sigma_matrix_on_E
from .zspectral import search_zspectral

__version__ = "0.1.0"

__all__ = [
    "EcsError",
    "FourierProfile",
    "FourierSeries",
    "Interval",
    "InverseSquare",
    "Isometry",
    "KillingTriple",
    "LogPeriodic",
    "PlaneWaveSpec",
    "Point",
    "PseudoSpace",
    "QuotientCertificate",
    "SigmaElement",
    "SolutionVector",
    "Subspace",
    "apply_isometry",
    "build_dilational",
    "build_translational",
    "check_operator",
    "classify_quotient",
    "closed_form_curvature",
    "compose",
    "flow",
    "invert",
    "is_generic",
    "metric_at",
    "omega",
    "search_integer_theta",
    "search_zspectral",
    "sigma_matrix_on_E",
    "signature_of",
    "theta_from_charpoly",
    "validate_sigma",
    "verify_certificate",
]
