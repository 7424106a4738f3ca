"""Exact-arithmetic certificates for orbit dynamics of a weighted bilateral shift.

All verdict-carrying arithmetic is over Gaussian rationals (complex numbers
with rational real and imaginary parts); no floats appear in any certificate
path.
"""

from orbitcert.exact import ComplexRational, Rational
from orbitcert.errors import (
    OrbitcertError,
    EvaluationDomainError,
    PreconditionError,
    UnsatisfiableGoalError,
    InsufficientDepthError,
    NotEigenChainError,
    ConstraintKindError,
)

__version__ = "0.1.0"
