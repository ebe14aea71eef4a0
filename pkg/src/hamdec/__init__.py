"""Hamilton decompositions of equal-side directed tori.

The package constructs, for every dimension d >= 2 and odd modulus m >= 3
(every m >= 2 when d = 2), an explicit partition of the arc set of the
directed torus D_d(m) into d directed Hamilton cycles, and re-verifies each
construction by enumeration independent of the theory that produced it.
"""

from .core import Params
from .rootflat import Decomposition, Schedule, verify_rf
from .synthesis import plan, synthesize
from .verify import verify_arc_partition, verify_decomposition, verify_hamilton

__version__ = "0.1.0"

__all__ = [
    "Params",
    "Schedule",
    "Decomposition",
    "plan",
    "synthesize",
    "verify_rf",
    "verify_arc_partition",
    "verify_hamilton",
    "verify_decomposition",
    "__version__",
]
