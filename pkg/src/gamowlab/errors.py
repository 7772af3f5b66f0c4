"""Exception taxonomy shared by every gamowlab module.

Numerical failures are never silent: each distinct misuse or breakdown has
its own exception type so callers (and the CLI report) can name the violated
invariant instead of guessing from a generic message.
"""


class GamowLabError(Exception):
    """Base class for all gamowlab errors."""


class ValidationError(GamowLabError):
    """A domain object or configuration violates a stated invariant."""


class ParseError(GamowLabError):
    """Malformed input file (JSON syntax, wrong field types)."""


class PoleHit(GamowLabError):
    """Evaluation point collides with a pole of the function or model."""


class BranchPointHit(GamowLabError):
    """Evaluation point collides with a branch point of the energy surface."""


class PoleOnPath(GamowLabError):
    """An integration path passes through (or hugs) a pole."""


class NonConvergence(GamowLabError):
    """Adaptive quadrature exhausted its subdivision budget above tolerance."""


class InconsistentResidue(GamowLabError):
    """Residue estimates at two circle radii disagree; the pole is not simple
    or another singularity sits inside the loop."""


class WrongHalfPlane(GamowLabError):
    """A continuation point lies in the half-plane where the requested
    boundary-value formula does not hold."""


class ClassMismatch(GamowLabError):
    """A test function's declared Hardy class does not match what the
    operation requires."""


class DecayTooSlow(GamowLabError):
    """The test function decays too slowly at large |E| for the requested
    operation (e.g. multiplying by E would leave a non-integrable part)."""


class TimeDirectionViolation(GamowLabError):
    """A semigroup evolution was requested outside its valid time direction."""


class ZeroCoupling(GamowLabError):
    """A decay scenario has no coupling strength to normalize or evaluate."""
