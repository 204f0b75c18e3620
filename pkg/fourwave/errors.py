"""Exception hierarchy for the four-wave mixing toolkit."""


class FourWaveError(Exception):
    """Base class of every domain error raised by the package"""
    exit_code = 1


class InvalidLabel(FourWaveError):
    """Sector label outside the cone of admissible charges"""


class IndexOutOfRange(FourWaveError):
    """Polynomial, eigenvalue or basis index outside 0..N"""


class NumericalInstability(FourWaveError):
    """Double precision no longer resolves the requested quantity"""


class NotResonant(FourWaveError):
    """Closed form requested away from the frequency resonance"""


class ShapeMismatch(FourWaveError):
    """Operator does not live on the requested sector"""


class TruncationTooLarge(FourWaveError):
    """Truncated Fock space above the supported size"""


class NoConvergence(FourWaveError):
    """Eigensolver did not converge"""


class OnBoundary(FourWaveError):
    """Mode amplitude vanishes, angles are undefined"""


class OutOfInterval(FourWaveError):
    """I0 is not strictly inside the admissible interval"""


class ZeroCoupling(FourWaveError):
    """Closed form divides by the coupling constant"""


class UnsupportedRegime(FourWaveError):
    """Sign pattern of (p, Delta) without a closed form"""


class SingularPoint(FourWaveError):
    """Trajectory touches a zero of G0"""


class DivisionByZero(FourWaveError):
    """Mode amplitude in a denominator vanishes"""


class ConfigError(FourWaveError):
    """Malformed run configuration"""
    exit_code = 2
