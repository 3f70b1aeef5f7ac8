"""Exception hierarchy shared by all modules."""


class BohmKNError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(BohmKNError):
    def __init__(self, field: str, message: str, line: int | None = None):
        self.field = field
        self.message = message
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{field}: {message}{where}")


class NumericalError(BohmKNError):
    """A computation failed to converge or hit a singular configuration."""


# complex_minkowski
class NotOnShell(BohmKNError):
    pass


class NonOrthochronous(BohmKNError):
    pass


class NotAntisymmetric(BohmKNError):
    pass


class OnSingularRing(NumericalError):
    pass


# wavepacket / trajectory
class NodalPoint(NumericalError):
    pass


class AtBranchPoint(NumericalError):
    pass


class PathThroughBranchPoint(NumericalError):
    pass


class StepTooCoarse(NumericalError):
    pass


# gan
class DimensionMismatch(BohmKNError):
    pass


class WeightsNotNormalized(BohmKNError):
    pass


class ZeroAmplitudeAxis(BohmKNError):
    pass


# lienard_wiechert
class NoRetardedRoot(NumericalError):
    pass


class DegenerateQuartic(NumericalError):
    pass


class UnequalGamma(BohmKNError):
    pass


class DenominatorVanishes(NumericalError):
    pass


class BranchAmbiguity(NumericalError):
    pass


# ensemble
class FilterStarvation(NumericalError):
    pass


class QuadratureNotConverged(NumericalError):
    pass


class GridTooSmall(BohmKNError):
    pass
