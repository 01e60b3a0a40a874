"""Exception hierarchy shared by the simulator modules."""


class SamQubitError(Exception):
    """Base class for all simulator errors."""


class ParameterError(SamQubitError, ValueError):
    """A physical parameter violates its invariant."""


class SingularGeometryError(SamQubitError, ValueError):
    """Two dipoles (or a dipole and a density point) coincide."""


class SpinDensityParseError(SamQubitError, ValueError):
    """Malformed line in a spin-density file."""

    def __init__(self, lineno, line, reason):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class SpinDensityValidationError(SamQubitError, ValueError):
    """A spin density that parses but violates its invariants."""


class ResolutionError(SamQubitError, ValueError):
    """Two transition frequencies cannot be told apart at the requested tolerance."""

    def __init__(self, first, second, message=None):
        self.pair = (first, second)
        super().__init__(message or f"transitions {first} and {second} are not resolvable")


class AmbiguousResonanceError(SamQubitError, ValueError):
    """An rf frequency matches zero or several transitions."""
