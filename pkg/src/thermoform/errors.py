"""Exception types raised by the library."""


class ThermoformError(Exception):
    """Base class for errors raised by thermoform."""


class AlphabetMismatch(ThermoformError, ValueError):
    pass


class MemoryOverflow(ThermoformError, ValueError):
    pass


class ConvergenceError(ThermoformError, RuntimeError):
    pass


class NotMeanZero(ThermoformError, ValueError):
    pass


class DependentConstraints(ThermoformError, ValueError):
    """The constraint functions are linearly dependent modulo coboundaries
    and constants (singular Gram matrix)."""


class TargetOutsideRotationSet(ThermoformError, ValueError):
    """Newton iterates diverged: the target is not interior to the set of
    achievable rotation vectors."""


class BoundaryPoint(ThermoformError, ValueError):
    pass


class LevelMismatch(ThermoformError, ValueError):
    pass
