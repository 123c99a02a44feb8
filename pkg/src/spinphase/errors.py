"""Exception types raised by the simulator."""


class ConfigError(ValueError):
    """Invalid chain, state or sweep configuration."""


class IncommensurateSpectrum(RuntimeError):
    """Frequency differences have no common rational period."""


class NoReturnFound(RuntimeError):
    """Quasi-cyclic search found no recurrence within the horizon."""


class OrthogonalOverlap(ArithmeticError):
    """Visibility |<psi(0)|psi(t)>| fell below the floor; the phase is undefined.

    ``factor`` names what failed: ``"composite"`` or ``"site j"``.
    """

    def __init__(self, message, factor="composite", visibility=0.0):
        super().__init__(message)
        self.factor = factor
        self.visibility = visibility


class WindingError(RuntimeError):
    """A free spin does not complete an integer number of windings over tau."""
