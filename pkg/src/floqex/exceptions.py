"""Exception types shared across the library."""


class FloqexError(Exception):
    """Base class for all library errors."""


class ResonantDenominator(FloqexError):
    """A detuning denominator sits inside the resonance guard window."""


class ResonantCavity(FloqexError):
    """The laser-cavity detuning is too small to define the photon-mediated kernel."""


class NoResonance(FloqexError):
    """The bound-state equation has no root inside the search bracket."""


class NoPeak(FloqexError):
    """A spectrum has no interior local maximum."""


class ConfigError(FloqexError):
    """A run configuration could not be parsed or validated."""
