"""Exception types shared across the package."""


class SamplingError(RuntimeError):
    """Rejection sampling exhausted its draw budget (prime-free or too-narrow interval)."""


class BuildError(RuntimeError):
    """Index construction exhausted its retry budget; the input text was left intact."""


class StateError(RuntimeError):
    """Operation called on a buffer or index in the wrong mode."""


class CapacityError(RuntimeError):
    """A borrowed-bit region is too small for the requested lease."""
