"""Exception types raised across the package."""


class PreconditionError(ValueError):
    """An operation was called with arguments outside its contract."""


class ReconstructionError(ArithmeticError):
    """No rational function within the degree bounds matches the coefficients."""

    def __init__(self, message: str, mismatch_index: int):
        super().__init__(f"{message} (first mismatch at index {mismatch_index})")
        self.mismatch_index = mismatch_index


class UnsupportedRankError(ValueError):
    pass


class NonIsolatedFixedPointsError(ArithmeticError):
    pass


class InsufficientExtensionError(ValueError):
    """The requested field extension cannot contain every fixed point."""


class NoRootsError(ValueError):
    pass


class ZeroRootError(ValueError):
    pass


class ConfigError(ValueError):
    """A model configuration failed validation."""
