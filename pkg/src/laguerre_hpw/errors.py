"""Exception and warning types raised across the package."""


class HypothesisError(ValueError):
    """Parameters fall outside the hypotheses of the requested result."""


class DivergentIntegralError(ValueError):
    """The requested closed-form integral diverges for these exponents."""


class GridResolutionError(RuntimeError):
    """A quadrature grid failed its construction self-test."""

    def __init__(self, message, defect=None):
        super().__init__(message)
        self.defect = defect


class SingularTermError(ValueError):
    """The (2a+1)/x d/dx term cannot be resolved at x = 0."""


class CostGuardError(RuntimeError):
    """Work estimate exceeds the configured node-pair budget."""


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


class TruncationWarning(UserWarning):
    """Spectral data carries non-negligible mass near the edge of the dual grid."""


class TailWarning(UserWarning):
    """Evaluation points left the space box and were read as zero."""
