"""Exception types raised by the quantizers and the batch driver."""


class IntegrabilityError(ValueError):
    """The requested operator integral has no convergent quadrature."""


class NodeEvaluationError(ValueError):
    """A phase-space function returned a non-finite value at a quadrature node."""


class DivergentMomentError(ValueError):
    """A fiducial moment ``c_gamma`` diverges for the requested exponent."""


class GridMismatchError(ValueError):
    """Two sampled objects live on different grids."""


class ConfigError(ValueError):
    """Invalid run configuration."""
