"""Exception types shared across the package.

Two broad families matter to callers: validation failures (bad inputs or
unsupported scenarios) and numerical-contract violations (an internal
tolerance could not be met).  The CLI maps the first family to exit code 2
and the second to exit code 3.
"""


class FermibagError(Exception):
    """Base class for package-specific failures."""


class ValidationError(FermibagError):
    """Invalid configuration or arguments."""


class UnsupportedStatePairError(ValidationError):
    """The (initial, final) boson-state pair has no closed-form path."""


class OffResonanceError(ValidationError):
    """A resonant-only formula was requested away from Omega = omega_k + omega_k'."""


class DimensionLimitError(ValidationError):
    """Requested truncated Hilbert space exceeds the configured size limit."""


class NumericalContractError(FermibagError):
    """A numerical tolerance promised by the API could not be satisfied."""


class QuadratureNotConvergedError(NumericalContractError):
    """Step refinement exhausted without reaching the target quadrature error."""


class CutoffTooSmallError(NumericalContractError):
    """Truncated-operator construction leaked norm past the internal cutoff."""


class StepSizeError(NumericalContractError):
    """Propagation step too large for the midpoint-exponential contract."""


class NormDriftError(NumericalContractError):
    """Propagated state norm drifted beyond the unitarity tolerance."""
