"""Exception hierarchy for the cvmodes package.

Every error raised by the library derives from :class:`CVModesError` so
callers can catch the whole family with one clause.  The CLI maps these
onto process exit codes (see :mod:`cvmodes.cli`).
"""


class CVModesError(Exception):
    """Base class for all cvmodes errors."""


# -- state construction / inspection ---------------------------------------

class DimensionMismatch(CVModesError):
    """Covariance matrix or mean vector does not match the register size."""


class PhysicalityViolation(CVModesError):
    """Covariance matrix violates the Heisenberg uncertainty bound.

    Carries the offending minimum eigenvalue of ``cov + (i/2) Omega`` in
    :attr:`min_eigenvalue` when known.
    """

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class IndexOutOfRange(CVModesError):
    """A mode index does not exist in the register."""


class DuplicateIndex(CVModesError):
    """A mode index was given more than once."""


class NotAPermutation(CVModesError):
    """The supplied sequence is not a permutation of the register indices."""


class NonPositiveDeterminant(CVModesError):
    """det(cov) <= 0; the matrix cannot describe a Gaussian state."""


# -- transforms -------------------------------------------------------------

class RegisterMismatch(CVModesError):
    """State register differs from the transform's input register."""


class NonSymplectic(CVModesError):
    """Matrix fails S Omega S^T = Omega within tolerance."""


class BadPolarization(CVModesError):
    """Mode polarization is invalid for the requested optical element."""


class DuplicateLabel(CVModesError):
    """A mode label collides with one already present in the register."""


class UnpairedMode(CVModesError):
    """A mode has no coupling partner in the register."""


class NotCircular(CVModesError):
    """Operation requires circularly polarized (L/R) modes."""


# -- numerics ----------------------------------------------------------------

class NumericalFailure(CVModesError):
    """An eigenvalue computation produced structurally invalid results."""


class ConvergenceStall(CVModesError):
    """Iterative criterion stopped making progress without a certificate."""


# -- file formats and pipeline ----------------------------------------------

class ParseError(CVModesError):
    """A state, matrix, or config file could not be parsed."""


class ConventionMismatch(CVModesError):
    """File uses a phase-space convention this toolkit does not accept as-is."""


class PipelineStepError(CVModesError):
    """A pipeline step failed; wraps the underlying module error."""

    def __init__(self, step_index, step_name, cause):
        super().__init__(
            f"step {step_index} ({step_name}) failed: "
            f"{type(cause).__name__}: {cause}"
        )
        self.step_index = step_index
        self.step_name = step_name
        self.cause = cause
