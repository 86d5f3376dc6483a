"""Exception hierarchy for pfkit.

Every error raised by the library derives from :class:`PfkitError`, so CLI
and sweep drivers can distinguish domain failures from programming bugs.
"""


class PfkitError(Exception):
    """Base class for all pfkit errors."""


class NotHermitian(PfkitError):
    """A matrix required to be self-adjoint is not, beyond tolerance."""


class NotPositiveDefinite(PfkitError):
    """A Hermitian matrix fails Sylvester's positivity criterion."""


class DegenerateSpectrum(PfkitError):
    """Eigenvalues coalesce within tolerance: candidate exceptional point."""

    def __init__(self, message, gap=None, scale=None):
        super().__init__(message)
        self.gap = gap
        self.scale = scale


class ConstraintViolated(PfkitError):
    """Pseudo-fermion parameter constraint residual exceeds tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ZeroParameter(PfkitError):
    """A family parameter that must be nonzero is zero."""


class DegenerateParameters(PfkitError):
    """Parameter combination (e.g. alpha == beta) that kills the structure."""


class EigenvectorDegenerate(PfkitError):
    """Eigenvector extraction lost accuracy (near-defective input)."""


class ExceptionalPoint(PfkitError):
    """No pseudo-fermions exist: the eigensystem coalesces."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value  # coalesced eigenvalue, when known


class UnsupportedShape(PfkitError):
    """The (0,1) entry vanishes, so the ladder-operator form cannot hold."""


class NoPseudoFermions(PfkitError):
    """Model configuration admits no pseudo-fermionic representation."""

    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason


class TrivialCommutant(PfkitError):
    """Every matrix commutes (omega == 0 or gamma == 0): nothing to build."""


class NotInPTForm(PfkitError):
    """Matrix fails the (generalized) PT-symmetry structure conditions.

    Carries the residual of each of the two conditions so callers can
    report which one failed and by how much.
    """

    def __init__(self, message, offdiag_residual=None, diag_residual=None):
        super().__init__(message)
        self.offdiag_residual = offdiag_residual
        self.diag_residual = diag_residual


class NotReducible(PfkitError):
    """Model instance has no equivalent in the requested target family."""


class InvalidGrid(PfkitError):
    """Sweep configuration grid is malformed."""


class InternalInconsistency(PfkitError):
    """Two routes that must agree disagreed; indicates a bug, not bad input."""
