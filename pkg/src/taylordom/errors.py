"""Exception hierarchy shared by all taylordom modules."""


class TaylorDomError(Exception):
    """Base class for every error raised by the library."""


class PoleError(TaylorDomError):
    """A rational perturbation was evaluated at one of its poles."""

    def __init__(self, k, j=None):
        self.k = k
        self.j = j
        where = f" in psi_{j}" if j is not None else ""
        super().__init__(f"pole{where} at k={k}")


class IdenticallyZeroTail(TaylorDomError):
    """Every term of a root-test window is zero."""


class RootFindingError(TaylorDomError):
    """Simultaneous iteration did not converge within its budget."""

    def __init__(self, message, best_roots=None, best_residuals=None):
        super().__init__(message)
        self.best_roots = best_roots
        self.best_residuals = best_residuals


class DegenerateHeadError(TaylorDomError):
    """max_{i<=N} |a_i| R^i vanishes, so no domination ratio is defined."""


class NHatNotCertified(TaylorDomError):
    def __init__(self, message, best_bound=None):
        super().__init__(message)
        self.best_bound = best_bound


class TailNotControlled(TaylorDomError):
    """No certificate or explicit bound covers the truncation tail."""


class BoundaryZeroSuspected(TaylorDomError):
    """The partial sum comes too close to zero on the counting circle."""


class OperatorError(TaylorDomError):
    """A differential operator violates a precondition (order, Poincare condition)."""


class IntegrationError(TaylorDomError):
    """Per-segment ODE integration failed."""

    def __init__(self, message, segment=None):
        super().__init__(message)
        self.segment = segment


class FitError(TaylorDomError):
    """The jump-term least-squares system is rank deficient or underdetermined."""


class ConfigError(TaylorDomError):
    """An experiment config failed to parse or validate."""
