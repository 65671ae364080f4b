class KappaMuError(ValueError):
    """Base class for errors raised by this package."""


class NotInSpanError(KappaMuError):
    pass


class NotASubalgebraError(KappaMuError):
    pass


class NotKappaMuCandidateError(KappaMuError):
    """The operator h does not split the contact distribution into +-lambda eigenspaces."""


class SasakianError(KappaMuError):
    """An operation needing kappa < 1 was given a Sasakian (kappa = 1) structure."""


class BoundaryInvariantError(KappaMuError):
    """Boeckx invariant equal to +-1, excluded from the classification."""
