"""Exception types raised across the package."""


class ErdosRogersError(Exception):
    """Base class for every error raised by this package."""


class OutOfRange(ErdosRogersError, ValueError):
    """Raised for a pair (s, t) outside s >= 3, s+2 <= t <= 2s-1."""


class MismatchedParameters(ErdosRogersError, ValueError):
    pass


class NodeOutOfRange(ErdosRogersError, IndexError):
    pass


class BadSubset(ErdosRogersError, ValueError):
    pass


class TooLarge(ErdosRogersError, ValueError):
    """Raised when an enumeration request exceeds the configured cap."""


class InvalidParams(ErdosRogersError, ValueError):
    pass


class WrongStage(ErdosRogersError, ValueError):
    pass


class IncompleteKtList(ErdosRogersError, RuntimeError):
    """A t-clique survived Type-2 deletion, so the K_t list was not exhaustive."""


class BadSize(ErdosRogersError, ValueError):
    pass


class EmptySubset(ErdosRogersError, ValueError):
    pass


class HashMismatch(ErdosRogersError, ValueError):
    """A deletion trace does not belong to the graph it is replayed on."""
