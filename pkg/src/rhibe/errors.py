"""Exception hierarchy.

Each class carries a ``kind`` that the CLI maps to an exit status. A
revoked identity or an (id, epoch) mismatch inside the scheme algorithms is
not an exception: those algorithms return ``None``.
"""


class RhibeError(Exception):
    kind = "usage"


class UsageError(RhibeError):
    kind = "usage"


class LevelError(UsageError):
    """Operation requested on incompatible multilinear levels."""


class DepthError(UsageError):
    pass


class MismatchError(RhibeError):
    kind = "mismatch"


class PrefixMismatch(MismatchError):
    pass


class IntegrityError(RhibeError):
    kind = "integrity"


class MissingArtifact(RhibeError):
    kind = "missing-artifact"


class StateViolation(RhibeError):
    kind = "state-violation"


class IndexExhausted(StateViolation):
    pass


class DuplicateChild(StateViolation):
    pass


class UnknownIdentity(StateViolation):
    pass


class EpochOrderError(StateViolation):
    pass


class Revoked(RhibeError):
    """Raised by the key authority layer when a derivation yields no key."""

    kind = "revoked"
