"""Exception hierarchy shared by all covqsc modules."""


class QscError(Exception):
    """Base class for every error raised by covqsc."""


class InstanceTooLarge(QscError):
    """A requested object exceeds the configured size cap."""


class FactorizationError(QscError):
    """Dimensions do not factor the way the caller claimed."""


class NotHermitian(QscError):
    """An operator expected to be Hermitian is not."""


class InvalidState(QscError):
    """A vector or operator violates the state invariants."""


class GroupTooLarge(QscError):
    """Closure did not terminate within the element cap."""


class PreconditionError(QscError):
    """A modelling precondition is violated (reducible rep, bad orbit size, ...).

    The CLI maps this class to exit code 2.
    """


class NotCovariant(PreconditionError):
    """The representation is not irreducible, so the protocol is not group covariant."""


class OrbitSizeError(PreconditionError):
    """The orbit cannot be labelled with bit strings."""


class IncompletePovm(PreconditionError):
    """Effects fail to resolve the identity."""


class InvalidStrategy(QscError):
    """An attack strategy is malformed (dimensions or Kraus completeness)."""


class ConsistencyError(QscError):
    """Computed results contradict a proven relation; indicates a numerical bug."""
