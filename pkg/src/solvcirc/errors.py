"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A requested dense object exceeds the configured size cap."""


class DominanceError(RuntimeError):
    """The dominant transfer-matrix eigenvalue is ambiguous (complex or tied in
    modulus with a distinct value); derived quantities are not trusted."""


class NumericalDriftError(RuntimeError):
    """A state invariant (trace, Hermiticity, positivity) drifted beyond tolerance."""


class PositivityError(ValueError):
    """An eigenvalue is negative beyond the allowed numerical slack."""
