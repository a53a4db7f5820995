"""Exception types shared across the package.

Two failure families are kept apart because the command line maps them to
different exit codes: bad inputs (malformed files, out-of-domain arguments)
and violations of internal numerical invariants (a computation produced a
value that fails its own consistency checks).
"""


class DomainError(ValueError):
    """Raised for invalid user input or out-of-domain arguments."""


class NumericalInvariantError(RuntimeError):
    """Raised when a computed quantity fails an internal consistency check.

    Usually this means the requested accuracy cannot be met, e.g. an
    integration step count too small for the potential at hand.
    """
