"""Exception types shared across the package.

Plain ValueError is used for bad inputs (domain/precondition failures).
The two classes below cover the other failure modes the CLI maps to
distinct exit codes.
"""


class InvariantViolation(RuntimeError):
    """An exact mathematical identity that must hold was found false.

    Raised when internal verification fails, e.g. a reconstructed value
    does not match, a certified divisibility fails, or a checkpoint file
    disagrees with recomputed content. This is never a user-input error:
    it means either corrupted state or a bug.
    """


class ResourceGuardError(RuntimeError):
    """A requested computation exceeds a configured size guard."""
