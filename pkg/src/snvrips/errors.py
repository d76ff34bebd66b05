"""Shared exception types."""


class InputError(ValueError):
    """Invalid user-supplied data (bad file, missing label, length mismatch).

    The CLI maps this to exit code 1; internal invariant violations are not
    wrapped in it.
    """
