"""Exception types shared across the toolkit.

The CLI maps these onto distinct exit codes: parameter/usage problems,
file-format problems, and numerical failures are kept separate so scripted
callers can tell them apart.
"""


class ParameterError(ValueError):
    """An argument violates an operation's preconditions."""


class DataError(ValueError):
    """Input array contents are invalid (non-finite, non-binary, wrong domain)."""


class DegenerateInputError(DataError):
    """Input is structurally valid but degenerate for the requested statistic."""


class FormatError(IOError):
    """A file does not conform to its declared container format."""


class UnsupportedDepthError(FormatError):
    """PGM sample depth outside the supported 8/16-bit range."""


class SolverDivergenceError(RuntimeError):
    """Iterative solver objective blew up instead of decreasing."""
