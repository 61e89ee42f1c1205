"""Exception hierarchy for the toolkit.

Every numerical failure mode raises a distinct class so callers (and the
CLI exit-code mapping) can tell configuration mistakes from data problems
from solver breakdowns.
"""


class EitkitError(Exception):
    """Base class for all toolkit errors."""


class PoleError(EitkitError):
    """A closed-form expression was evaluated at (or too close to) a pole."""


class ValidityError(EitkitError):
    """A linear-response operation was called outside its weak-signal regime."""


class SingularLiouvillian(EitkitError):
    """The steady state is not unique (null-space dimension != 1)."""


class QuadratureFailure(EitkitError):
    """Adaptive quadrature could not reach the requested tolerance."""


class NoDip(EitkitError):
    """A scan has no interior extremum to measure."""


class Ambiguous(EitkitError):
    """A scan crosses its half-maximum level more than twice."""


class NoConvergence(EitkitError):
    """An iterative fit hit its iteration cap before converging."""


class DegenerateData(EitkitError):
    """Input data carries no usable contrast for the requested fit."""


class RankDeficient(EitkitError):
    """A linear fit was attempted on data with no abscissa spread."""


class RangeError(EitkitError):
    """An argument is outside the validity window of a correlation."""


class ConfigError(EitkitError):
    """A run configuration file failed validation."""

    def __init__(self, message, section=None, key=None):
        self.section = section
        self.key = key
        where = ""
        if section is not None:
            where = f" [{section}]" + (f" {key}" if key else "")
        super().__init__(message + where)


class DataError(EitkitError):
    """An input data file failed schema validation."""
