"""Exception taxonomy shared across the toolkit.

ConfigError (and subclasses) mean the request was malformed; AccuracyError and
ResourceLimitError mean a well-formed request could not be honored within its
stated tolerance or budget.  The command line maps ConfigError to exit code 2
and the other two to exit code 3.
"""


class ToolkitError(Exception):
    """Base class for all toolkit-raised errors."""


class ConfigError(ToolkitError):
    """Invalid parameters, incompatible operator/field pairing, bad config file."""


class AliasingError(ConfigError):
    """A synthesis/quadrature grid is too coarse for the requested modes."""


class AccuracyError(ToolkitError):
    """A computation cannot meet its stated tolerance (e.g. quadrature tail too fat)."""


class ResourceLimitError(ToolkitError):
    """A mode enumeration or experiment exceeds its configured budget."""
