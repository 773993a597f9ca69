"""Error types shared across the package."""


class ConfigurationError(ValueError):
    """Raised for invalid user-supplied parameters or malformed input files."""


class ContractViolation(ValueError):
    """Raised when an operation is applied to data that breaks its precondition."""


class UnsupportedConfiguration(ConfigurationError):
    """Raised for parameter combinations the implementation deliberately rejects."""
