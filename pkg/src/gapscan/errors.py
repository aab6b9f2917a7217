"""Exception types shared across the package."""


class GapScanError(Exception):
    """Base class for all gapscan-specific errors."""


class ConfigError(GapScanError):
    """Invalid or ill-posed configuration (CLI exit code 2)."""


class NumericalError(GapScanError):
    """Numerical failure during propagation or analysis (CLI exit code 3)."""
