"""Exception types shared across the package."""


class FpmcalError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(FpmcalError):
    """Invalid parameters or configuration (maps to CLI exit code 2)."""


class ApertureExceedsGridError(ConfigError):
    """Requested pupil radius does not fit inside the spectrum grid."""


class UnphysicalNAError(ConfigError):
    """Illumination geometry requests |NA| >= 1."""


class CoverageError(ConfigError):
    """Ground-truth object bandwidth cannot support the requested illumination."""


class DatasetError(ConfigError):
    """Dataset directory is missing, incomplete, or corrupt."""


class NumericalError(FpmcalError):
    """Numerical failure during calibration or reconstruction (CLI exit 3)."""


class RadiusIndeterminateError(NumericalError):
    """Radius search found no edge response with usable prominence."""


class TransformUnfitError(NumericalError):
    """Too few consistent points to fit the requested transform."""


class DivergenceError(NumericalError):
    """Solver cost blew up; carries a snapshot of the failing state."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class RegistrationError(NumericalError):
    """Resolution target layout not found in the supplied image."""
