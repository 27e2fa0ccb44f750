"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class QuadratureError(ArithmeticError):
    """A quadrature did not reach its tolerance.

    ``achieved`` carries the error estimate that was reached.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


class ConfigError(ValueError):
    """An experiment configuration failed validation.

    ``field`` names the offending key.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class CertificateError(ArithmeticError):
    """A lower-bound path stopped making progress before reaching its target."""
