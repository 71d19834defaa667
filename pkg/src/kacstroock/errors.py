"""Exception hierarchy shared by all submodules."""


class KacStroockError(Exception):
    """Base class for every error raised by this package."""


class InvalidTriplet(KacStroockError, ValueError):
    pass


class QuadratureFailure(KacStroockError, ArithmeticError):
    pass


class DegenerateTheta(KacStroockError, ValueError):
    """Raised when a(theta) (or a related shifted value) is not positive."""


class AdmissibilityFailure(KacStroockError, ValueError):
    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class UnsampleableFamily(KacStroockError, ValueError):
    pass


class StepTooCoarse(KacStroockError, ValueError):
    pass


class HorizonTooShort(KacStroockError, ValueError):
    pass


class TooFewSamples(KacStroockError, ValueError):
    pass


class GridMismatch(KacStroockError, ValueError):
    pass


class PartitionTooFine(KacStroockError, ValueError):
    pass


class ConfigError(KacStroockError):
    pass


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError, ValueError):
    def __init__(self, field, message=None):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)
