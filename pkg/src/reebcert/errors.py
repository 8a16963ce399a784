"""Exception types raised across the package."""


class ReebcertError(Exception):
    """Base class for all package errors."""


class InputShapeError(ReebcertError, ValueError):
    """Vector or matrix dimensions do not agree."""


class RegistryError(ReebcertError, KeyError):
    """Duplicate or unknown fiber-type id."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ClassifierError(ReebcertError, ValueError):
    """Classifier is malformed or does not cover the registry."""


class ValidationError(ReebcertError):
    """A labeled complex failed validation; ``report`` lists every violation."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(str(v) for v in report.violations) or "invalid complex")


class IncompatibleQuotientError(ReebcertError):
    """The canonical chain has nonzero boundary over the supplied quotient."""

    def __init__(self, message, face=None):
        super().__init__(message)
        self.face = face


class IncompatibleClassifierError(ReebcertError):
    """Some relation does not map to zero under the classifier."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class SceneParseError(ReebcertError, ValueError):
    """Scene text is not valid JSON or violates the scene schema."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
