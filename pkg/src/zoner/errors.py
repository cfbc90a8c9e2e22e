"""Exception hierarchy shared across the toolkit."""


class ZonerError(Exception):
    """Base class for all domain errors."""


class EmptyDocument(ZonerError):
    pass


class ParseError(ZonerError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class LabelError(ZonerError):
    pass


class DegenerateSplit(ZonerError):
    pass


class UnlabeledSentence(ZonerError):
    def __init__(self, offenders):
        self.offenders = list(offenders)
        listing = ", ".join(f"{doc}[{idx}]" for doc, idx in self.offenders)
        super().__init__(f"unlabeled sentences: {listing}")


class EmptyVocabulary(ZonerError):
    pass


class InputError(ZonerError):
    pass


class MatrixError(ZonerError):
    pass


class InsufficientOverlap(ZonerError):
    pass


class ShapeError(ZonerError):
    pass


class NumericError(ZonerError):
    pass


class DimError(ParseError):
    pass


class Conflict(ZonerError):
    def __init__(self, message, current=None):
        super().__init__(message)
        self.current = current


class NotFound(ZonerError):
    pass
