# Exception types raised by planar_width. The CLI maps them to exit codes:
# TraceParseError -> parse error, every other DynWidthError -> semantic error.


class DynWidthError(Exception):
    pass


class DuplicateIdError(DynWidthError):
    pass


class UnknownIdError(DynWidthError):
    pass


class CoordinateRangeError(DynWidthError):
    pass


class EmptyHullError(DynWidthError):
    pass


class StaleSideError(DynWidthError):
    pass


class DuplicateSideError(DynWidthError):
    pass


class UnknownSideError(DynWidthError):
    pass


class NoHalfplanesError(DynWidthError):
    pass


class PreconditionViolatedError(DynWidthError):
    pass


class DegenerateHullError(DynWidthError):
    pass


class TraceParseError(DynWidthError):

    def __init__(self, line_number: int, message: str):
        super().__init__("line %d: %s" % (line_number, message))
        self.line_number = line_number
