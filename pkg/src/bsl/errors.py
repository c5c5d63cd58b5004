"""Exception hierarchy shared by every module of the package."""


class BSLError(Exception):
    """Base class for all package errors."""


class BetaZero(BSLError):
    """A disc map fixes the origin, so it has no isometric circle."""


class ParseError(BSLError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class ValidationError(BSLError):
    def __init__(self, report):
        self.report = report
        failed = ", ".join(c.name for c in report.failures())
        super().__init__(f"polygon failed validation: {failed}")


class NearBoundaryAmbiguity(BSLError):
    """The point is within tolerance of an arc endpoint (a polygon vertex image)."""

    def __init__(self, message, depth=None, distance=None):
        self.depth = depth
        self.distance = distance
        super().__init__(message)


class PrecisionExhausted(BSLError):
    def __init__(self, message, depth=None, bits=None):
        self.depth = depth
        self.bits = bits
        super().__init__(message)


class BacktrackingWord(BSLError):
    def __init__(self, word, position):
        self.word = tuple(word)
        self.position = position
        super().__init__(
            f"letter {position + 1} of {list(self.word)} undoes letter {position}"
        )


class ResolutionNotReached(BSLError):
    def __init__(self, n_max, diameter):
        self.n_max = n_max
        self.diameter = diameter
        super().__init__(f"cylinder diameter {diameter} after {n_max} letters")


class SuspectedParabolicPoint(BSLError):
    def __init__(self, run_length, position):
        self.run_length = run_length
        self.position = position
        super().__init__(
            f"cuspidal run of {run_length} letters starting at letter {position}"
        )


class VertexNotResolved(BSLError):
    pass


class BudgetExceeded(BSLError):
    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class InsufficientData(BSLError):
    pass


class RationalDetected(BSLError):
    def __init__(self, a0, quotients):
        self.a0 = a0
        self.quotients = list(quotients)
        super().__init__(f"expansion terminated: [{a0}; {', '.join(map(str, self.quotients))}]")
