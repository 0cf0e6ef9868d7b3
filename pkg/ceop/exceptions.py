class CeopError(Exception):
    """Base class for solver-suite errors"""


class ParseError(CeopError):
    """Malformed instance text; carries the 1-based line number"""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DegenerateCircles(CeopError):
    """Two circles coincide, so their intersection is not a finite point set"""


class DegenerateExtent(CeopError):
    """All instance points coincide; the bounding box has no extent"""


class ProjectionFailure(CeopError):
    """A particle move could not be confined to its zone boundary"""


class TooLarge(CeopError):
    """Instance exceeds the brute-force guard"""

    def __init__(self, zones, limit):
        self.zones = zones
        self.limit = limit
        super().__init__(f"{zones} zones exceed the brute-force limit of {limit}")
