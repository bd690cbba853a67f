"""Exception types shared across the library."""


class LinkoidError(Exception):
    """Base class for all library errors."""


class DiagramSyntaxError(LinkoidError):
    """Malformed diagram text; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class ValidationError(LinkoidError):
    """A diagram failed structural validation; .violations holds the list."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NegativeExponentSubstitution(LinkoidError):
    """Substituted a non-unit polynomial into a negatively-exponented variable."""


class IncompleteChoice(LinkoidError):
    """A smoothing choice does not cover every crossing."""


class MissingOrdering(LinkoidError):
    """Operation requires endpoint labels that the diagram does not carry."""


class CapacityError(LinkoidError):
    """Input exceeds the hard size limit of an enumeration."""


class UnsupportedSurface(LinkoidError):
    """Surface other than S2 or R2 requested."""


class StaleSite(LinkoidError):
    """A move site no longer matches the diagram it is applied to."""


class NoOpenComponents(LinkoidError):
    """Theta-graph construction needs at least one open component."""


class DegreeTooSmall(LinkoidError):
    """Local replacement at a vertex of degree < 2."""


class NotAThetaGraph(LinkoidError):
    """Spatial graph lacks generalized theta-graph structure."""
