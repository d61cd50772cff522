"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class MCPPError(Exception):
    exit_code = 1
    kind = "error"

    def __init__(self, message: str = "", kind: str | None = None):
        super().__init__(message)
        if kind is not None:
            self.kind = kind


class ParseError(MCPPError):
    exit_code = 2
    kind = "parse-error"


class ValidationError(MCPPError):
    exit_code = 2
    kind = "validation-error"


class LabelMismatch(ValidationError):
    kind = "label-mismatch"


class NotAlphaAcyclic(ValidationError):
    kind = "not-alpha-acyclic"


class InvalidJoinTree(ValidationError):
    kind = "invalid-join-tree"


class NotDownwardClosed(ValidationError):
    kind = "not-downward-closed"


class UnlinearizableMonomial(ValidationError):
    kind = "unlinearizable-monomial"

    def __init__(self, monomial):
        self.monomial = tuple(sorted(monomial))
        super().__init__(f"monomial {list(self.monomial)} is not a coordinate of the family")


class BlockConflict(ValidationError):
    kind = "monomial-hits-block-twice"


class InvalidInequality(ValidationError):
    kind = "ineq-invalid"


class NotAFacet(ValidationError):
    kind = "ineq-not-facet"


class NotACover(ValidationError):
    kind = "not-a-cover"


class GuardExceeded(MCPPError):
    exit_code = 3
    kind = "guard-exceeded"


class Infeasible(MCPPError):
    exit_code = 3
    kind = "infeasible"


class InternalInvariantViolation(MCPPError):
    exit_code = 4
    kind = "internal-invariant-violation"
