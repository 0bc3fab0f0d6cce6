"""Source spans, diagnostics and the exception hierarchy."""

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class SourceSpan:
    """A region of a source file. Lines and columns are 1-based and inclusive."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self):
        return f"{self.file}:{self.start_line}:{self.start_col}"

    def contains(self, other):
        return (self.start_line, self.start_col) <= (other.start_line, other.start_col) and (
            other.end_line,
            other.end_col,
        ) <= (self.end_line, self.end_col)


UNKNOWN_SPAN = SourceSpan("<unknown>", 0, 0, 0, 0)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning" | "note"
    code: str
    message: str
    span: SourceSpan

    def format(self):
        s = self.span
        return f"{s.file}:{s.start_line}:{s.start_col}: {self.severity.upper()} [{self.code}] {self.message}"

    def sort_key(self):
        return (self.span, self.code, self.message, self.severity)

    @property
    def is_error(self):
        return self.severity == "error"


def sort_diagnostics(diags):
    return sorted(diags, key=Diagnostic.sort_key)


class MacroRuleError(Exception):
    """Base class for everything this package raises on bad input."""

    code = "error"

    def __init__(self, message, span=None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        if self.span is None:
            return self.message
        return f"{self.span}: {self.message}"

    def to_diagnostic(self):
        return Diagnostic("error", self.code, self.message, self.span or UNKNOWN_SPAN)


class SExprError(MacroRuleError):
    pass


class UnbalancedParen(SExprError):
    code = "unbalanced-paren"


class IllegalCharacter(SExprError):
    code = "illegal-character"


class GrammarError(MacroRuleError):
    code = "grammar"

    def __init__(self, message, span=None, expected=None):
        super().__init__(message, span)
        self.expected = expected


class NameClassError(GrammarError):
    code = "name-class"


class ReservedFunctionName(GrammarError):
    code = "reserved-function-name"


class StepBudgetExceeded(MacroRuleError):
    code = "step-budget-exceeded"


class InternalNotElementary(MacroRuleError):
    code = "internal-not-elementary"


class UndeclaredTrue(MacroRuleError):
    code = "undeclared-true"


class NotOverDef(MacroRuleError):
    code = "not-over-def"


class MatchShiftCapture(MacroRuleError):
    code = "match-shift-capture"


class LetMatchSameVar(MacroRuleError):
    code = "let-match-same-var"


class LhsMatchCapture(MacroRuleError):
    code = "lhs-match-capture"
