"""Macro-rules for positive/negative-conditional equations.

Parse a specification, desugar its macro-rules into elementary conditional
rules, and evaluate ground terms against the result.
"""

from importlib import resources

from .desugar import normalize
from .diagnostics import Diagnostic, MacroRuleError, SourceSpan
from .evaluator import Budget, EvalOutcome, normalize_term
from .precheck import precheck
from .rulesys import ConditionalRule, RuleSystem, emit, parse_rules, print_rules, system_equal
from .surface import parse_spec, read_spec


def corpus_path(name):
    """Path of a bundled example specification, e.g. ``corpus_path("arith.mr")``."""
    return resources.files(__name__) / "corpus" / name


def compile_spec(text, file="<string>", seed=None):
    """Parse and desugar ``text``; returns (RuleSystem, diagnostics)."""
    spec = parse_spec(text, file)
    result = normalize(spec, seed=seed)
    return emit(result.rules, spec.symbols), spec.symbols.warnings + result.diagnostics


__all__ = [
    "Budget",
    "ConditionalRule",
    "Diagnostic",
    "EvalOutcome",
    "MacroRuleError",
    "RuleSystem",
    "SourceSpan",
    "compile_spec",
    "corpus_path",
    "emit",
    "normalize",
    "normalize_term",
    "parse_rules",
    "parse_spec",
    "precheck",
    "print_rules",
    "read_spec",
    "system_equal",
]
