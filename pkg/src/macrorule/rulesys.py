"""Positive/negative-conditional rule systems: the compiler's output format.

Canonical text form, one rule per line::

    (rule (delete x (cons y k)) (delete x k) ((= x y)))

Pretty form, for reading::

    (delete x (cons y k)) = (delete x k) <== x = y
"""

from collections import Counter
from dataclasses import dataclass, field

from .desugar import ElementaryMacroRule
from .diagnostics import GrammarError, InternalNotElementary
from .sexpr import Atom, SList, parse_sexprs, print_sexpr
from .surface import (
    App,
    Def,
    Eq,
    Ineq,
    SymbolTable,
    build_symbol_table,
    is_declaration,
    parse_term,
    show,
    to_sexpr,
)

CONDITION_ATOMS = (Eq, Ineq, Def)


@dataclass(frozen=True)
class ConditionalRule:
    lhs: App
    rhs: object
    conditions: tuple = ()

    def __str__(self):
        return pretty_rule(self)


@dataclass
class RuleSystem:
    symbols: SymbolTable
    rules: list = field(default_factory=list)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def emit(elems, symbols):
    rules = []
    for e in elems:
        if not isinstance(e, ElementaryMacroRule) or not isinstance(e.lhs, App) \
                or not all(isinstance(c, CONDITION_ATOMS) for c in e.conditions):
            raise InternalNotElementary(f"not an elementary rule: {e!r}")
        rules.append(ConditionalRule(e.lhs, e.rhs, tuple(e.conditions)))
    return RuleSystem(symbols, rules)


def _infix(c):
    if isinstance(c, Eq):
        return f"{show(c.lhs)} = {show(c.rhs)}"
    if isinstance(c, Ineq):
        return f"{show(c.lhs)} # {show(c.rhs)}"
    return f"def {show(c.arg)}"


def pretty_rule(r):
    head = f"{show(r.lhs)} = {show(r.rhs)}"
    if not r.conditions:
        return head
    return head + " <== " + ", ".join(_infix(c) for c in r.conditions)


def canonical_rule(r):
    conds = SList(tuple(to_sexpr(c) for c in r.conditions))
    return print_sexpr(SList((Atom("rule"), to_sexpr(r.lhs), to_sexpr(r.rhs), conds)))


def print_rules(rs, mode="canonical", declarations=False):
    fmt = canonical_rule if mode == "canonical" else pretty_rule
    lines = rs.symbols.declaration_forms() if declarations else []
    lines += [fmt(r) for r in rs.rules]
    return "".join(line + "\n" for line in lines)


def _parse_atom(e, t):
    if isinstance(e, SList) and e.head() in ("=", "#") and len(e) == 3:
        cls = Eq if e.head() == "=" else Ineq
        return cls(parse_term(e[1], t), parse_term(e[2], t), e.span)
    if isinstance(e, SList) and e.head() == "def" and len(e) == 2:
        return Def(parse_term(e[1], t), e.span)
    raise GrammarError("expected (= a b), (# a b) or (def a)", e.span, "condition-atom")


def parse_rule(e, t):
    if not (isinstance(e, SList) and e.head() == "rule" and len(e) == 4):
        raise GrammarError("expected (rule LHS RHS (CONDITION ...))", e.span, "rule")
    lhs = parse_term(e[1], t)
    if not isinstance(lhs, App):
        raise GrammarError("rule left-hand side must be a function application", e[1].span, "rule")
    if not isinstance(e[3], SList):
        raise GrammarError("expected a condition list", e[3].span, "rule")
    return ConditionalRule(lhs, parse_term(e[2], t), tuple(_parse_atom(c, t) for c in e[3]))


def parse_rules(text, symbols=None, file="<string>"):
    """Parse a canonical rule file. Declarations in the file extend ``symbols``."""
    exprs = parse_sexprs(text, file)
    decls = [e for e in exprs if is_declaration(e)]
    t = SymbolTable() if symbols is None else symbols.merged(SymbolTable())
    build_symbol_table(decls, t)
    return RuleSystem(t, [parse_rule(e, t) for e in exprs if not is_declaration(e)])


def read_rules(path):
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read(), file=str(path))


def system_equal(a, b):
    """Multiset equality of rules; condition order inside a rule is significant."""
    return Counter(a.rules) == Counter(b.rules)
