"""Typed surface syntax of macro-rule specifications.

A specification file is a sequence of declarations::

    (vars x y l)
    (consts nil true false 0)
    (funs (cons 2) (memberp 2) (s 1))

followed by ``(macro-rule TERM META-TERM)`` forms. Variables, constants and
function names live in disjoint classes; the parser uses the declarations to
classify every symbol.
"""

from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .diagnostics import (
    Diagnostic,
    GrammarError,
    NameClassError,
    ReservedFunctionName,
    SourceSpan,
)
from .sexpr import Atom, SList, parse_sexprs, print_sexpr

RESERVED_FUNCTION_NAMES = frozenset({"case", "if"})
DISCOURAGED_FUNCTION_NAMES = frozenset(
    {"=", "#", "def", "match", "match*", "let", "or", "or*", "and", "and*", "not"}
)
CONNECTIVES = {"and", "or", "and*", "or*", "not"}


# --------------------------------------------------------------------------
# symbols

@dataclass
class SymbolTable:
    variables: set = field(default_factory=set)
    constants: set = field(default_factory=set)
    functions: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list, compare=False, repr=False)

    def classify(self, name):
        if name in self.variables:
            return "variable"
        if name in self.constants:
            return "constant"
        if name in self.functions:
            return "function"
        return None

    def declare(self, kind, name, span, arity=None):
        other = self.classify(name)
        if other is not None and other != kind:
            raise NameClassError(f"{name} is declared both as {other} and as {kind}", span)
        if kind == "variable":
            self.variables.add(name)
        elif kind == "constant":
            self.constants.add(name)
        else:
            if name in RESERVED_FUNCTION_NAMES:
                raise ReservedFunctionName(f"function may not be named {name}", span)
            known = self.functions.get(name)
            if known is not None and known != arity:
                raise GrammarError(f"function {name} declared with arities {known} and {arity}", span)
            if name in DISCOURAGED_FUNCTION_NAMES and known is None:
                self.warnings.append(
                    Diagnostic("warning", "reserved-name",
                               f"function {name} shadows a condition keyword and cannot be used as a predicate",
                               span))
            self.functions[name] = arity

    def merged(self, other):
        t = SymbolTable(set(self.variables), set(self.constants), dict(self.functions))
        for v in other.variables:
            t.declare("variable", v, None)
        for c in other.constants:
            t.declare("constant", c, None)
        for f, n in other.functions.items():
            t.declare("function", f, None, n)
        return t

    def declaration_forms(self):
        """Canonical declaration lines, sorted."""
        lines = []
        if self.variables:
            lines.append("(vars " + " ".join(sorted(self.variables)) + ")")
        if self.constants:
            lines.append("(consts " + " ".join(sorted(self.constants)) + ")")
        if self.functions:
            lines.append("(funs " + " ".join(f"({f} {n})" for f, n in sorted(self.functions.items())) + ")")
        return lines


DECLARATION_HEADS = ("vars", "consts", "funs")


def is_declaration(e):
    return isinstance(e, SList) and e.head() in DECLARATION_HEADS


def build_symbol_table(decls, table=None):
    """Merge ``(vars ...)``, ``(consts ...)`` and ``(funs (name arity) ...)`` forms."""
    t = table if table is not None else SymbolTable()
    for d in decls:
        if not is_declaration(d):
            raise GrammarError("expected a declaration form", d.span, "declaration")
        head = d.head()
        for item in d.items[1:]:
            if head == "funs":
                if not (isinstance(item, SList) and len(item) == 2
                        and isinstance(item[0], Atom) and isinstance(item[1], Atom)):
                    raise GrammarError("expected (name arity)", item.span, "function-declaration")
                try:
                    arity = int(item[1].text)
                except ValueError:
                    arity = 0
                if arity < 1:
                    raise GrammarError(f"arity must be a positive integer, got {item[1].text}",
                                       item[1].span, "arity")
                t.declare("function", item[0].text, item.span, arity)
            else:
                if not isinstance(item, Atom):
                    raise GrammarError("expected a symbol", item.span, "name")
                t.declare("variable" if head == "vars" else "constant", item.text, item.span)
    return t


# --------------------------------------------------------------------------
# AST

def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Const:
    name: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple
    span: SourceSpan = _span()


TERM_TYPES = (Var, Const, App)


@dataclass(frozen=True)
class Eq:
    lhs: object
    rhs: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Ineq:
    lhs: object
    rhs: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Def:
    arg: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Pred:
    term: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Match:
    """``(match VAR TERM)``; ``star`` marks the ``match*`` form.

    ``origin`` is the printed source construct the node descends from; it is
    what diagnostics quote, however much the node has been rewritten since.
    """

    var: str
    term: object
    star: bool = False
    span: SourceSpan = _span()
    origin: str = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Let:
    term: object
    var: str
    span: SourceSpan = _span()
    origin: str = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class And:
    args: tuple
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Or:
    args: tuple
    span: SourceSpan = _span()


@dataclass(frozen=True)
class SeqAnd:
    args: tuple
    span: SourceSpan = _span()


@dataclass(frozen=True)
class SeqOr:
    args: tuple
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Not:
    arg: object
    span: SourceSpan = _span()


BASIC_ATOMS = (Eq, Ineq, Def, Pred)
JUNCTORS = (And, Or, SeqAnd, SeqOr)
JUNCTOR_NAMES = {And: "and", Or: "or", SeqAnd: "and*", SeqOr: "or*"}


class Branch(NamedTuple):
    conds: tuple
    body: object


@dataclass(frozen=True)
class If:
    conds: tuple
    then: object
    orelse: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class CaseElse:
    cases: tuple  # of Branch
    orelse: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Case:
    cases: tuple  # of Branch
    span: SourceSpan = _span()


@dataclass(frozen=True)
class MacroRule:
    lhs: App
    body: object
    span: SourceSpan = _span()


@dataclass
class SpecFile:
    symbols: SymbolTable
    rules: list
    file: str = "<string>"
    declarations: list = field(default_factory=list, repr=False)


# --------------------------------------------------------------------------
# rendering

def to_sexpr(x):
    """Render any AST node (or a condition list given as a tuple) as an S-expression."""
    sp = getattr(x, "span", None)
    if isinstance(x, tuple) and not isinstance(x, Branch):
        return SList(tuple(to_sexpr(c) for c in x))
    if isinstance(x, (Var, Const)):
        return Atom(x.name, sp)
    if isinstance(x, App):
        return SList((Atom(x.fn),) + tuple(to_sexpr(a) for a in x.args), sp)
    if isinstance(x, Eq):
        return SList((Atom("="), to_sexpr(x.lhs), to_sexpr(x.rhs)), sp)
    if isinstance(x, Ineq):
        return SList((Atom("#"), to_sexpr(x.lhs), to_sexpr(x.rhs)), sp)
    if isinstance(x, Def):
        return SList((Atom("def"), to_sexpr(x.arg)), sp)
    if isinstance(x, Pred):
        return to_sexpr(x.term)
    if isinstance(x, Match):
        return SList((Atom("match*" if x.star else "match"), Atom(x.var), to_sexpr(x.term)), sp)
    if isinstance(x, Let):
        return SList((Atom("let"), to_sexpr(x.term), Atom(x.var)), sp)
    if isinstance(x, JUNCTORS):
        return SList((Atom(JUNCTOR_NAMES[type(x)]),) + tuple(to_sexpr(a) for a in x.args), sp)
    if isinstance(x, Not):
        return SList((Atom("not"), to_sexpr(x.arg)), sp)
    if isinstance(x, If):
        return SList((Atom("if"), to_sexpr(x.conds), to_sexpr(x.then), to_sexpr(x.orelse)), sp)
    if isinstance(x, CaseElse):
        items = [Atom("case")]
        for b in x.cases:
            items += [to_sexpr(b.conds), to_sexpr(b.body)]
        items += [Atom("else"), to_sexpr(x.orelse)]
        return SList(tuple(items), sp)
    if isinstance(x, Case):
        items = [Atom("case")]
        for b in x.cases:
            items += [to_sexpr(b.conds), to_sexpr(b.body)]
        return SList(tuple(items), sp)
    if isinstance(x, MacroRule):
        return SList((Atom("macro-rule"), to_sexpr(x.lhs), to_sexpr(x.body)), sp)
    raise TypeError(f"cannot render {x!r}")


def show(x):
    return print_sexpr(to_sexpr(x))


# --------------------------------------------------------------------------
# variables and substitution

def free_vars(x):
    """Set of variable names occurring in a term, condition, condition list or meta-term."""
    out = set()
    _collect_vars(x, out)
    return out


def _collect_vars(x, out):
    if isinstance(x, Var):
        out.add(x.name)
    elif isinstance(x, Const):
        pass
    elif isinstance(x, App):
        for a in x.args:
            _collect_vars(a, out)
    elif isinstance(x, (Eq, Ineq)):
        _collect_vars(x.lhs, out)
        _collect_vars(x.rhs, out)
    elif isinstance(x, Def):
        _collect_vars(x.arg, out)
    elif isinstance(x, Pred):
        _collect_vars(x.term, out)
    elif isinstance(x, Match):
        out.add(x.var)
        _collect_vars(x.term, out)
    elif isinstance(x, Let):
        out.add(x.var)
        _collect_vars(x.term, out)
    elif isinstance(x, JUNCTORS):
        for a in x.args:
            _collect_vars(a, out)
    elif isinstance(x, Not):
        _collect_vars(x.arg, out)
    elif isinstance(x, tuple):
        for c in x:
            _collect_vars(c, out)
    elif isinstance(x, If):
        _collect_vars(x.conds, out)
        _collect_vars(x.then, out)
        _collect_vars(x.orelse, out)
    elif isinstance(x, (Case, CaseElse)):
        for b in x.cases:
            _collect_vars(b.conds, out)
            _collect_vars(b.body, out)
        if isinstance(x, CaseElse):
            _collect_vars(x.orelse, out)
    elif isinstance(x, MacroRule):
        _collect_vars(x.lhs, out)
        _collect_vars(x.body, out)
    else:
        raise TypeError(f"no variables for {x!r}")


def substitute(x, var, term):
    """Replace every occurrence of variable ``var`` in a term or basic atom by ``term``."""
    if isinstance(x, Var):
        return term if x.name == var else x
    if isinstance(x, Const):
        return x
    if isinstance(x, App):
        return replace(x, args=tuple(substitute(a, var, term) for a in x.args))
    if isinstance(x, (Eq, Ineq)):
        return replace(x, lhs=substitute(x.lhs, var, term), rhs=substitute(x.rhs, var, term))
    if isinstance(x, Def):
        return replace(x, arg=substitute(x.arg, var, term))
    if isinstance(x, Pred):
        return replace(x, term=substitute(x.term, var, term))
    if isinstance(x, Let):
        return replace(x, term=substitute(x.term, var, term))
    raise TypeError(f"cannot substitute into {x!r}")


def apply_subst(t, sigma):
    """Simultaneous substitution of a term by a mapping name -> term."""
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, App):
        return App(t.fn, tuple(apply_subst(a, sigma) for a in t.args))
    return t


def is_ground(t):
    if isinstance(t, Var):
        return False
    if isinstance(t, App):
        return all(is_ground(a) for a in t.args)
    return True


# --------------------------------------------------------------------------
# parsing

def parse_term(e, t):
    if isinstance(e, Atom):
        kind = t.classify(e.text)
        if kind == "variable":
            return Var(e.text, e.span)
        if kind == "constant":
            return Const(e.text, e.span)
        if kind == "function":
            raise GrammarError(f"function {e.text} used without arguments", e.span, "term")
        raise GrammarError(f"undeclared symbol {e.text}", e.span, "term")
    if len(e) == 0:
        raise GrammarError("empty list is not a term", e.span, "term")
    head = e[0]
    if not isinstance(head, Atom):
        raise GrammarError("term head must be a function name", e.span, "term")
    arity = t.functions.get(head.text)
    if arity is None:
        if t.classify(head.text) is None:
            raise GrammarError(f"undeclared function {head.text}", head.span, "term")
        raise GrammarError(f"{head.text} is not a function", head.span, "term")
    args = e.items[1:]
    if len(args) != arity:
        raise GrammarError(f"{head.text} expects {arity} argument(s), got {len(args)}", e.span, "term")
    return App(head.text, tuple(parse_term(a, t) for a in args), e.span)


def _keyword(e):
    if isinstance(e, SList):
        return e.head()
    return None


def _arity(e, n, name):
    if len(e) != n + 1:
        raise GrammarError(f"{name} takes {n} argument(s)", e.span, name)


def _parse_var(e, t, what):
    if not isinstance(e, Atom) or t.classify(e.text) != "variable":
        raise GrammarError(f"{what} must be a declared variable", e.span, "variable-name")
    return e.text


def parse_condition(e, t, negatable):
    """Parse a condition; ``negatable`` restricts it to the negatable sublanguage."""
    kw = _keyword(e)
    if kw in ("=", "#"):
        _arity(e, 2, kw)
        cls = Eq if kw == "=" else Ineq
        return cls(parse_term(e[1], t), parse_term(e[2], t), e.span)
    if kw == "def":
        if negatable:
            raise GrammarError("def-atom is not negatable here", e.span, "negatable-condition")
        _arity(e, 1, "def")
        return Def(parse_term(e[1], t), e.span)
    if kw in ("match", "match*"):
        if negatable:
            raise GrammarError(f"{kw}-atom is not negatable here", e.span, "negatable-condition")
        _arity(e, 2, kw)
        return Match(_parse_var(e[1], t, "match variable"), parse_term(e[2], t), kw == "match*",
                     e.span, print_sexpr(e))
    if kw == "let":
        if negatable:
            raise GrammarError("let-atom is not negatable here", e.span, "negatable-condition")
        _arity(e, 2, "let")
        return Let(parse_term(e[1], t), _parse_var(e[2], t, "let variable"), e.span, print_sexpr(e))
    if kw == "not":
        _arity(e, 1, "not")
        return Not(parse_condition(e[1], t, True), e.span)
    if kw in ("and", "or"):
        cls = And if kw == "and" else Or
        return cls(tuple(parse_condition(a, t, negatable) for a in e.items[1:]), e.span)
    if kw in ("and*", "or*"):
        cls = SeqAnd if kw == "and*" else SeqOr
        args = e.items[1:]
        parsed = [parse_condition(a, t, True) for a in args[:-1]]
        if args:
            parsed.append(parse_condition(args[-1], t, negatable))
        return cls(tuple(parsed), e.span)
    if isinstance(e, SList) and len(e) == 0:
        raise GrammarError("empty list is not a condition", e.span, "condition")
    return Pred(parse_term(e, t), e.span)


def parse_condition_list(e, t, negatable):
    if not isinstance(e, SList):
        raise GrammarError("expected a condition list", e.span, "condition-list")
    return tuple(parse_condition(c, t, negatable) for c in e.items)


def parse_meta_term(e, t):
    kw = _keyword(e)
    if kw == "if":
        if len(e) != 4:
            raise GrammarError("if takes a condition list and two meta-terms", e.span, "if-term")
        return If(parse_condition_list(e[1], t, True), parse_meta_term(e[2], t), parse_meta_term(e[3], t),
                  e.span)
    if kw == "case":
        items = e.items[1:]
        if len(items) >= 2 and isinstance(items[-2], Atom) and items[-2].text == "else":
            pairs, orelse = items[:-2], items[-1]
            if len(pairs) % 2:
                raise GrammarError("case expects condition-list/meta-term pairs before else", e.span,
                                   "case-term-with-else")
            cases = tuple(Branch(parse_condition_list(pairs[i], t, True), parse_meta_term(pairs[i + 1], t))
                          for i in range(0, len(pairs), 2))
            return CaseElse(cases, parse_meta_term(orelse, t), e.span)
        if not items or len(items) % 2:
            raise GrammarError("case expects one or more condition-list/meta-term pairs", e.span, "case-term")
        for x in items:
            if isinstance(x, Atom) and x.text == "else":
                raise GrammarError("else must be the penultimate element of a case", x.span,
                                   "case-term-with-else")
        return Case(tuple(Branch(parse_condition_list(items[i], t, False), parse_meta_term(items[i + 1], t))
                          for i in range(0, len(items), 2)), e.span)
    return parse_term(e, t)


def parse_macro_rule(e, t):
    if not (isinstance(e, SList) and e.head() == "macro-rule"):
        raise GrammarError("expected (macro-rule TERM META-TERM)", e.span, "macro-rule")
    if len(e) != 3:
        raise GrammarError("macro-rule takes a term and a meta-term", e.span, "macro-rule")
    lhs = parse_term(e[1], t)
    if not isinstance(lhs, App):
        raise GrammarError("left-hand side must be a function application", e[1].span, "macro-rule")
    return MacroRule(lhs, parse_meta_term(e[2], t), e.span)


def parse_spec(text, file="<string>"):
    exprs = parse_sexprs(text, file)
    decls = [e for e in exprs if is_declaration(e)]
    table = build_symbol_table(decls)
    rules = []
    for e in exprs:
        if is_declaration(e):
            continue
        rules.append(parse_macro_rule(e, table))
    return SpecFile(table, rules, file, decls)


def read_spec(path):
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), str(path))
