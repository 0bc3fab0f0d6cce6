"""Desugaring of macro-rules into elementary macro-rules.

Each rewrite rule is available as a one-step function (``remove_if``,
``shift_match_left``, ...). :func:`normalize` drives them to a fixpoint, either
deterministically (first applicable rule in ``RULE_ORDER``, leftmost-innermost
redex) or by drawing uniformly among all applicable (rule, redex) pairs from a
seeded generator. The rule system is confluent, so both yield the same rule
multiset on non-erroneous input.

Diagnostics quote the *original* construct a node descends from (the
``origin`` of match and let atoms), so they read the same no matter which
rewrite steps preceded them.
"""

import random
from dataclasses import dataclass, field, replace

from .diagnostics import (
    Diagnostic,
    InternalNotElementary,
    LetMatchSameVar,
    LhsMatchCapture,
    MacroRuleError,
    MatchShiftCapture,
    NotOverDef,
    StepBudgetExceeded,
    UndeclaredTrue,
    UNKNOWN_SPAN,
    sort_diagnostics,
)
from .sexpr import print_sexpr
from .surface import (
    App,
    And,
    BASIC_ATOMS,
    Branch,
    Case,
    CaseElse,
    Const,
    Def,
    Eq,
    If,
    Ineq,
    JUNCTORS,
    Let,
    MacroRule,
    Match,
    Not,
    Or,
    Pred,
    SeqAnd,
    SeqOr,
    TERM_TYPES,
    free_vars,
    show,
    substitute,
    to_sexpr,
)

RULE_ORDER = (
    "predicate-removal",
    "if-removal",
    "else-removal",
    "not-removal",
    "and-removal",
    "or-removal",
    "or*-removal",
    "case-in-case-removal",
    "match-removal",
    "match*-shift-left",
    "let-shift-right",
    "let-match*-swap",
    "splitting",
    "match*-removal",
    "let-removal",
    "empty-case-removal",
)
_RANK = {name: i for i, name in enumerate(RULE_ORDER)}

MAX_STEPS = 10**6


# --------------------------------------------------------------------------
# diagnostics text, shared with the precheck pass

def _vars_text(names):
    return ", ".join(sorted(names))


def rebind_match_warning(m):
    return Diagnostic("warning", "rebind-match", f"{m.origin} re-binds {m.var}", m.span or UNKNOWN_SPAN)


def rebind_let_warning(let):
    return Diagnostic("warning", "rebind-let", f"{let.origin} re-binds {let.var}", let.span or UNKNOWN_SPAN)


def let_dropped_warning(let, m):
    return Diagnostic("warning", "let-rebound-by-match",
                      f"{let.origin} is discarded: {let.var} is re-bound by {m.origin}",
                      let.span or UNKNOWN_SPAN)


def unreachable_else_warning(node):
    return Diagnostic("warning", "unreachable-else",
                      "a case before else has an empty condition list, so the else branch never applies",
                      node.span or UNKNOWN_SPAN)


def shift_capture_error(m, names):
    return MatchShiftCapture(f"{m.origin}: {_vars_text(names)} occur(s) to the left of the match", m.span)


def same_var_error(let, m):
    return LetMatchSameVar(f"{let.origin} and {m.origin} bind the same variable {m.var}", m.span)


def lhs_capture_error(m, names):
    return LhsMatchCapture(f"{m.origin}: {_vars_text(names)} also occur(s) in the left-hand side", m.span)


def undeclared_true_error(p):
    return UndeclaredTrue(f"predicate {show(p)} needs the constant true, which is not declared", p.span)


# --------------------------------------------------------------------------
# elementary rules

@dataclass(frozen=True)
class ElementaryMacroRule:
    lhs: App
    conditions: tuple
    rhs: object
    source: int = field(default=0, compare=False)

    def to_macro_rule(self):
        if self.conditions:
            return MacroRule(self.lhs, Case((Branch(self.conditions, self.rhs),)))
        return MacroRule(self.lhs, self.rhs)


def as_elementary(r, source=0):
    """Return ``r`` as an ElementaryMacroRule, or None if it is not elementary."""
    if isinstance(r.body, TERM_TYPES):
        return ElementaryMacroRule(r.lhs, (), r.body, source)
    if isinstance(r.body, Case) and len(r.body.cases) == 1:
        b = r.body.cases[0]
        if b.conds and isinstance(b.body, TERM_TYPES) and all(isinstance(c, (Eq, Ineq, Def)) for c in b.conds):
            return ElementaryMacroRule(r.lhs, b.conds, b.body, source)
    return None


# --------------------------------------------------------------------------
# one-step rewrite rules

def _pred_to_eq(p, true_declared=True):
    if not true_declared:
        raise undeclared_true_error(p)
    return Eq(p.term, Const("true"), p.span)


def remove_predicates(c):
    """Rewrite the leftmost-innermost predicate atom in condition ``c``."""
    done = []

    def walk(x):
        if done:
            return x
        if isinstance(x, Pred):
            done.append(True)
            return _pred_to_eq(x)
        if isinstance(x, Not):
            return replace(x, arg=walk(x.arg))
        if isinstance(x, JUNCTORS):
            return replace(x, args=tuple(walk(a) for a in x.args))
        return x

    out = walk(c)
    if not done:
        raise ValueError("no predicate atom to remove")
    return out


def remove_if(m):
    return CaseElse((Branch(m.conds, m.then),), m.orelse, m.span)


def remove_else(m):
    else_conds = tuple(Or(tuple(Not(c, c.span) for c in b.conds), m.span) for b in m.cases)
    return Case(m.cases + (Branch(else_conds, m.orelse),), m.span)


def remove_not(n):
    x = n.arg
    if isinstance(x, Not):
        return x.arg
    if isinstance(x, And):
        return Or(tuple(Not(a, a.span) for a in x.args), x.span)
    if isinstance(x, SeqAnd):
        return SeqOr(tuple(Not(a, a.span) for a in x.args), x.span)
    if isinstance(x, Or):
        return And(tuple(Not(a, a.span) for a in x.args), x.span)
    if isinstance(x, SeqOr):
        return SeqAnd(tuple(Not(a, a.span) for a in x.args), x.span)
    if isinstance(x, Eq):
        return Ineq(x.lhs, x.rhs, x.span)
    if isinstance(x, Ineq):
        return Eq(x.lhs, x.rhs, x.span)
    if isinstance(x, (Def, Match, Let)):
        raise NotOverDef(f"{show(x)} cannot be negated", n.span)
    raise ValueError(f"not-removal does not apply to {show(n)}")


def remove_and(conds, p):
    return conds[:p] + conds[p].args + conds[p + 1:]


def remove_or(m, j, p):
    b = m.cases[j]
    new = tuple(Branch(b.conds[:p] + (g,) + b.conds[p + 1:], b.body) for g in b.conds[p].args)
    return Case(m.cases[:j] + new + m.cases[j + 1:], m.span)


def remove_seqor(m, j, p):
    b = m.cases[j]
    args = b.conds[p].args
    new = []
    for i, g in enumerate(args):
        negs = tuple(Not(a, a.span) for a in args[:i])
        new.append(Branch(b.conds[:p] + negs + (g,) + b.conds[p + 1:], b.body))
    return Case(m.cases[:j] + tuple(new) + m.cases[j + 1:], m.span)


def flatten_case_in_case(m, j):
    b = m.cases[j]
    inner = tuple(Branch(b.conds + ib.conds, ib.body) for ib in b.body.cases)
    return Case(m.cases[:j] + inner + m.cases[j + 1:], m.span)


def remove_match(conds, p):
    """Replace the single match at ``p``. Returns (conds, warning-or-None)."""
    m = conds[p]
    star = replace(m, star=True)
    if m.var in free_vars(m.term):
        return conds[:p] + (star,) + conds[p + 1:], rebind_match_warning(m)
    let = Let(m.term, m.var, m.span, m.origin)
    return conds[:p] + (star, let) + conds[p + 1:], None


def shift_match_left(conds, i):
    atom, m = conds[i], conds[i + 1]
    bad = free_vars(atom) & (free_vars(m.term) - {m.var})
    if bad:
        raise shift_capture_error(m, bad)
    return conds[:i] + (m, substitute(atom, m.var, m.term)) + conds[i + 2:]


def _let_warning(let):
    return rebind_let_warning(let) if let.var in free_vars(let.term) else None


def shift_let_right(conds, i):
    """Returns (conds, rebind-let warning or None)."""
    let, atom = conds[i], conds[i + 1]
    return conds[:i] + (substitute(atom, let.var, let.term), let) + conds[i + 2:], _let_warning(let)


def swap_let_match(conds, i):
    """Returns (conds, warnings); raises LetMatchSameVar when both bind the same variable.

    The let's own rebind warning is not among the warnings: callers report it
    before swapping, so it survives the error.
    """
    let, m = conds[i], conds[i + 1]
    if let.var == m.var:
        raise same_var_error(let, m)
    if let.var in free_vars(m.term):
        return conds[:i] + (m,) + conds[i + 2:], [let_dropped_warning(let, m)]
    moved = replace(let, term=substitute(let.term, m.var, m.term))
    return conds[:i] + (m, moved) + conds[i + 2:], []


def split_cases(r):
    return [replace(r, body=Case((b,), r.body.span)) for b in r.body.cases]


def remove_leading_match(r):
    b = r.body.cases[0]
    m = b.conds[0]
    bad = free_vars(r.lhs) & (free_vars(m.term) - {m.var})
    if bad:
        raise lhs_capture_error(m, bad)
    body = Case((Branch(b.conds[1:], b.body),), r.body.span)
    return replace(r, lhs=substitute(r.lhs, m.var, m.term), body=body)


def remove_trailing_let(m, j):
    """Returns (case-term, rebind-let warning or None)."""
    b = m.cases[j]
    let = b.conds[-1]
    new = Branch(b.conds[:-1], substitute(b.body, let.var, let.term))
    return Case(m.cases[:j] + (new,) + m.cases[j + 1:], m.span), _let_warning(let)


def remove_empty_case(r):
    return replace(r, body=r.body.cases[0].body)


# --------------------------------------------------------------------------
# positions: paths index the S-expression rendering of a macro-rule



def node_at(node, path):
    for i in path:
        node = _get(node, i)
    return node


def _get(node, i):
    if isinstance(node, MacroRule):
        return node.lhs if i == 1 else node.body
    if isinstance(node, tuple):
        return node[i]
    if isinstance(node, If):
        return (None, node.conds, node.then, node.orelse)[i]
    if isinstance(node, (Case, CaseElse)):
        k, r = divmod(i - 1, 2)
        if k < len(node.cases):
            return node.cases[k].conds if r == 0 else node.cases[k].body
        return node.orelse
    if isinstance(node, Not):
        return node.arg
    if isinstance(node, JUNCTORS):
        return node.args[i - 1]
    raise KeyError(i)


def replace_at(node, path, new):
    if not path:
        return new
    i, rest = path[0], path[1:]
    child = replace_at(_get(node, i), rest, new)
    if isinstance(node, MacroRule):
        return replace(node, lhs=child) if i == 1 else replace(node, body=child)
    if isinstance(node, tuple):
        return node[:i] + (child,) + node[i + 1:]
    if isinstance(node, If):
        field_name = {1: "conds", 2: "then", 3: "orelse"}[i]
        return replace(node, **{field_name: child})
    if isinstance(node, (Case, CaseElse)):
        k, r = divmod(i - 1, 2)
        if k < len(node.cases):
            b = node.cases[k]
            b = Branch(child, b.body) if r == 0 else Branch(b.conds, child)
            return replace(node, cases=node.cases[:k] + (b,) + node.cases[k + 1:])
        return replace(node, orelse=child)
    if isinstance(node, Not):
        return replace(node, arg=child)
    if isinstance(node, JUNCTORS):
        return replace(node, args=node.args[:i - 1] + (child,) + node.args[i:])
    raise KeyError(i)


# --------------------------------------------------------------------------
# redex enumeration

@dataclass
class Redex:
    rule: str
    item: int
    path: tuple  # position of the rewritten subexpression
    kind: str  # "node" | "list" | "case" | "item"
    arg: object = None  # rule-specific locator
    span: object = None


def _cond_redexes(c, path, item, out):
    if isinstance(c, Pred):
        out.append(Redex("predicate-removal", item, path, "node", span=c.span))
    elif isinstance(c, Not):
        _cond_redexes(c.arg, path + (1,), item, out)
        if not isinstance(c.arg, Pred):
            out.append(Redex("not-removal", item, path, "node", span=c.span))
    elif isinstance(c, JUNCTORS):
        for i, a in enumerate(c.args):
            _cond_redexes(a, path + (1 + i,), item, out)


def _list_redexes(conds, path, item, out):
    for p, c in enumerate(conds):
        if isinstance(c, (And, SeqAnd)):
            out.append(Redex("and-removal", item, path, "list", p, c.span))
        elif isinstance(c, Match) and not c.star:
            out.append(Redex("match-removal", item, path, "list", p, c.span))
    for p in range(len(conds) - 1):
        a, b = conds[p], conds[p + 1]
        if isinstance(a, BASIC_ATOMS) and isinstance(b, Match) and b.star:
            out.append(Redex("match*-shift-left", item, path, "list", p, b.span))
        elif isinstance(a, Let) and isinstance(b, BASIC_ATOMS):
            out.append(Redex("let-shift-right", item, path, "list", p, a.span))
        elif isinstance(a, Let) and isinstance(b, Match) and b.star:
            out.append(Redex("let-match*-swap", item, path, "list", p, a.span))


def _meta_redexes(m, path, item, out):
    if isinstance(m, If):
        for p, c in enumerate(m.conds):
            _cond_redexes(c, path + (1, p), item, out)
        _meta_redexes(m.then, path + (2,), item, out)
        _meta_redexes(m.orelse, path + (3,), item, out)
        out.append(Redex("if-removal", item, path, "node", span=m.span))
    elif isinstance(m, CaseElse):
        for k, b in enumerate(m.cases):
            for p, c in enumerate(b.conds):
                _cond_redexes(c, path + (1 + 2 * k, p), item, out)
            _meta_redexes(b.body, path + (2 + 2 * k,), item, out)
        _meta_redexes(m.orelse, path + (2 + 2 * len(m.cases),), item, out)
        out.append(Redex("else-removal", item, path, "node", span=m.span))
    elif isinstance(m, Case):
        for k, b in enumerate(m.cases):
            lpath = path + (1 + 2 * k,)
            for p, c in enumerate(b.conds):
                _cond_redexes(c, lpath + (p,), item, out)
            _list_redexes(b.conds, lpath, item, out)
            _meta_redexes(b.body, path + (2 + 2 * k,), item, out)
        for k, b in enumerate(m.cases):
            for p, c in enumerate(b.conds):
                if isinstance(c, Or):
                    out.append(Redex("or-removal", item, path, "case", (k, p), c.span))
                elif isinstance(c, SeqOr):
                    out.append(Redex("or*-removal", item, path, "case", (k, p), c.span))
            if isinstance(b.body, Case):
                out.append(Redex("case-in-case-removal", item, path, "case", k, b.body.span))
            if b.conds and isinstance(b.conds[-1], Let) and isinstance(b.body, TERM_TYPES):
                out.append(Redex("let-removal", item, path, "case", k, b.conds[-1].span))


def redexes(items):
    """All (rule, redex) pairs of a worklist, in leftmost-innermost order."""
    out = []
    for i, r in enumerate(items):
        _meta_redexes(r.body, (2,), i, out)
        body = r.body
        if isinstance(body, Case):
            if len(body.cases) != 1:
                out.append(Redex("splitting", i, (), "item", span=r.span))
            else:
                b = body.cases[0]
                if b.conds and isinstance(b.conds[0], Match) and b.conds[0].star:
                    out.append(Redex("match*-removal", i, (), "item", span=b.conds[0].span))
                elif not b.conds and isinstance(b.body, TERM_TYPES):
                    out.append(Redex("empty-case-removal", i, (), "item", span=r.span))
    return out


# --------------------------------------------------------------------------
# driver

@dataclass(frozen=True)
class TraceStep:
    n: int
    rule: str
    span: object
    item: int
    path: tuple
    before: object  # SExpr
    after: tuple  # of SExpr

    def format(self):
        lines = [f"STEP {self.n} {self.rule} @{self.span or UNKNOWN_SPAN}",
                 f"  - {print_sexpr(self.before)}"]
        lines += [f"  + {print_sexpr(a)}" for a in self.after]
        return "\n".join(lines)


@dataclass
class RuleOutcome:
    """Normalization of one source macro-rule."""

    source: int
    elementary: list
    diagnostics: list
    trace: list
    steps: int

    @property
    def erroneous(self):
        return any(d.is_error for d in self.diagnostics)


@dataclass
class NormalizeResult:
    outcomes: list

    @property
    def rules(self):
        """Elementary rules of all non-erroneous macro-rules, in derivation order."""
        return [e for o in self.outcomes if not o.erroneous for e in o.elementary]

    @property
    def diagnostics(self):
        return sort_diagnostics(d for o in self.outcomes for d in o.diagnostics)

    @property
    def trace(self):
        return [s for o in self.outcomes for s in o.trace]

    @property
    def has_errors(self):
        return any(o.erroneous for o in self.outcomes)


class _Diags:
    def __init__(self):
        self.seen = set()
        self.items = []

    def add(self, d):
        if d is not None and d not in self.seen:
            self.seen.add(d)
            self.items.append(d)


def _fire(items, rx, true_declared, diags):
    """Apply redex ``rx``.

    Returns the new worklist plus, for the trace, the path that was rewritten
    and the (before, after) pair found there.
    """
    item = items[rx.item]
    if rx.kind == "item":
        if rx.rule == "splitting":
            new = split_cases(item)
        elif rx.rule == "match*-removal":
            try:
                new = [remove_leading_match(item)]
            except MacroRuleError as e:
                diags.add(e.to_diagnostic())
                new = []
        else:
            new = [remove_empty_case(item)]
        before, after = to_sexpr(item), tuple(to_sexpr(x) for x in new)
        return items[:rx.item] + new + items[rx.item + 1:], (), before, after

    old = node_at(item, rx.path)
    new = None
    try:
        if rx.rule == "predicate-removal":
            try:
                new = _pred_to_eq(old, true_declared)
            except UndeclaredTrue as e:
                # keep going so later diagnostics are still found; the rule is dropped anyway
                diags.add(e.to_diagnostic())
                new = _pred_to_eq(old)
        elif rx.rule == "if-removal":
            new = remove_if(old)
        elif rx.rule == "else-removal":
            if any(not b.conds for b in old.cases):
                diags.add(unreachable_else_warning(old))
            new = remove_else(old)
        elif rx.rule == "not-removal":
            new = remove_not(old)
        elif rx.rule == "and-removal":
            new = remove_and(old, rx.arg)
        elif rx.rule == "match-removal":
            new, w = remove_match(old, rx.arg)
            diags.add(w)
        elif rx.rule == "match*-shift-left":
            new = shift_match_left(old, rx.arg)
        elif rx.rule == "let-shift-right":
            new, w = shift_let_right(old, rx.arg)
            diags.add(w)
        elif rx.rule == "let-match*-swap":
            diags.add(_let_warning(old[rx.arg]))
            new, ws = swap_let_match(old, rx.arg)
            for w in ws:
                diags.add(w)
        elif rx.rule == "or-removal":
            new = remove_or(old, *rx.arg)
        elif rx.rule == "or*-removal":
            new = remove_seqor(old, *rx.arg)
        elif rx.rule == "case-in-case-removal":
            new = flatten_case_in_case(old, rx.arg)
        elif rx.rule == "let-removal":
            new, w = remove_trailing_let(old, rx.arg)
            diags.add(w)
        else:
            raise AssertionError(rx.rule)
    except (MatchShiftCapture, LetMatchSameVar, NotOverDef) as e:
        diags.add(e.to_diagnostic())
        if rx.kind == "list":
            # drop the whole erroneous case from its case-term
            case_path, k = rx.path[:-1], (rx.path[-1] - 1) // 2
            case = node_at(item, case_path)
            new_case = Case(case.cases[:k] + case.cases[k + 1:], case.span)
            new_item = replace_at(item, case_path, new_case)
            items = items[:rx.item] + [new_item] + items[rx.item + 1:]
            return items, case_path, to_sexpr(case), (to_sexpr(new_case),)
        raise
    new_item = replace_at(item, rx.path, new)
    return items[:rx.item] + [new_item] + items[rx.item + 1:], rx.path, to_sexpr(old), (to_sexpr(new),)


def normalize_rule(rule, true_declared=True, rng=None, trace=False, source=0, max_steps=MAX_STEPS):
    """Normalize a single macro-rule. ``rng`` selects the randomized strategy."""
    items = [rule]
    diags = _Diags()
    steps = []
    n = 0
    while True:
        candidates = redexes(items)
        if not candidates:
            break
        if rng is None:
            rx = min(candidates, key=lambda r: _RANK[r.rule])
        else:
            rx = candidates[rng.randrange(len(candidates))]
        n += 1
        if n > max_steps:
            raise StepBudgetExceeded(f"no normal form after {max_steps} steps", rule.span)
        items, path, before, after = _fire(items, rx, true_declared, diags)
        if trace:
            steps.append(TraceStep(n, rx.rule, rx.span, rx.item, path, before, after))
    elementary = []
    for r in items:
        e = as_elementary(r, source)
        if e is None:
            raise InternalNotElementary(f"irreducible but not elementary: {show(r)}", rule.span)
        elementary.append(e)
    return RuleOutcome(source, elementary, diags.items, steps, n)


def normalize(spec, seed=None, trace=False, max_steps=MAX_STEPS):
    """Desugar every macro-rule of ``spec``.

    With ``seed=None`` the deterministic strategy is used; otherwise redexes
    are drawn from ``random.Random(seed)``.
    """
    rng = None if seed is None else random.Random(seed)
    true_declared = "true" in spec.symbols.constants
    outcomes = [normalize_rule(r, true_declared, rng, trace, i, max_steps) for i, r in enumerate(spec.rules)]
    return NormalizeResult(outcomes)
