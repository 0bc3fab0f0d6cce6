"""Single-pass diagnostics for a parsed specification.

The pass never builds rewritten syntax. It enumerates, for every macro-rule,
the condition paths that the connective and case rules would produce, and then
replays the match/let phase of the deterministic strategy on *variable sets*
only: a basic atom is represented by the variables it mentions, a match or let
by its variable and the variables of its term. That is all the error and
warning conditions look at, so the diagnostics come out exactly as full
desugaring would report them, with the same spans and text.
"""

from itertools import product

from .desugar import (
    lhs_capture_error,
    let_dropped_warning,
    rebind_let_warning,
    rebind_match_warning,
    same_var_error,
    shift_capture_error,
    undeclared_true_error,
    unreachable_else_warning,
)
from .diagnostics import sort_diagnostics
from .surface import (
    And,
    Case,
    CaseElse,
    Def,
    Eq,
    If,
    Ineq,
    Let,
    Match,
    Not,
    Or,
    Pred,
    SeqAnd,
    SeqOr,
    free_vars,
)


class _Atom:
    __slots__ = ("vars",)

    def __init__(self, vs):
        self.vars = vs


class _Bind:
    """A match* or let on the path: its variable, its term's variables, its source node."""

    __slots__ = ("kind", "var", "vars", "node")

    def __init__(self, kind, var, vs, node):
        self.kind, self.var, self.vars, self.node = kind, var, vs, node


def _subst(vs, var, tvs):
    return (vs - {var}) | tvs if var in vs else vs


def _concat(alternative_lists):
    """Cartesian concatenation of a sequence of alternative lists."""
    return [sum(combo, []) for combo in product(*alternative_lists)]


def expand(c, negated=False):
    """Alternatives (lists of path items) a condition turns into after connective removal."""
    if isinstance(c, (Eq, Ineq, Pred, Def)):
        return [[_Atom(frozenset(free_vars(c)))]]
    if isinstance(c, Match):
        return [[c]]
    if isinstance(c, Let):
        return [[_Bind("let", c.var, frozenset(free_vars(c.term)), c)]]
    if isinstance(c, Not):
        return expand(c.arg, not negated)
    args = c.args
    conjunctive = isinstance(c, (And, SeqAnd)) != negated
    if conjunctive:
        return _concat([expand(a, negated) for a in args])
    sequential = isinstance(c, (SeqAnd, SeqOr))
    out = []
    for i, a in enumerate(args):
        if sequential:
            # earlier arguments appear with the opposite polarity
            out += _concat([expand(b, not negated) for b in args[:i]] + [expand(a, negated)])
        else:
            out += expand(a, negated)
    return out


def paths(m):
    """Condition paths of a meta-term: each is a list of path items."""
    if isinstance(m, If):
        return _case_else_paths(((m.conds, m.then),), m.orelse)
    if isinstance(m, CaseElse):
        return _case_else_paths(m.cases, m.orelse)
    if isinstance(m, Case):
        out = []
        for conds, body in m.cases:
            for alt in _concat([expand(c) for c in conds]):
                out += [alt + p for p in paths(body)]
        return out
    return [[]]


def _case_else_paths(cases, orelse):
    out = []
    for conds, body in cases:
        for alt in _concat([expand(c) for c in conds]):
            out += [alt + p for p in paths(body)]
    # the else branch: for every case, one of its conditions fails
    negs = [[alt for c in conds for alt in expand(c, True)] for conds, _ in cases]
    for alt in _concat(negs):
        out += [alt + p for p in paths(orelse)]
    return out


def _walk_static(x, table_has_true, out):
    if isinstance(x, Pred):
        if not table_has_true:
            out.append(undeclared_true_error(x).to_diagnostic())
    elif isinstance(x, Not):
        _walk_static(x.arg, table_has_true, out)
    elif isinstance(x, (And, Or, SeqAnd, SeqOr)):
        for a in x.args:
            _walk_static(a, table_has_true, out)
    elif isinstance(x, If):
        if not x.conds:
            out.append(unreachable_else_warning(x))
        for c in x.conds:
            _walk_static(c, table_has_true, out)
        _walk_static(x.then, table_has_true, out)
        _walk_static(x.orelse, table_has_true, out)
    elif isinstance(x, (Case, CaseElse)):
        if isinstance(x, CaseElse):
            if any(not conds for conds, _ in x.cases):
                out.append(unreachable_else_warning(x))
            _walk_static(x.orelse, table_has_true, out)
        for conds, body in x.cases:
            for c in conds:
                _walk_static(c, table_has_true, out)
            _walk_static(body, table_has_true, out)


def _check_path(lhs_vars, items, out):
    seq = []
    for it in items:
        if isinstance(it, Match):
            tvs = frozenset(free_vars(it.term))
            if not it.star and it.var in tvs:
                out.append(rebind_match_warning(it))
            seq.append(_Bind("match", it.var, tvs, it))
            if not it.star and it.var not in tvs:
                seq.append(_Bind("let", it.var, tvs, Let(it.term, it.var, it.span, it.origin)))
        else:
            seq.append(it)

    def is_atom(x):
        return isinstance(x, _Atom)

    def is_kind(x, kind):
        return isinstance(x, _Bind) and x.kind == kind

    def encounter(let):
        if let.var in let.vars:
            out.append(rebind_let_warning(let.node))

    while True:
        i = next((i for i in range(len(seq) - 1) if is_atom(seq[i]) and is_kind(seq[i + 1], "match")), None)
        if i is not None:
            atom, m = seq[i], seq[i + 1]
            bad = atom.vars & (m.vars - {m.var})
            if bad:
                out.append(shift_capture_error(m.node, bad).to_diagnostic())
                return
            seq[i:i + 2] = [m, _Atom(_subst(atom.vars, m.var, m.vars))]
            continue
        i = next((i for i in range(len(seq) - 1) if is_kind(seq[i], "let") and is_atom(seq[i + 1])), None)
        if i is not None:
            let, atom = seq[i], seq[i + 1]
            encounter(let)
            seq[i:i + 2] = [_Atom(_subst(atom.vars, let.var, let.vars)), let]
            continue
        i = next((i for i in range(len(seq) - 1) if is_kind(seq[i], "let") and is_kind(seq[i + 1], "match")),
                 None)
        if i is None:
            break
        let, m = seq[i], seq[i + 1]
        encounter(let)
        if let.var == m.var:
            out.append(same_var_error(let.node, m.node).to_diagnostic())
            return
        if let.var in m.vars:
            out.append(let_dropped_warning(let.node, m.node))
            seq[i:i + 2] = [m]
        else:
            seq[i:i + 2] = [m, _Bind("let", let.var, _subst(let.vars, m.var, m.vars), let.node)]

    while seq and is_kind(seq[0], "match"):
        m = seq.pop(0)
        bad = lhs_vars & (m.vars - {m.var})
        if bad:
            out.append(lhs_capture_error(m.node, bad).to_diagnostic())
            return
        lhs_vars = _subst(lhs_vars, m.var, m.vars)
    for it in reversed(seq):
        if is_kind(it, "let"):
            encounter(it)


def precheck_rule(rule, true_declared=True):
    out = []
    _walk_static(rule.body, true_declared, out)
    lhs_vars = frozenset(free_vars(rule.lhs))
    for items in paths(rule.body):
        _check_path(lhs_vars, items, out)
    seen, unique = set(), []
    for d in out:
        if d not in seen:
            seen.add(d)
            unique.append(d)
    return unique


def precheck(spec):
    """Every diagnostic desugaring ``spec`` will produce, without desugaring it."""
    true_declared = "true" in spec.symbols.constants
    return sort_diagnostics(d for r in spec.rules for d in precheck_rule(r, true_declared))
