"""Operational interpreter for positive/negative-conditional rule systems.

The reading of negative conditions is an approximation that is decidable on
ground terms:

* ``a = b`` holds iff both sides normalize to the same term;
* ``a # b`` holds iff both normalize to distinct constructor-ground terms;
* ``def a`` holds iff ``a`` normalizes to a constructor-ground term.

A constructor is any function or constant that never heads a rule's
left-hand side. When a side is not constructor-ground the answer is
``UNKNOWN`` rather than a guess, and a result that depended on it is reported
as incomplete.

Reduction is leftmost-innermost; at each position rules are tried in system
order and the first one whose conditions all hold fires. Condition evaluation
recurses into normalization and shares one step budget with it.
"""

from dataclasses import dataclass

from .rulesys import ConditionalRule
from .surface import App, Const, Def, Eq, Var, apply_subst, is_ground

HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"
COMPLETE, EXHAUSTED = "complete", "budget-exhausted"


@dataclass
class Budget:
    max_steps: int = 100_000
    max_condition_depth: int = 64


@dataclass(frozen=True)
class EvalOutcome:
    result: object
    status: str
    steps_used: int

    def format(self):
        from .surface import show

        return f"{show(self.result)} ; steps={self.steps_used} ; status={self.status}"


def match_term(pattern, subject, sigma=None):
    """Extend ``sigma`` so that pattern·sigma == subject, or return None."""
    sigma = dict(sigma or {})
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
        elif isinstance(p, Const):
            if not (isinstance(s, Const) and s.name == p.name):
                return None
        else:
            if not (isinstance(s, App) and s.fn == p.fn and len(s.args) == len(p.args)):
                return None
            stack.extend(zip(p.args, s.args))
    return sigma


def defined_symbols(rules):
    return {r.lhs.fn for r in rules.rules}


def _constructor_ground(t, defined):
    if isinstance(t, Const):
        return True
    if isinstance(t, App):
        return t.fn not in defined and all(_constructor_ground(a, defined) for a in t.args)
    return False


class _Machine:
    def __init__(self, rules, budget):
        self.rules = list(rules.rules)
        self.defined = defined_symbols(rules)
        self.budget = budget
        self.steps = 0
        self.exhausted = False  # sticky: no further steps once set
        self.incomplete = False
        self.by_head = {}
        for r in self.rules:
            self.by_head.setdefault(r.lhs.fn, []).append(r)

    def normalize(self, t, depth):
        if self.exhausted or not isinstance(t, App):
            return t
        args = tuple(self.normalize(a, depth) for a in t.args)
        t = App(t.fn, args) if args != t.args else t
        while not self.exhausted:
            nxt = self.rewrite_root(t, depth)
            if nxt is None:
                return t
            t = nxt
            if not isinstance(t, App):
                return t
            args = tuple(self.normalize(a, depth) for a in t.args)
            t = App(t.fn, args) if args != t.args else t
        return t

    def rewrite_root(self, t, depth):
        skipped = False
        for r in self.by_head.get(t.fn, ()):
            sigma = match_term(r.lhs, t)
            if sigma is None:
                continue
            status, sigma = self.conditions(r.conditions, sigma, depth)
            if status == HOLDS:
                if self.steps >= self.budget.max_steps:
                    self.exhausted = True
                    return None
                self.steps += 1
                return apply_subst(r.rhs, sigma)
            if status == UNKNOWN:
                skipped = True
            if self.exhausted:
                return None
        if skipped:
            self.incomplete = True
        return None

    def conditions(self, conds, sigma, depth):
        for c in conds:
            status, sigma = self.condition(c, sigma, depth)
            if status != HOLDS:
                return status, sigma
        return HOLDS, sigma

    def condition(self, c, sigma, depth):
        if depth >= self.budget.max_condition_depth:
            self.exhausted = True
            return UNKNOWN, sigma
        if isinstance(c, Def):
            t = apply_subst(c.arg, sigma)
            if not is_ground(t):
                return UNKNOWN, sigma
            nf = self.normalize(t, depth + 1)
            if self.exhausted:
                return UNKNOWN, sigma
            return (HOLDS if _constructor_ground(nf, self.defined) else FAILS), sigma
        a, b = apply_subst(c.lhs, sigma), apply_subst(c.rhs, sigma)
        if isinstance(c, Eq) and is_ground(a) != is_ground(b):
            # one side still has unbound variables: solve it by matching
            ground, pattern = (a, b) if is_ground(a) else (b, a)
            nf = self.normalize(ground, depth + 1)
            if self.exhausted:
                return UNKNOWN, sigma
            ext = match_term(pattern, nf, sigma)
            return (HOLDS, ext) if ext is not None else (FAILS, sigma)
        if not (is_ground(a) and is_ground(b)):
            return UNKNOWN, sigma
        na = self.normalize(a, depth + 1)
        nb = self.normalize(b, depth + 1)
        if self.exhausted:
            return UNKNOWN, sigma
        if isinstance(c, Eq):
            return (HOLDS if na == nb else FAILS), sigma
        if not (_constructor_ground(na, self.defined) and _constructor_ground(nb, self.defined)):
            return UNKNOWN, sigma
        return (HOLDS if na != nb else FAILS), sigma


def eval_condition(atom, sigma, rules, budget=None):
    """Evaluate one condition atom under ``sigma``; returns HOLDS, FAILS or UNKNOWN."""
    m = _Machine(rules, budget or Budget())
    status, _ = m.condition(atom, dict(sigma), 0)
    return status


def normalize_term(t, rules, budget=None):
    if not is_ground(t):
        raise ValueError("normalize_term needs a ground term")
    m = _Machine(rules, budget or Budget())
    result = m.normalize(t, 0)
    status = EXHAUSTED if (m.exhausted or m.incomplete) else COMPLETE
    return EvalOutcome(result, status, m.steps)


__all__ = [
    "Budget",
    "ConditionalRule",
    "EvalOutcome",
    "HOLDS",
    "FAILS",
    "UNKNOWN",
    "defined_symbols",
    "eval_condition",
    "match_term",
    "normalize_term",
]
