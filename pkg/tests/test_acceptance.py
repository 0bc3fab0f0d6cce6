"""Acceptance suite: one test per criterion.

Each test carries a ``criterion`` number; conftest prints one PASS/FAIL line
per criterion at the end of the run. Run just this file with::

    pytest tests/test_acceptance.py
"""

import random
import time
from collections import Counter

from conftest import FIXTURES, compile_file, compile_text
from macrorule import Budget, corpus_path, normalize, normalize_term, parse_rules, precheck, print_rules, read_spec
from macrorule import system_equal
from macrorule.rulesys import ConditionalRule, RuleSystem
from macrorule.sexpr import Atom, SList, parse_one, parse_sexprs, print_sexpr
from macrorule.surface import App, Const, Def, Eq, Ineq, Var, build_symbol_table, parse_term, show
from naive_eval import GiveUp, Naive, read_term
from querygen import arith_query, list_query


def criterion(n):
    def mark(fn):
        fn.criterion = n
        return fn
    return mark


def rules_of(text, symbols):
    return parse_rules(text, symbols=symbols)


@criterion(1)
def test_golden_memberp_v1():
    """Golden memberp-v1: exactly the three golden rules, in under a second."""
    start = time.perf_counter()
    rs, diags = compile_file(corpus_path("memberp_v1.mr"))
    elapsed = time.perf_counter() - start
    expected = rules_of("""
        (rule (memberp x nil) false ())
        (rule (memberp x (cons y m)) true ((= x y)))
        (rule (memberp x (cons y m)) (memberp x m) ((# x y)))""", rs.symbols)
    assert diags == []
    assert system_equal(rs, expected)
    assert elapsed < 1.0


@criterion(2)
def test_golden_memberp_v2():
    """Golden memberp-v2: four rules, the false rule with its conditions in golden order."""
    rs, diags = compile_file(corpus_path("memberp_v2.mr"))
    expected = rules_of("""
        (rule (memberp x nil) false ())
        (rule (memberp x (cons y m)) true ((= x y)))
        (rule (memberp x (cons y m)) true ((= (memberp x m) true)))
        (rule (memberp x (cons y m)) false ((# x y) (# (memberp x m) true)))""", rs.symbols)
    assert diags == [] and len(rs) == 4
    assert system_equal(rs, expected)


@criterion(3)
def test_golden_equal_l():
    """Golden equal-l: golden true rules verbatim, false rules as derived by hand."""
    rs, diags = compile_file(corpus_path("equal_l.mr"))
    head = [r for r in rs.rules if r.lhs.fn == "equal-l"]
    true_rules = rules_of("""
        (rule (equal-l l) true ((= (cdr l) nil)))
        (rule (equal-l l) true ((# (cdr l) nil) (= (equal-l (cdr l)) true) (= (car l) (car (cdr l)))))""",
                          rs.symbols)
    # else condition (not (or* A (and B C))) -> (and* (not A) (or (not B) (not C)))
    false_rules = rules_of("""
        (rule (equal-l l) false ((# (cdr l) nil) (# (equal-l (cdr l)) true)))
        (rule (equal-l l) false ((# (cdr l) nil) (# (car l) (car (cdr l)))))""", rs.symbols)
    assert diags == []
    assert system_equal(RuleSystem(rs.symbols, [r for r in head if show(r.rhs) == "true"]), true_rules)
    assert system_equal(RuleSystem(rs.symbols, [r for r in head if show(r.rhs) == "false"]), false_rules)


@criterion(4)
def test_golden_p_and_delete():
    """Golden p/delete: p (s u) = u unconditionally; delete gives the three golden rules."""
    rs, _ = compile_text("(vars x u)(consts 0)(funs (s 1) (p 1)) (macro-rule (p x) (case ((match x (s u))) u))")
    assert rs.rules == [ConditionalRule(App("p", (App("s", (Var("u"),)),)), Var("u"), ())]
    rs, diags = compile_file(corpus_path("delete.mr"))
    delete = [r for r in rs.rules if r.lhs.fn == "delete"]
    table = rules_of("""
        (rule (delete x nil) nil ())
        (rule (delete x (cons y k)) (delete x k) ((= x y)))
        (rule (delete x (cons y k)) (cons y (delete x k)) ((# x y)))""", rs.symbols).rules
    assert diags == [] and len(delete) == 3
    assert delete[1] == table[1] and delete[2] == table[2]
    assert system_equal(RuleSystem(rs.symbols, delete), RuleSystem(rs.symbols, table))


LITERALS = ["(= x0 c0)", "(# x1 c1)", "(= x2 c2)", "(# x3 c3)", "(= x4 c4)", "(# x5 c5)"]


def _negated(lit):
    return ("(# " if lit.startswith("(=") else "(= ") + lit[3:]


def _expansion_spec(conds):
    decls = "(vars {})(consts {} r0 r1)(funs (f 1))".format(
        " ".join(f"x{i}" for i in range(6)), " ".join(f"c{i}" for i in range(6)))
    return decls + f" (macro-rule (f x0) (if {conds} r0 r1))"


@criterion(5)
def test_expansion_count_law():
    """Expansion counts: (if (L0..Ln) r0 r1) and (if ((and* L0..Ln)) r0 r1) give n+2 rules of the stated shapes."""
    for n in (0, 1, 2, 3, 5):
        lits = LITERALS[:n + 1]
        # conjunctive list: one rule for all literals, one per negated literal
        rs, _ = compile_text(_expansion_spec("(" + " ".join(lits) + ")"))
        expected = [f"(rule (f x0) r0 ({' '.join(lits)}))"]
        expected += [f"(rule (f x0) r1 ({_negated(lit)}))" for lit in lits]
        assert len(rs) == n + 2
        assert system_equal(rs, rules_of("\n".join(expected), rs.symbols))
        # sequential conjunction: rule i+1 keeps the earlier literals positive
        rs, _ = compile_text(_expansion_spec(f"((and* {' '.join(lits)}))"))
        expected = [f"(rule (f x0) r0 ({' '.join(lits)}))"]
        expected += [f"(rule (f x0) r1 ({' '.join(lits[:i] + [_negated(lits[i])])}))" for i in range(n + 1)]
        assert len(rs) == n + 2
        assert system_equal(rs, rules_of("\n".join(expected), rs.symbols))


CORPUS = ["memberp_v1.mr", "memberp_v2.mr", "delete.mr", "delete_rules.mr", "equal_l.mr", "equal_l_or.mr",
          "arith.mr", "p_eq.mr", "trees.mr"]


@criterion(6)
def test_confluence_and_termination():
    """Confluence: 200 random strategies reproduce the deterministic rules on the whole corpus within 60 s."""
    start = time.perf_counter()
    specs = [read_spec(corpus_path(name)) for name in CORPUS]
    reference = [compile_file(corpus_path(name))[0] for name in CORPUS]
    max_steps = 0
    for seed in range(200):
        for spec, ref in zip(specs, reference):
            # normalize raises StepBudgetExceeded past 10**6 steps per macro-rule
            result = normalize(spec, seed=seed)
            max_steps = max([max_steps] + [o.steps for o in result.outcomes])
            assert not result.diagnostics
            assert system_equal(RuleSystem(spec.symbols, [ConditionalRule(e.lhs, e.rhs, tuple(e.conditions))
                                                          for e in result.rules]), ref)
    assert max_steps < 10**6
    assert time.perf_counter() - start < 60


DIAGNOSTIC_FIXTURES = {
    "rebind_match.mr": ("rebind-match", "(match l (cons x l))"),
    "rebind_let.mr": ("rebind-let", "(let (cons x l) l)"),
    "swap_dropped_let.mr": ("let-rebound-by-match", "(let (s x) y)"),
    "swap_same_var.mr": ("let-match-same-var", "(let (s x) z)"),
    "shift_capture.mr": ("match-shift-capture", "(match z (cons y k))"),
    "lhs_capture.mr": ("lhs-match-capture", "(match x (s y))"),
}


@criterion(7)
def test_diagnostics():
    """Diagnostics: each fixture reports its code quoting the construct; precheck agrees with desugaring."""
    for name, (code, construct) in DIAGNOSTIC_FIXTURES.items():
        spec = read_spec(FIXTURES / name)
        full = normalize(spec).diagnostics
        assert [d.code for d in full] == [code], name
        assert construct in full[0].message, name
        assert Counter(precheck(spec)) == Counter(full), name


@criterion(8)
def test_evaluator_matches_naive_interpreter():
    """Evaluator: agrees with the naive interpreter on 500+ random ground queries; pot and delete examples."""
    compared = 0
    for name in ["arith.mr", "delete.mr", "memberp_v1.mr", "memberp_v2.mr", "equal_l.mr"]:
        rs, _ = compile_file(corpus_path(name))
        naive = Naive(print_rules(rs, declarations=True))
        rng = random.Random(f"acceptance-{name}")
        for _ in range(150):
            q = arith_query(rng, 6) if name == "arith.mr" else list_query(rng, 6, rs.symbols.functions)
            try:
                expected = naive.ev(read_term(parse_one(q)))
            except GiveUp:
                continue
            out = normalize_term(parse_term(parse_one(q), rs.symbols), rs)
            assert out.status == "complete", q
            assert read_term(parse_one(show(out.result))) == expected, q
            compared += 1
    assert compared >= 500

    arith, _ = compile_file(corpus_path("arith.mr"))
    out = normalize_term(parse_term(parse_one("(pot (s (s 0)) (s (s 0)))"), arith.symbols), arith)
    assert show(out.result) == "(s (s (s (s 0))))"
    delete, _ = compile_file(corpus_path("delete.mr"))
    out = normalize_term(parse_term(parse_one("(delete (s 0) (cons 0 (cons (s 0) nil)))"), delete.symbols), delete)
    assert show(out.result) == "(cons 0 nil)"


@criterion(9)
def test_non_termination_witness():
    """Non-termination: equal-l with plain or exhausts a 10^4-step budget on (equal-l nil); the or* form completes."""
    budget = Budget(max_steps=10_000)
    for name, status in [("equal_l_or.mr", "budget-exhausted"), ("equal_l.mr", "complete")]:
        rs, _ = compile_file(corpus_path(name))
        out = normalize_term(parse_term(parse_one("(equal-l nil)"), rs.symbols), rs, budget)
        assert out.status == status, name
    assert show(out.result) == "true"


def _random_sexpr(rng, depth):
    if depth == 0 or rng.random() < 0.35:
        return Atom(rng.choice(["a", "b", "x1", "nil", "+", "*", "=", "#", "match*", "0", "cons", "-x-"]))
    return SList(tuple(_random_sexpr(rng, depth - 1) for _ in range(rng.randrange(5))))


_SYMS = build_symbol_table(parse_sexprs("(vars x y z)(consts a b nil)(funs (f 1) (g 2) (cons 2))"))


def _random_term(rng, depth, ground=False):
    if depth == 0 or rng.random() < 0.4:
        return rng.choice([Const("a"), Const("b"), Const("nil")] + ([] if ground else [Var("x"), Var("y")]))
    fn = rng.choice(["f", "g", "cons"])
    return App(fn, tuple(_random_term(rng, depth - 1, ground) for _ in range(_SYMS.functions[fn])))


def _random_rule(rng):
    lhs = App("g", (_random_term(rng, 2), _random_term(rng, 2)))
    conds = []
    for _ in range(rng.randrange(4)):
        kind = rng.randrange(3)
        if kind == 2:
            conds.append(Def(_random_term(rng, 2)))
        else:
            conds.append((Eq, Ineq)[kind](_random_term(rng, 2), _random_term(rng, 2)))
    return ConditionalRule(lhs, _random_term(rng, 3), tuple(conds))


@criterion(10)
def test_round_trips():
    """Round trips: s-expression and rule-file print/parse are identities on 1000 random instances each."""
    rng = random.Random(10)
    for _ in range(1000):
        e = _random_sexpr(rng, 5)
        assert parse_sexprs(print_sexpr(e)) == [e]
    for _ in range(1000):
        rs = RuleSystem(_SYMS, [_random_rule(rng) for _ in range(rng.randrange(1, 4))])
        back = parse_rules(print_rules(rs, declarations=True))
        assert back.rules == rs.rules
