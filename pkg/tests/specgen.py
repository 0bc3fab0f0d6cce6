"""Random macro-rule specifications, as source text.

Variables are drawn from a small pool on purpose, so that matches and lets
collide often enough to exercise every warning and error path.
"""

HEADER = """(vars x y z u v)
(consts 0 nil true)
(funs (s 1) (c 2) (f 2) (g 1))
"""
VARS = ("x", "y", "z", "u", "v")


def term(rng, depth):
    r = rng.random()
    if depth <= 0 or r < 0.4:
        return rng.choice(VARS + ("0", "nil"))
    if r < 0.7:
        return f"(s {term(rng, depth - 1)})"
    return f"(c {term(rng, depth - 1)} {term(rng, depth - 1)})"


def negatable(rng, depth):
    r = rng.random()
    if depth <= 0 or r < 0.5:
        k = rng.randrange(3)
        if k == 0:
            return f"(= {term(rng, 1)} {term(rng, 1)})"
        if k == 1:
            return f"(# {term(rng, 1)} {term(rng, 1)})"
        return f"(g {term(rng, 1)})"
    if r < 0.6:
        return f"(not {negatable(rng, depth - 1)})"
    j = rng.choice(("and", "or", "and*", "or*"))
    return f"({j} {' '.join(negatable(rng, depth - 1) for _ in range(rng.randrange(4)))})"


def condition(rng, depth):
    r = rng.random()
    if r < 0.25:
        return f"(match {rng.choice(VARS)} {term(rng, 2)})"
    if r < 0.35:
        return f"(match* {rng.choice(VARS)} {term(rng, 2)})"
    if r < 0.5:
        return f"(let {term(rng, 2)} {rng.choice(VARS)})"
    if r < 0.55:
        return f"(def {term(rng, 1)})"
    if r < 0.65 and depth > 0:
        j = rng.choice(("and", "or"))
        return f"({j} {' '.join(condition(rng, depth - 1) for _ in range(1 + rng.randrange(2)))})"
    return negatable(rng, depth)


def meta(rng, depth):
    r = rng.random()
    if depth <= 0 or r < 0.3:
        return term(rng, 2)
    if r < 0.5:
        conds = " ".join(negatable(rng, 1) for _ in range(rng.randrange(3)))
        return f"(if ({conds}) {meta(rng, depth - 1)} {meta(rng, depth - 1)})"
    n = 1 + rng.randrange(3)
    if r < 0.7:
        pairs = " ".join(
            f"({' '.join(negatable(rng, 1) for _ in range(1 + rng.randrange(2)))}) {meta(rng, depth - 1)}"
            for _ in range(n))
        return f"(case {pairs} else {meta(rng, depth - 1)})"
    pairs = " ".join(
        f"({' '.join(condition(rng, 1) for _ in range(1 + rng.randrange(3)))}) {meta(rng, depth - 1)}"
        for _ in range(n))
    return f"(case {pairs})"


def macro_rule(rng, depth=3):
    lhs = rng.choice(("(f x y)", "(f (s x) y)", "(g x)", "(f x (c y z))"))
    return f"(macro-rule {lhs} {meta(rng, depth)})"


def spec_text(rng, n_rules=3, depth=3):
    return HEADER + "\n".join(macro_rule(rng, depth) for _ in range(n_rules)) + "\n"
