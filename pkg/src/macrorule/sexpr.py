"""Reading and printing S-expressions with source locations.

Every node records the span it was read from. Spans are ignored by ``==`` so
that trees produced by different routes (parsing, printing, rewriting) can be
compared structurally.
"""

from dataclasses import dataclass, field

from .diagnostics import IllegalCharacter, SourceSpan, UnbalancedParen

_ILLEGAL = set("\"'`")


@dataclass(frozen=True)
class Atom:
    text: str
    span: SourceSpan = field(default=None, compare=False, repr=False)

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple = ()
    span: SourceSpan = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self):
        return iter(self.items)

    def __str__(self):
        return print_sexpr(self)

    def head(self):
        """Text of the first item when it is an atom, else None."""
        if self.items and isinstance(self.items[0], Atom):
            return self.items[0].text
        return None


def is_symbol_char(ch):
    return not (ch.isspace() or ch in "();" or ch in _ILLEGAL or not ch.isprintable())


def _tokens(text, file):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
        elif ch in "()":
            yield ch, line, col, line, col
            i += 1
            col += 1
        elif is_symbol_char(ch):
            j = i
            while j < n and is_symbol_char(text[j]):
                j += 1
            yield text[i:j], line, col, line, col + (j - i) - 1
            col += j - i
            i = j
        else:
            raise IllegalCharacter(f"illegal character {ch!r}", SourceSpan(file, line, col, line, col))


def parse_sexprs(text, file="<string>"):
    """Read all top-level expressions in ``text``."""
    out = []
    stack = []  # (open-line, open-col, items)
    for tok, l0, c0, l1, c1 in _tokens(text, file):
        if tok == "(":
            stack.append((l0, c0, []))
        elif tok == ")":
            if not stack:
                raise UnbalancedParen("unexpected ')'", SourceSpan(file, l0, c0, l1, c1))
            sl, sc, items = stack.pop()
            node = SList(tuple(items), SourceSpan(file, sl, sc, l1, c1))
            (stack[-1][2] if stack else out).append(node)
        else:
            node = Atom(tok, SourceSpan(file, l0, c0, l1, c1))
            (stack[-1][2] if stack else out).append(node)
    if stack:
        sl, sc, _ = stack[-1]
        raise UnbalancedParen("unclosed '('", SourceSpan(file, sl, sc, sl, sc))
    return out


def parse_one(text, file="<string>"):
    exprs = parse_sexprs(text, file)
    if len(exprs) != 1:
        from .diagnostics import GrammarError

        raise GrammarError(f"expected exactly one expression, found {len(exprs)}",
                           SourceSpan(file, 1, 1, 1, 1))
    return exprs[0]


def print_sexpr(e):
    if isinstance(e, Atom):
        return e.text
    return "(" + " ".join(print_sexpr(x) for x in e.items) + ")"


def sexpr_at(e, path):
    for i in path:
        e = e.items[i]
    return e


def sexpr_replace(e, path, new):
    """Return ``e`` with the subtree at ``path`` replaced by ``new``."""
    if not path:
        return new
    i = path[0]
    items = list(e.items)
    items[i] = sexpr_replace(items[i], path[1:], new)
    return SList(tuple(items), e.span)
