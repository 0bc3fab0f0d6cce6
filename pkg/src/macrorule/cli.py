"""``macrorule`` command line: compile, check, run, expand."""

import argparse
import sys

from .desugar import normalize, normalize_rule
from .diagnostics import MacroRuleError, sort_diagnostics
from .evaluator import Budget, normalize_term
from .precheck import precheck
from .rulesys import emit, parse_rules, print_rules
from .sexpr import parse_one, print_sexpr
from .surface import is_ground, parse_spec, parse_term, to_sexpr

OK, SPEC_ERROR, USAGE_ERROR = 0, 1, 2


class _UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e.strerror or e}") from e


def _report(diags, err):
    for d in sort_diagnostics(diags):
        print(d.format(), file=err)
    return SPEC_ERROR if any(d.is_error for d in diags) else OK


def _load_spec(path):
    """Parse a spec file; returns (spec, None) or (None, [error diagnostic])."""
    text = _read(path)
    try:
        return parse_spec(text, path), None
    except MacroRuleError as e:
        return None, [e.to_diagnostic()]


def cmd_compile(args, out, err):
    spec, diags = _load_spec(args.file)
    if spec is None:
        return _report(diags, err)
    try:
        result = normalize(spec, seed=args.seed, trace=args.trace)
    except MacroRuleError as e:
        return _report([e.to_diagnostic()], err)
    if args.trace:
        for step in result.trace:
            print(step.format(), file=err)
    rs = emit(result.rules, spec.symbols)
    mode = "pretty" if args.pretty else "canonical"
    text = print_rules(rs, mode, declarations=not args.pretty)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            raise _UsageError(f"cannot write {args.output}: {e.strerror or e}") from e
    else:
        out.write(text)
    return _report(spec.symbols.warnings + result.diagnostics, err)


def cmd_check(args, out, err):
    spec, diags = _load_spec(args.file)
    if spec is None:
        return _report(diags, err)
    return _report(spec.symbols.warnings + precheck(spec), err)


def _parse_query(text, symbols):
    try:
        t = parse_term(parse_one(text, "<term>"), symbols)
    except MacroRuleError as e:
        raise _UsageError(f"malformed --term: {e}") from e
    if not is_ground(t):
        raise _UsageError("--term must be a ground term")
    return t


def cmd_run(args, out, err):
    text = _read(args.file)
    if args.rules:
        try:
            rs = parse_rules(text, file=args.file)
        except MacroRuleError as e:
            return _report([e.to_diagnostic()], err)
    else:
        spec, diags = _load_spec(args.file)
        if spec is None:
            return _report(diags, err)
        try:
            result = normalize(spec)
        except MacroRuleError as e:
            return _report([e.to_diagnostic()], err)
        diags = spec.symbols.warnings + result.diagnostics
        if result.has_errors:
            return _report(diags, err)
        _report(diags, err)
        rs = emit(result.rules, spec.symbols)
    query = _parse_query(args.term, rs.symbols)
    budget = Budget() if args.max_steps is None else Budget(max_steps=args.max_steps)
    print(normalize_term(query, rs, budget).format(), file=out)
    return OK


def cmd_expand(args, out, err):
    spec, diags = _load_spec(args.file)
    if spec is None:
        return _report(diags, err)
    if not 0 <= args.rule_index < len(spec.rules):
        raise _UsageError(f"--rule-index {args.rule_index} out of range (file has {len(spec.rules)} macro-rules)")
    true_declared = "true" in spec.symbols.constants
    try:
        outcome = normalize_rule(spec.rules[args.rule_index], true_declared, trace=True, source=args.rule_index)
    except MacroRuleError as e:
        return _report([e.to_diagnostic()], err)
    for step in outcome.trace:
        print(step.format(), file=out)
    for e in outcome.elementary:
        print("=> " + print_sexpr(to_sexpr(e.to_macro_rule())), file=out)
    return _report(outcome.diagnostics, err)


def build_parser():
    p = argparse.ArgumentParser(prog="macrorule", description="Compile macro-rule specifications to conditional rules.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="desugar a spec file into conditional rules")
    c.add_argument("file")
    c.add_argument("-o", "--output", help="write rules here instead of standard output")
    c.add_argument("--pretty", action="store_true", help="infix output instead of canonical s-expressions")
    c.add_argument("--trace", action="store_true", help="print the rewrite steps to standard error")
    c.add_argument("--seed", type=int, help="use the randomized strategy with this seed")
    c.set_defaults(func=cmd_compile)

    k = sub.add_parser("check", help="report diagnostics without compiling")
    k.add_argument("file")
    k.set_defaults(func=cmd_check)

    r = sub.add_parser("run", help="evaluate a ground term")
    r.add_argument("file")
    r.add_argument("--term", required=True)
    r.add_argument("--max-steps", type=int)
    r.add_argument("--rules", action="store_true", help="FILE is a compiled rule file")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("expand", help="show the derivation of one macro-rule")
    e.add_argument("file")
    e.add_argument("--rule-index", type=int, required=True)
    e.set_defaults(func=cmd_expand)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code else OK
    try:
        return args.func(args, out, err)
    except _UsageError as e:
        print(f"macrorule: {e}", file=err)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
