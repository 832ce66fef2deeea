"""Command-line front end.

Exit codes: 0 success, 1 unreadable input, 2 arity or ring mismatch,
3 a division that had to be exact was not, 4 a verification failed.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .brace import gamma_to_brace
from .coeffring import ZZ, Element, NonIntegralError, Ring, RingMismatchError, Zmod
from .cor import (
    CorShapeError,
    CorSyntaxError,
    apply_rel7,
    check_instance,
    format_cor,
    normalize,
    parse_cor,
    parse_equation,
    rel7_raw_terms,
    verify_relations,
)
from .gamma import (
    GAMMA,
    format_expanded,
    gamma_compose,
    kernel_basis,
    p_restricted_defect,
    trace,
)
from .prelie_operad import compose_labelled, compose_partial, compose_total, prelie_bracket
from .trees import (
    LabelledTree,
    TreeSyntaxError,
    enumerate_labelled,
    lambda_count,
    normal_form,
    parse_tree,
    parse_tree_sum,
    stab_order,
)

EXIT_PARSE, EXIT_ARITY, EXIT_NON_INTEGRAL, EXIT_VERIFY = 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


class _Verified(Exception):
    """Raised by a verb to report a failed check after printing its output."""


def _labelled(text: str) -> LabelledTree:
    return LabelledTree.from_tree(parse_tree(text))


def _is_labelled(text: str) -> bool:
    try:
        _labelled(text)
    except (TreeSyntaxError, ValueError):
        return False
    return True


def _emit(e: Element, args) -> str:
    e = e.to_ring(args.ring) if e.ring == ZZ else e
    if e.basis == GAMMA and args.format == "expanded":
        return format_expanded(e)
    return str(e)


def _vertex_index(tree, spec: str) -> int:
    labels = tree.labels()
    if labels.count(spec) == 1:
        return labels.index(spec)
    if spec.isdigit() and 1 <= int(spec) <= len(labels):
        return int(spec) - 1
    raise IndexError(f"{spec!r} names no single vertex of {tree}")


def cmd_enum(args):
    trees = enumerate_labelled(args.n)
    if args.list:
        return "\n".join(str(t) for t in trees)
    return str(len(trees))


def cmd_compose(args):
    if _is_labelled(args.tau) and _is_labelled(args.ups):
        tau = _labelled(args.tau)
        if not args.i.isdigit():
            raise TreeSyntaxError(f"vertex of a labelled tree must be an integer, got {args.i!r}")
        return _emit(compose_labelled(tau, int(args.i), _labelled(args.ups)), args)
    t = parse_tree(args.tau)
    return _emit(compose_partial(t, _vertex_index(t, args.i), parse_tree_sum(args.ups)), args)


def cmd_total(args):
    return _emit(compose_total(_labelled(args.outer), [parse_tree_sum(a) for a in args.args]), args)


def cmd_bracket(args):
    return _emit(prelie_bracket(parse_tree_sum(args.a), parse_tree_sum(args.b)), args)


def cmd_stab(args):
    return str(stab_order(parse_tree(args.tree)))


def cmd_trace(args):
    return _emit(trace(parse_tree_sum(args.expr)), args)


def cmd_gamma_compose(args):
    elems = [parse_tree_sum(a).with_basis(GAMMA) for a in args.args]
    return _emit(gamma_compose(_labelled(args.outer), elems), args)


def cmd_normal_form(args):
    return str(normal_form(parse_tree(args.tree)))


def cmd_lambda(args):
    return str(lambda_count(parse_tree(args.tree)))


def cmd_ker_basis(args):
    Zmod(args.p)  # rejects a composite modulus with a ValueError
    alphabet = [a for a in args.alphabet.split(",") if a]
    return "\n".join(str(t) for t in kernel_basis(args.n, alphabet, args.p))


def cmd_defect(args):
    return str(p_restricted_defect(args.x, args.y, args.p))


def cmd_cor_eval(args):
    return _emit(normalize(parse_cor(args.expr)), args)


def cmd_rel7(args):
    e = parse_cor(args.expr)
    if args.raw:
        return "\n".join(str(t) for t in rel7_raw_terms(e))
    out = apply_rel7(e)
    return format_cor(out.to_ring(args.ring))


def cmd_verify(args):
    alphabet = [a for a in args.alphabet.split(",") if a]
    lines = verify_relations(alphabet, args.max_n, args.max_r, args.max_s, args.ring)
    fails = sum(" FAIL " in line for line in lines)
    text = "\n".join(lines + [f"checked {len(lines)} instances, {fails} failures"])
    if fails:
        raise _Verified(text)
    return text


def cmd_brace_expand(args):
    return _emit(gamma_to_brace(parse_cor(args.expr)), args)


def cmd_oracle(args):
    lhs, rhs = parse_equation(args.expr)
    ok, text, detail = check_instance(0, lhs, rhs, args.ring)
    line = f"{text} {'OK' if ok else 'FAIL'} {detail}"
    if not ok:
        raise _Verified(line)
    return line


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default="z", help="coefficient ring: z, q or zmod:P (default z)")
    common.add_argument("--format", choices=("compact", "expanded"), default="compact",
                        help="expanded prints orbit sums as sums of labelled tensors")
    parser = _Parser(prog="gammaprelie", description="Rooted-tree operad, orbit sums and corolla operations.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = verb("enum", cmd_enum, "count (or list) labelled rooted trees on n vertices")
    p.add_argument("n", type=int)
    p.add_argument("--list", action="store_true")
    p = verb("compose", cmd_compose, "partial composition TAU o_I UPS")
    p.add_argument("tau")
    p.add_argument("i")
    p.add_argument("ups")
    p = verb("total", cmd_total, "total composition of a labelled outer tree with trees")
    p.add_argument("outer")
    p.add_argument("args", nargs="*")
    p = verb("bracket", cmd_bracket, "PreLie bracket {A, B}")
    p.add_argument("a")
    p.add_argument("b")
    p = verb("stab", cmd_stab, "stabilizer order of a decorated tree")
    p.add_argument("tree")
    p = verb("trace", cmd_trace, "trace of a combination of trees, in orbit sums")
    p.add_argument("expr")
    p = verb("gamma-compose", cmd_gamma_compose, "composition of orbit sums")
    p.add_argument("outer")
    p.add_argument("args", nargs="*")
    p = verb("normal-form", cmd_normal_form, "iterated corolla decomposition")
    p.add_argument("tree")
    p = verb("lambda", cmd_lambda, "number of increasing labellings")
    p.add_argument("tree")
    p = verb("ker-basis", cmd_ker_basis, "trees killed by the trace mod P")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.add_argument("--alphabet", default="x,y")
    p = verb("defect", cmd_defect, "p-restricted defect of the left comb, mod P")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("p", type=int)
    p = verb("cor-eval", cmd_cor_eval, "evaluate a corolla expression in orbit sums")
    p.add_argument("expr")
    p = verb("rel7", cmd_rel7, "expand a nested corolla into single-level corollas")
    p.add_argument("expr")
    p.add_argument("--raw", action="store_true", help="list the unmerged summands instead")
    p = verb("verify", cmd_verify, "check all relation instances within bounds")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-r", type=int, default=3)
    p.add_argument("--max-s", type=int, default=3)
    p.add_argument("--alphabet", default="x,y,z")
    p = verb("brace-expand", cmd_brace_expand, "image of a corolla expression in the brace algebra")
    p.add_argument("expr")
    p = verb("oracle", cmd_oracle, "compare both sides of LHS = RHS in both models")
    p.add_argument("expr")
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.ring = Ring.parse(args.ring)
        text = args.func(args)
    except _Verified as exc:
        print(exc, file=out)
        return EXIT_VERIFY
    except (TreeSyntaxError, CorSyntaxError) as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    except NonIntegralError as exc:
        print(f"NON_INTEGRAL: {exc}", file=err)
        return EXIT_NON_INTEGRAL
    except (RingMismatchError, CorShapeError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ARITY
    print(text, file=out)
    return 0


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
