"""Command-line interface.

Exit status: 0 on success, 1 when a check or entailment verdict is negative,
2 on input errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bases, closure, implications, redundancy
from .dataset import Dataset, parse_transactions, split_rule_text
from .entailment2 import ROMAN, counterexample_search, two_premise_entails


class InputError(Exception):
    pass


def parse_gamma(text: str, allow_one: bool = True) -> Fraction:
    try:
        g = bases.as_fraction(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    upper_ok = g <= 1 if allow_one else g < 1
    if not (g > 0 and upper_ok):
        raise InputError(f"gamma {text} out of range")
    return g


def parse_support(text: str, n: int) -> int:
    """Absolute count for integers, otherwise a fraction of the dataset size rounded up."""
    try:
        count = int(text)
    except ValueError:
        count = None
    if count is not None:
        if count < 0:
            raise InputError(f"support {text} is negative")
        return count
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad support {text!r}") from None
    if not 0 <= f <= 1:
        raise InputError(f"fractional support {text} must lie in [0, 1]")
    return math.ceil(f * n)


def load(path: str) -> Dataset:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_transactions(data)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _rule_vocabulary(texts: list[str]) -> Dataset:
    labels = set()
    for t in texts:
        try:
            lhs, rhs = split_rule_text(t)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        labels.update(lhs + rhs)
    return Dataset(sorted(labels), [])


def _parse_rules(d: Dataset, texts: list[str]):
    try:
        return [d.parse_rule(t) for t in texts]
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _implications_for(d: Dataset, args) -> implications.ImplicationSet:
    floor = parse_support(args.support, len(d))
    L = closure.enumerate_closures(d, floor)
    return implications.gd_basis(L, d)


def cmd_mine(args) -> int:
    d = load(args.input)
    L = closure.enumerate_closures(d, parse_support(args.support, len(d)))
    sys.stdout.write(L.to_text())
    return 0


BASIS_KINDS = ("rr", "bstar", "gd", "iterfree", "bstar-minmax", "bstar-minmin")


def build_basis(kind: str, d: Dataset, gamma: Fraction, floor: int):
    L = closure.enumerate_closures(d, floor)
    if kind == "gd":
        return implications.gd_basis(L, d)
    if kind == "iterfree":
        return implications.iteration_free_basis(L, d)
    if kind == "rr":
        return bases.representative_rules(d, L, gamma)
    if gamma >= 1:
        raise InputError("bstar needs gamma < 1")
    b = bases.bstar(d, L, gamma)
    if kind == "bstar-minmax":
        return bases.minmax_variant(b, L)
    if kind == "bstar-minmin":
        return bases.minmin_variant(b, L)
    return b


def cmd_basis(args) -> int:
    d = load(args.input)
    gamma = parse_gamma(args.gamma)
    floor = parse_support(args.support, len(d))
    b = build_basis(args.kind, d, gamma, floor)
    if isinstance(b, implications.ImplicationSet):
        name = "GD" if args.kind == "gd" else "IterFree"
        sys.stdout.write(f"# {name} 1 {floor}\n" + b.to_text(d))
    else:
        sys.stdout.write(b.to_text(d, hide_empty_antecedent=args.hide_empty_antecedent))
    return 0


def _check_setup(args):
    if args.data:
        d = load(args.data)
        B = _implications_for(d, args) if args.mode == "closure" else implications.ImplicationSet()
    else:
        d = _rule_vocabulary([args.premise, args.conclusion])
        B = implications.ImplicationSet()
    r1, r0 = _parse_rules(d, [args.premise, args.conclusion])
    return d, B, r1, r0


def cmd_check(args) -> int:
    d, B, r1, r0 = _check_setup(args)
    if args.replay:
        try:
            text = Path(args.replay).read_text()
            trace = redundancy.parse_trace(text, d.index, [r1])
        except (OSError, ValueError) as exc:
            raise InputError(str(exc)) from None
        ok = redundancy.replay(B, trace) and trace.final == r0
        print("trace valid" if ok else "trace invalid")
        return 0 if ok else 1
    if args.mode == "plain":
        verdict = redundancy.plainly_redundant(r1, r0)
    else:
        verdict = redundancy.closure_redundant(B, r1, r0)
    print("redundant" if verdict else "not redundant")
    if verdict and args.trace:
        sys.stdout.write(redundancy.derive(B, r1, r0, args.mode).to_text(d))
    if not verdict and args.counterexample:
        if args.mode == "plain":
            ce = redundancy.plain_counterexample(r1, r0)
        else:
            ce = redundancy.closure_counterexample(B, r1, r0)
        if ce is not None:
            print("# counterexample")
            sys.stdout.write(_fimi(ce, d))
    return 0 if verdict else 1


def cmd_derive(args) -> int:
    d, B, r1, r0 = _check_setup(args)
    trace = redundancy.derive(B, r1, r0, args.mode)
    if trace is None:
        print("not redundant")
        return 1
    sys.stdout.write(trace.to_text(d))
    return 0


def _fimi(ce: Dataset, d: Dataset) -> str:
    # counterexamples use item ids; print them with the caller's labels
    return "".join(" ".join(d.names[i] for i in t) + "\n" for t in ce.transactions)


def cmd_entail2(args) -> int:
    gamma = parse_gamma(args.gamma, allow_one=False)
    texts = [args.r1, args.r2, args.r0]
    if args.data:
        d = load(args.data)
        B = _implications_for(d, args)
    else:
        d = _rule_vocabulary(texts)
        B = implications.ImplicationSet()
    r1, r2, r0 = _parse_rules(d, texts)
    v = two_premise_entails(B, r1, r2, r0, gamma)
    print(f"holds ({v.reason.value})" if v.holds else "does not hold")
    conds = [c for c in ROMAN if c in v.failed_conditions]
    if not v.holds:
        print("failed conditions: " + (" ".join(conds) if conds else "none"))
    if not v.holds and args.counterexample:
        ce = counterexample_search(B, r1, r2, r0, gamma, bound=args.bound, names=d.names)
        if ce is None:
            print("# no counterexample within bound")
        else:
            print("# counterexample")
            sys.stdout.write(ce.to_fimi())
    return 0 if v.holds else 1


def _gamma_range(start: Fraction, stop: Fraction, step: Fraction):
    if step <= 0:
        raise InputError("step must be positive")
    g = start
    sign = 1 if stop >= start else -1
    while (g - stop) * sign <= 0:
        yield g
        g += step * sign


def cmd_sweep(args) -> int:
    d = load(args.input)
    floor = parse_support(args.support, len(d))
    L = closure.enumerate_closures(d, floor)
    gd = len(implications.gd_basis(L, d))
    start = parse_gamma(getattr(args, "from"), allow_one=False)
    stop = parse_gamma(args.to, allow_one=False)
    step = bases.as_fraction(args.step)
    print("gamma,RR,Bstar,GD,Bstar+GD")
    for g in _gamma_range(start, stop, step):
        rr = len(bases.representative_rules(d, L, g))
        bs = len(bases.bstar(d, L, g))
        print(f"{_decimal(g)},{rr},{bs},{gd},{bs + gd}")
    return 0


def _decimal(g: Fraction) -> str:
    text = f"{float(g):.6f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def compare_row(d: Dataset, gamma: Fraction, floor: int, convention: str) -> dict[str, int]:
    L = closure.enumerate_closures(d, floor)
    gd = len(implications.gd_basis(L, d))
    bs = len(bases.bstar(d, L, gamma)) if gamma < 1 else 0
    return {
        "Traditional": bases.all_rules_count(d, gamma, floor, convention),
        "RRImp": len(implications.iteration_free_basis(L, d)),
        "GD": gd,
        "Bstar": bs,
        "Sum": gd + bs,
    }


def cmd_compare(args) -> int:
    d = load(args.input)
    floor = parse_support(args.support, len(d))
    gamma = parse_gamma(args.gamma if args.gamma is not None else _as_gamma(args.support))
    row = compare_row(d, gamma, floor, args.convention)
    print("\t".join(row))
    print("\t".join(str(v) for v in row.values()))
    return 0


def _as_gamma(support_text: str) -> str:
    try:
        int(support_text)
    except ValueError:
        return support_text
    raise InputError("--gamma is required when --support is an absolute count")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rulebases", description="Minimum-size bases of association rules.")
    sub = p.add_subparsers(dest="command", required=True)

    def support_arg(sp, default="1"):
        sp.add_argument("--support", default=default,
                        help="absolute count, or a fraction of the transactions (rounded up); default %(default)s")

    sp = sub.add_parser("mine", help="closed itemsets with supports and Hasse edges")
    sp.add_argument("input")
    support_arg(sp, "0")
    sp.set_defaults(func=cmd_mine)

    sp = sub.add_parser("basis", help="build a rule basis")
    sp.add_argument("kind", choices=BASIS_KINDS)
    sp.add_argument("input")
    sp.add_argument("--gamma", default="1", help="confidence threshold, e.g. 3/4 or 0.75")
    support_arg(sp)
    sp.add_argument("--hide-empty-antecedent", action="store_true",
                    help="omit rules with an empty left-hand side from the listing")
    sp.set_defaults(func=cmd_basis)

    for name, func, helptext in (
        ("check", cmd_check, "decide whether PREMISE makes CONCLUSION redundant"),
        ("derive", cmd_derive, "print a derivation of CONCLUSION from PREMISE"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("premise")
        sp.add_argument("conclusion")
        sp.add_argument("--mode", choices=("plain", "closure"), default="plain")
        sp.add_argument("--data", help="FIMI file whose implications are assumed in closure mode")
        support_arg(sp)
        if name == "check":
            sp.add_argument("--trace", action="store_true", help="also print a derivation")
            sp.add_argument("--replay", metavar="TRACE", help="verify a derivation file instead of deciding")
            sp.add_argument("--counterexample", action="store_true",
                            help="print a dataset separating the rules when not redundant")
        sp.set_defaults(func=func)

    sp = sub.add_parser("entail2", help="two-premise entailment")
    sp.add_argument("r1")
    sp.add_argument("r2")
    sp.add_argument("r0")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--data", help="FIMI file whose implications are assumed")
    support_arg(sp)
    sp.add_argument("--counterexample", action="store_true")
    sp.add_argument("--bound", type=int, default=30, help="multiplicity bound for the counterexample search")
    sp.set_defaults(func=cmd_entail2)

    sp = sub.add_parser("sweep", help="basis sizes over a range of confidence thresholds (CSV)")
    sp.add_argument("input")
    sp.add_argument("--from", default="0.99")
    sp.add_argument("--to", default="0.51")
    sp.add_argument("--step", default="0.01")
    support_arg(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("compare", help="rule counts per basis at one threshold pair")
    sp.add_argument("input")
    support_arg(sp)
    sp.add_argument("--gamma", help="confidence threshold; defaults to the support when that is a fraction")
    sp.add_argument("--convention", choices=("traditional_singleton", "general"), default="traditional_singleton")
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
