"""Command-line front end.

Every command prints human-readable lines followed by machine-readable ones of
the form ``#R <check-id> <PASS|FAIL|SKIPPED> <count>``.  Exit status: 0 when
every check passes, 1 when a mathematical check fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import core, derivations, modules, submodules
from .expr import ExprError, parse_element, print_canonical
from .modules import ModuleError
from .poly import PolyError
from .specfile import (
    SpecFileError, load_derivation, load_module, load_seed, make_tag, parse_window, read_specfile,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class Report:
    command: str
    lines: list = field(default_factory=list)
    results: list = field(default_factory=list)  # (check id, status, count)

    def say(self, text: str) -> None:
        self.lines.append(text)

    def result(self, check_id: str, status: str, count: int) -> None:
        self.results.append((check_id, status, count))

    @property
    def failed(self) -> bool:
        return any(status == "FAIL" for _, status, _ in self.results)

    def render(self) -> str:
        out = [f"# {self.command}"] + self.lines
        out += [f"#R {cid} {status} {count}" for cid, status, count in self.results]
        fails = sum(1 for _, s, _ in self.results if s == "FAIL")
        out.append(f"summary: {len(self.results)} checks, {fails} failed")
        return "\n".join(out)


def _window_arg(text: str) -> tuple:
    try:
        return parse_window(text)
    except SpecFileError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {n}")
    return n


def _add_module_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", help="spec file with a [module] or [table] section")
    p.add_argument("--family", choices=modules.RANK_TWO)
    p.add_argument("--a", help="rational or 'sym'")
    p.add_argument("--b", help="rational or 'sym'")
    p.add_argument("--c", help="nonzero rational or 'sym'")
    p.add_argument("--pattern", help="0/1 string for MA / MAprime")
    p.add_argument("--pattern-lo", type=int, default=0)


def _module_from_args(args) -> modules.ModuleSpec:
    if args.file and args.family:
        raise InputError("give either --file or --family, not both")
    if args.file:
        return load_module(read_specfile(args.file))
    if not args.family:
        raise InputError("a module needs --file or --family")
    return modules.make_module(make_tag(args.family, args.a, args.b, args.c,
                                        args.pattern, args.pattern_lo))


def _graded_window(spec: modules.ModuleSpec, window: Optional[tuple]) -> modules.ModuleSpec:
    if spec.graded and window is not None:
        return modules.ModuleSpec(spec.tag, spec.rule, graded=True, window=window)
    return spec


def _first_witness(failures, fmt) -> str:
    return fmt(failures[0]) if failures else ""


# -- commands -----------------------------------------------------------------

def cmd_verify_algebra(args, report: Report) -> None:
    n = args.window
    window = (-n, n)
    counts = {"skew": [0, 0], "jacobi": [0, 0]}
    first = {}
    for kind, gens, res in core.verify_axioms(window):
        counts[kind][0] += 1
        if res:
            counts[kind][1] += 1
            first.setdefault(kind, (gens, res))
    for kind in ("skew", "jacobi"):
        checked, bad = counts[kind]
        report.say(f"{kind}: {checked} checked on grades [{-n}, {n}], {bad} nonzero residuals")
        if kind in first:
            gens, res = first[kind]
            report.say(f"  first residual at {tuple(map(str, gens))}: {print_canonical(res)}")
        report.result(f"algebra.{kind}", "FAIL" if bad else "PASS", bad)

    half = Fraction(1, 2)
    l_weights = range(-args.loop_weights, args.loop_weights + 1)
    g_weights = [half + k for k in range(-args.loop_weights, args.loop_weights)]
    loops = range(-args.loop_indices, args.loop_indices + 1)
    gens = core.loop_generators(l_weights, g_weights, loops)
    checked = bad = 0
    for x in gens:
        for y in gens:
            for z in gens:
                checked += 1
                if core.check_loop_super_jacobi(x, y, z):
                    bad += 1
    report.say(f"loop super-Jacobi: {checked} triples, {bad} nonzero residuals")
    report.result("loop.jacobi", "FAIL" if bad else "PASS", bad)


def cmd_verify_module(args, report: Report) -> None:
    spec = _module_from_args(args)
    report.say(f"module: {spec.tag if spec.tag else 'untagged table'}")
    window = args.window
    if spec.graded:
        spec = _graded_window(spec, window)
        spec.require_window()
    res = modules.check_module_axioms(spec, window)
    report.say(f"module axioms: {res.checked} checked, {len(res.failures)} failed, "
               f"{res.skipped} skipped (outside window)")
    if res.failures:
        g1, g2, v, r = res.failures[0]
        report.say(f"  first residual at ({g1}, {g2}, {v}): {print_canonical(r)}")
    report.result("module.axioms", "FAIL" if res.failures else "PASS", len(res.failures))
    if res.skipped:
        report.result("module.window", "SKIPPED", res.skipped)


def _seed_from_args(args):
    if args.seed is not None:
        return parse_element(args.seed, "module")
    if args.file:
        return load_seed(read_specfile(args.file))
    raise InputError("submodule needs --seed or a [seed] section in --file")


def cmd_submodule(args, report: Report) -> None:
    spec = _graded_window(_module_from_args(args), args.window)
    seed = _seed_from_args(args)
    closure = submodules.close_under_actions(spec, [seed])
    report.say(f"seed: {print_canonical(seed)}")
    report.say(f"basis: {print_canonical(closure.basis)}")
    full = closure.basis.is_full()
    report.say("submodule is the whole module" if full else "submodule is proper")
    report.result("submodule.closure", "PASS", len(closure.basis))
    if closure.skipped:
        report.say(f"window-truncated: {closure.skipped} actions left the window")
        report.result("submodule.window", "SKIPPED", closure.skipped)


def cmd_irreducible(args, report: Report) -> None:
    spec = _module_from_args(args)
    res = submodules.irreducibility_probe(spec, trials=args.trials, max_deg=args.max_deg,
                                          rng_seed=args.rng_seed)
    report.say(f"rng seed: {args.rng_seed}, trials: {args.trials}, max degree: {args.max_deg}")
    report.say(f"verdict: {res.verdict}")
    for basis in res.proper:
        report.say(f"  proper: {print_canonical(basis)}")
    # finding a proper submodule is an answer, not a failed check
    report.result("irreducible.probe", "PASS", len(res.proper))


def cmd_derivation(args, report: Report) -> None:
    if args.inner and args.file:
        raise InputError("give either --file or --inner, not both")
    window = args.window or (-2, 2)
    if args.inner:
        elem = parse_element(args.inner, "algebra")
        D = derivations.ad(elem, window)
        report.say(f"derivation: ad({print_canonical(elem)})")
    elif args.file:
        D = load_derivation(read_specfile(args.file), window)
    else:
        raise InputError("derivation needs --file or --inner")
    report.say(f"{D}")
    res = derivations.check_derivation(D)
    report.say(f"identity: {res.checked} pairs checked, {len(res.failures)} failed, "
               f"{res.skipped} skipped (bracket outside window)")
    if res.failures:
        a, b, r = res.failures[0]
        report.say(f"  first residual at ({a}, {b}): {print_canonical(r)}")
    report.result("derivation.identity", "FAIL" if res.failures else "PASS", len(res.failures))
    if res.skipped:
        report.result("derivation.window", "SKIPPED", res.skipped)
    if res.failures:
        return
    try:
        x = derivations.inner_generator(D)
    except derivations.NotInner as exc:
        report.say(f"not inner: {exc}")
        report.result("derivation.inner", "FAIL", 1)
        return
    report.say(f"inner generator: {print_canonical(x)}")
    report.result("derivation.inner", "PASS", 0)


def cmd_classify(args, report: Report) -> None:
    spec = _graded_window(_module_from_args(args), args.window)
    try:
        tag = modules.classify_rank2(spec)
    except modules.NoMatch as exc:
        report.say(f"no match: {exc}")
        report.result("classify.match", "FAIL", 1)
        return
    report.say(str(tag))
    report.result("classify.match", "PASS", 0)


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopsv", description="Checks for the loop super-Virasoro conformal superalgebra.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="verify axioms").add_subparsers(dest="target", required=True)
    va = verify.add_parser("algebra", help="skew-symmetry, Jacobi and loop super-Jacobi")
    va.add_argument("--window", type=_nonneg_int, default=2, help="check grades in [-N, N]")
    va.add_argument("--loop-weights", type=_nonneg_int, default=2,
                    help="L weights in [-K, K], G weights +-1/2 ... +-(K-1/2)")
    va.add_argument("--loop-indices", type=_nonneg_int, default=1)
    va.set_defaults(func=cmd_verify_algebra)

    vm = verify.add_parser("module", help="module axioms")
    _add_module_source(vm)
    vm.add_argument("--window", type=_window_arg,
                    help="'lo,hi': generator grades (ungraded) or basis grades (graded)")
    vm.set_defaults(func=cmd_verify_module)

    sm = sub.add_parser("submodule", help="closure of a seed under the action")
    _add_module_source(sm)
    sm.add_argument("--seed", help="module element, e.g. '(d+2)*x'")
    sm.add_argument("--window", type=_window_arg, help="basis grade window for graded modules")
    sm.set_defaults(func=cmd_submodule)

    ir = sub.add_parser("irreducible", help="random irreducibility probe")
    _add_module_source(ir)
    ir.add_argument("--trials", type=_nonneg_int, default=20)
    ir.add_argument("--max-deg", type=_nonneg_int, default=3)
    ir.add_argument("--rng-seed", type=int, default=0)
    ir.set_defaults(func=cmd_irreducible)

    de = sub.add_parser("derivation", help="check a derivation and find its inner generator")
    de.add_argument("--file", help="spec file with a [derivation] section")
    de.add_argument("--inner", help="algebra element x; checks ad(x)")
    de.add_argument("--window", type=_window_arg, help="source grade window (default -2,2)")
    de.set_defaults(func=cmd_derivation)

    cl = sub.add_parser("classify", help="identify the family of a rank-two table")
    _add_module_source(cl)
    cl.add_argument("--window", type=_window_arg, help="basis grade window for graded tables")
    cl.set_defaults(func=cmd_classify)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    echo = " ".join(argv if argv is not None else sys.argv[1:])
    report = Report(echo)
    try:
        args.func(args, report)
    except (InputError, SpecFileError, ExprError, ModuleError, PolyError,
            submodules.SubmoduleError, derivations.DerivationError, core.NotHomogeneous) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(report.render())
    return EXIT_FAIL if report.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
