"""Command-line entry point: ``sharpbs <command> ...``.

Exit codes: 0 PASS, 1 FAIL, 2 ERROR, 3 INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from . import betachain, chartable, permgroup, structconst
from .cyclo import CyclotomicError

EXIT_CODES = {"PASS": 0, "FAIL": 1, "ERROR": 2, "INCONCLUSIVE": 3}
SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    status: str = "PASS"
    results: Any = None
    lines: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, "command": self.command, "inputs": self.inputs,
                "status": self.status, "results": self.results}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_dict(), indent=2, sort_keys=True)
        return "\n".join(self.lines + [f"status: {self.status}"])


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(message)


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=["text", "json"], default=d("text"))
    p.add_argument("--seed", type=int, default=d(0), help="seed for sampled searches")
    p.add_argument("--max-elements", type=int, default=d(permgroup.DEFAULT_MAX_ELEMENTS))
    p.add_argument("--max-tuples", type=int, default=d(permgroup.DEFAULT_MAX_TUPLES))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sharpbs", description="Exact character-table and permutation-group checks.")
    _add_globals(parser, suppress=False)
    common = _Parser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("validate", parents=[common], help="check the orthogonality relations of a table")
    p.add_argument("table")

    p = sub.add_parser("cmc", parents=[common], help="class multiplication coefficient m(a,b,c)")
    p.add_argument("--sweep", action="store_true", help="print m(a,b,c) for every c with a nonzero value")
    p.add_argument("table")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c", nargs="?")

    p = sub.add_parser("beta", parents=[common], help="chain certificate for beta_r(x)")
    p.add_argument("table")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-depth", type=int)

    p = sub.add_parser("check-theorem", parents=[common], help="check the sporadic case list on a table")
    p.add_argument("table")
    p.add_argument("--alpha", help="alpha data file (default: shipped data)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--max-depth", type=int)

    p = sub.add_parser("radical", parents=[common], help="O_pi of a permutation group")
    p.add_argument("group")
    p.add_argument("--pi", required=True, help='e.g. "2,3" or "not:5"')

    p = sub.add_parser("bs-check", parents=[common], help="compare O_pi membership with m-tuple generation")
    p.add_argument("group")
    p.add_argument("--pi", required=True)
    p.add_argument("--m", type=int, help="tuple size (default: width predicted from pi)")
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=10000)

    p = sub.add_parser("oracle-cmc", parents=[common], help="brute-force m(a,b,c) in a permutation group")
    p.add_argument("group")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("--table", help="also compare with this character table")
    return parser


# ---------------------------------------------------------------------------


def _cmd_validate(args, rep: RunReport) -> None:
    table = chartable.resolve_table(args.table)
    vr = chartable.validate(table)
    rep.results = vr.to_dict()
    rep.lines.append(f"{table.group_name}: {table.n_classes} classes, order {table.group_order}")
    for chk in vr:
        text = f"{chk.name}: {'PASS' if chk.passed else 'FAIL'}"
        if not chk.passed:
            text += f" at {chk.offending}"
        rep.lines.append(text)
    rep.status = "PASS" if vr.ok else "FAIL"


def _cmd_cmc(args, rep: RunReport) -> None:
    table = chartable.resolve_table(args.table)
    try:
        if args.sweep or args.c is None:
            if not args.sweep:
                raise UsageError("cmc needs a third class unless --sweep is given")
            sweep = structconst.coeff_sweep(table, args.a, args.b)
            nonzero = [(n, v) for n, v in sweep if v]
            rep.results = {"a": args.a, "b": args.b, "coefficients": dict(nonzero)}
            rep.lines.extend(f"{n} {v}" for n, v in nonzero)
        else:
            value = structconst.class_mult_coeff(table, args.a, args.b, args.c)
            rep.results = {"a": args.a, "b": args.b, "c": args.c, "value": value}
            rep.lines.append(str(value))
    except structconst.TableCorruptionError as exc:
        rep.status = "FAIL"
        rep.results = {"error": str(exc)}
        rep.lines.append(str(exc))


def _cmd_beta(args, rep: RunReport) -> None:
    table = chartable.resolve_table(args.table)
    try:
        cert = betachain.beta_upper_bound(table, args.cls, args.prime, args.max_depth)
    except betachain.NoCertificateError as exc:
        rep.status = "FAIL" if exc.exhausted else "INCONCLUSIVE"
        rep.results = {"certificate": None, "reason": str(exc)}
        rep.lines.append(str(exc))
        return
    ok = betachain.verify_certificate(table, cert)
    rep.results = {"certificate": cert.to_dict(), "verified": ok}
    rep.lines.extend(cert.lines())
    rep.status = "PASS" if ok else "FAIL"


def _cmd_check_theorem(args, rep: RunReport) -> None:
    table = chartable.resolve_table(args.table)
    data = betachain.load_alpha_data(args.alpha)
    report = betachain.check_sporadic_theorem(table, data, args.r, args.s, args.max_depth)
    rep.results = report.to_dict()
    rep.lines.extend(report.lines())
    rep.status = "PASS" if report.passed else "FAIL"


def _load_group(args) -> permgroup.PermGroup:
    G = permgroup.resolve_group(args.group)
    G.cap = args.max_elements
    return G


def _cmd_radical(args, rep: RunReport) -> None:
    G = _load_group(args)
    pi = permgroup.PrimeSet.parse(args.pi)
    R = permgroup.pi_radical(G, pi)
    gens = permgroup.PermGroup.from_elements(R).generators if len(R) > 1 else ()
    rep.results = {"group": G.name, "pi": str(pi), "order": len(R), "generators": [list(g) for g in gens]}
    rep.lines.append(f"O_pi({G.name}) for pi = {pi}: order {len(R)}")
    rep.lines.extend(f"generator: {g!r}" for g in gens)


def _cmd_bs_check(args, rep: RunReport) -> None:
    G = _load_group(args)
    pi = permgroup.PrimeSet.parse(args.pi)
    m = args.m if args.m is not None else permgroup.bs_width_for(pi)
    report = permgroup.bs_width_check(G, pi, m, args.mode, seed=args.seed,
                                      max_tuples=args.max_tuples, samples=args.samples)
    rep.results = report.to_dict()
    rep.lines.append(f"{G.name}: pi = {pi}, m = {m}, mode = {args.mode}, seed = {args.seed}, "
                     f"|O_pi| = {report.radical_order}")
    for c in report.classes:
        where = "inside" if c.inside_radical else "outside"
        wit = "none" if c.witness is None else " ".join(repr(w) for w in c.witness)
        rep.lines.append(f"{c.name} (size {c.size}, {where}): witness {wit}; "
                         f"{c.tuples_checked} tuples; {c.verdict}")
    rep.status = report.status


def _cmd_oracle_cmc(args, rep: RunReport) -> None:
    G = _load_group(args)
    names = [c.name for c in G.conjugacy_classes]
    for n in (args.a, args.b, args.c):
        if n not in names:
            raise UsageError(f"{G.name} has no class {n!r}; classes are {', '.join(names)}")
    value = permgroup.brute_force_cmc(G, args.a, args.b, G.class_ref(args.c).representative)
    rep.results = {"group": G.name, "a": args.a, "b": args.b, "c": args.c, "value": value}
    rep.lines.append(str(value))
    if args.table:
        table = chartable.resolve_table(args.table)
        match = permgroup.match_classes(G, table)
        if match is None:
            rep.status = "FAIL"
            rep.lines.append(f"no class matching between {G.name} and table {table.group_name}")
            return
        ia, ib, ic = (match[names.index(n)] for n in (args.a, args.b, args.c))
        tv = structconst.class_mult_coeff(table, ia, ib, ic)
        tn = [table.classes[i].name for i in (ia, ib, ic)]
        rep.results["table_value"] = tv
        rep.results["table_classes"] = tn
        rep.lines.append(f"table {table.group_name} m({','.join(tn)}) = {tv}")
        rep.status = "PASS" if tv == value else "FAIL"


COMMANDS = {
    "validate": _cmd_validate,
    "cmc": _cmd_cmc,
    "beta": _cmd_beta,
    "check-theorem": _cmd_check_theorem,
    "radical": _cmd_radical,
    "bs-check": _cmd_bs_check,
    "oracle-cmc": _cmd_oracle_cmc,
}

_ERRORS = (UsageError, OSError, KeyError, ValueError, CyclotomicError, chartable.TableError,
           betachain.AlphaDataError, permgroup.GroupError)


def _requested_format(argv: list) -> str:
    for i, tok in enumerate(argv):
        if tok == "--format=json" or (tok == "--format" and argv[i + 1:i + 2] == ["json"]):
            return "json"
    return "text"


def run(argv: Optional[Sequence[str]] = None) -> RunReport:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        fmt = _requested_format(argv)
        command = next((a for a in argv if a in COMMANDS), "")
        rep = RunReport(command, {"argv": argv}, "ERROR",
                        {"error": str(exc)}, [f"error: {exc}"])
        rep.inputs["format"] = fmt
        return rep
    inputs = {k: v for k, v in vars(args).items() if k != "command"}
    rep = RunReport(args.command, inputs)
    try:
        COMMANDS[args.command](args, rep)
    except _ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        rep.status = "ERROR"
        rep.results = {"error": str(msg)}
        rep.lines = [f"error: {msg}"]
    return rep


def main(argv: Optional[Sequence[str]] = None) -> int:
    rep = run(argv)
    fmt = rep.inputs.get("format", "text")
    stream = sys.stderr if rep.status == "ERROR" and fmt == "text" else sys.stdout
    print(rep.render(fmt), file=stream)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
