"""Command-line front end.

Exit status: 0 success, 1 a certified claim or checked condition failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__, germ, lattice, valgraph
from .algebra import GF, ParseError, default_prime, is_prime
from .exclusion import (LedgerConfig, format_claim, ledger_status, parse_claim, run_claim_ledger,
                        verify_ratio_bound)
from .exclusion.ratio import DenominatorError

SCHEMA = "fanorigid-report"
SCHEMA_VERSION = 1
CORRUPTIBLE = ("prop7",)


class UsageError(Exception):
    pass


def jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


@dataclass
class Report:
    command: str
    config: dict
    items: list = field(default_factory=list)
    status: int = 0
    tool_version: str = __version__

    def header(self) -> dict:
        return {"record": "header", "schema": SCHEMA, "schema_version": SCHEMA_VERSION,
                "tool_version": self.tool_version, "command": self.command, "config": self.config}

    def to_lines(self) -> list:
        recs = [self.header()] + [{"record": "item", **it} for it in self.items]
        recs.append({"record": "summary", "status": self.status, "items": len(self.items),
                     "overall": "pass" if self.status == 0 else "fail"})
        return [json.dumps(jsonable(r), sort_keys=True) for r in recs]

    @classmethod
    def from_lines(cls, lines) -> "Report":
        recs = [json.loads(line) for line in lines if line.strip()]
        if not recs or recs[0].get("record") != "header" or recs[0].get("schema") != SCHEMA:
            raise ValueError("not a structured report")
        if recs[0]["schema_version"] != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {recs[0]['schema_version']}")
        h = recs[0]
        items = [{k: v for k, v in r.items() if k != "record"} for r in recs[1:] if r["record"] == "item"]
        summary = [r for r in recs if r["record"] == "summary"]
        status = summary[-1]["status"] if summary else 0
        return cls(h["command"], h["config"], items, status, h["tool_version"])


def parse_range(text: str) -> tuple:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected A..B or A") from None
    return lo, hi


def parse_corrupt(values) -> tuple:
    out = []
    for v in values or ():
        name, sep, val = v.partition("=")
        if not sep or name not in CORRUPTIBLE:
            raise UsageError(f"--corrupt expects one of {', '.join(CORRUPTIBLE)} as NAME=VALUE")
        try:
            out.append((name, Fraction(val)))
        except ValueError:
            raise UsageError(f"bad value in --corrupt {v!r}") from None
    return tuple(out)


def _prime(value: Optional[int]) -> int:
    p = default_prime() if value is None else value
    if p < 3 or not is_prime(p):
        raise UsageError(f"prime must be an odd prime, got {p}")
    return p


def _emit(report: Report, fmt: str, out, human_lines) -> None:
    if fmt == "structured":
        for line in report.to_lines():
            print(line, file=out)
    else:
        for line in human_lines:
            print(line, file=out)
        print(f"status: {report.status}", file=out)


# commands -----------------------------------------------------------------------------------

def cmd_verify_claims(args) -> Report:
    if args.claim_file:
        try:
            with open(args.claim_file) as fh:
                claim = parse_claim(fh.read())
        except OSError as exc:
            raise UsageError(str(exc)) from None
        cert = verify_ratio_bound(claim)
        rep = Report("verify-claims", {"claim_file": os.path.basename(args.claim_file)},
                     [{"kind": "claim", "claim_text": format_claim(claim), **cert.to_dict()}],
                     0 if cert.holds else 1)
        return rep
    lo, hi = parse_range(args.M)
    corrupt = parse_corrupt(args.corrupt)
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs < 1:
        raise UsageError("--jobs must be positive")
    cfg = LedgerConfig(M_min=lo, M_max=hi, corrupt=corrupt,
                       include_experimental=not args.no_experimental, jobs=jobs)
    results = run_claim_ledger(cfg)
    status = ledger_status(results, strict_mu3=args.strict_mu3)
    config = {"M": [lo, hi], "corrupt": {k: str(v) for k, v in corrupt},
              "experimental": cfg.include_experimental, "strict_mu3": args.strict_mu3}
    return Report("verify-claims", config, [{"kind": "case", **r.to_dict()} for r in results], status)


def _human_claims(rep: Report) -> list:
    lines = []
    for it in rep.items:
        if it["kind"] == "claim":
            lines.append(f"claim: {it['claim']}")
            lines.append(f"verdict: {it['verdict']} (min of N - cD on the slice: {it['minimum_of_gap']})")
            if "identity" in it:
                lines.append(f"identity: {it['identity']}")
            if "violator" in it:
                lines.append(f"violating point: {it['violator']}")
            continue
        tag = " [experimental]" if it["experimental"] else ""
        params = ", ".join(f"{k}={v}" for k, v in it["params"].items())
        mark = "ok " if it["ok"] else "BAD"
        lines.append(f"{mark} {it['case']}({params}): {it['verdict']}{tag}")
        if not it["ok"]:
            for c in it["certificates"]:
                if c["verdict"] != "holds":
                    lines.append(f"    claim {c['claim']} fails; violating point {c.get('violator')}")
    n_bad = sum(1 for it in rep.items if it["kind"] == "case" and not it["ok"])
    lines.append(f"{len(rep.items)} items, {n_bad} not as expected")
    return lines


def _load_germ(args, prime: int):
    if args.random:
        try:
            M, mu, seed = (int(x) for x in args.random)
        except ValueError:
            raise UsageError("--random expects integers M MU SEED") from None
        try:
            return germ.random_germ(M, mu, seed, GF(prime)), {"random": [M, mu, seed]}
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not args.germ:
        raise UsageError("give a germ file or --random M MU SEED")
    try:
        with open(args.germ) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return germ.parse_germ(text, GF(prime)), {"file": os.path.basename(args.germ)}


def cmd_check_regularity(args) -> Report:
    prime = _prime(args.prime)
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    g, src = _load_germ(args, prime)
    try:
        rep = germ.check_regularity(g, sample_count=args.samples, seed=args.seed, prime=prime)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    items = []
    for name, c in rep.conditions.items():
        items.append({"kind": "condition", "condition": name, "verdict": c.verdict,
                      "witness": jsonable(c.witness), "detail": jsonable(c.detail)})
    if args.base_locus:
        for i in range(rep.mu, g.M):
            items.append({"kind": "base_locus", "i": i, "codim": germ.base_locus_codim(g, i, prime),
                          "expected": i - rep.mu + 1})
    config = {**src, "prime": prime, "samples": args.samples, "seed": args.seed,
              "M": rep.M, "mu": rep.mu, "notes": rep.notes}
    return Report("check-regularity", config, items, 0 if rep.passed() else 1)


def _human_regularity(rep: Report) -> list:
    c = rep.config
    lines = [f"germ M={c['M']} mu={c['mu']} over GF({c['prime']}), samples={c['samples']}"]
    for n in c["notes"]:
        lines.append(f"note: {n}")
    for it in rep.items:
        if it["kind"] == "condition":
            line = f"condition ({it['condition']}): {it['verdict']}"
            if it["verdict"] == "fail":
                line += f"; witness {it['witness']}"
            lines.append(line)
        else:
            lines.append(f"base locus codim for i={it['i']}: {it['codim']} (expected {it['expected']})")
    return lines


def _read_rows(path: str) -> list:
    try:
        with open(path) as fh:
            rows = [ln.split("#", 1)[0].split() for ln in fh]
    except OSError as exc:
        raise UsageError(str(exc)) from None
    rows = [r for r in rows if r]
    try:
        return [[Fraction(x) for x in r] for r in rows]
    except ValueError:
        raise ParseError(f"non-rational entry in {os.path.basename(path)}") from None


def cmd_graph(args) -> Report:
    try:
        with open(args.graph) as fh:
            g = valgraph.parse_graph(fh.read())
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except valgraph.GraphError as exc:
        raise UsageError(str(exc)) from None
    mu, M = args.mu, args.M
    items = []
    p = valgraph.path_counts(g)
    items.append({"kind": "paths", "p": p})
    items.append({"kind": "weights", "base": g.L, "w": valgraph.weights(g, g.L, mu=mu)})
    work = g
    if g.L >= 1:
        before = valgraph.estimate2_holds(g)
        work = valgraph.prune_to_estimate2(g)
        removed = sorted(set(g.arrows) - set(work.arrows))
        items.append({"kind": "prune", "removed": removed, "held_before": before,
                      "holds_after": valgraph.estimate2_holds(work)})
    pw = valgraph.path_counts(work)
    threshold = valgraph.prop6_threshold(work, M, pw)
    items.append({"kind": "threshold", "value": threshold, "p": pw})
    if args.nu:
        rows = _read_rows(args.nu)
        if len(rows) < 2 or len(rows[0]) != 1 or len(rows[1]) != g.K + 1:
            raise ParseError(f"nu file needs 'n' then {g.K + 1} values")
        n, nu = rows[0][0], rows[1]
        nf = valgraph.noether_fano(pw, g.deltas, nu, n)
        items.append({"kind": "noether_fano", "holds": nf})
    if args.m:
        rows = _read_rows(args.m)
        if len(rows) < 2 or len(rows[0]) != 1 or len(rows[1]) != g.L + 1:
            raise ParseError(f"m file needs 'deg Y' then {g.L + 1} values m0..mL")
        degY, ms = rows[0][0], rows[1]
        lhs = valgraph.prop6_lhs(work, mu, ms[0], ms[1:], pw)
        rhs = threshold * degY
        items.append({"kind": "estimate", "lhs": lhs, "rhs": rhs, "holds": lhs > rhs})
    return Report("graph", {"file": os.path.basename(args.graph), "mu": mu, "M": M}, items, 0)


def _human_graph(rep: Report) -> list:
    lines = []
    for it in rep.items:
        k = it["kind"]
        if k == "paths":
            lines.append("p = " + " ".join(map(str, it["p"])))
        elif k == "weights":
            lines.append(f"w_{{{it['base']},i}} = " + " ".join(map(str, it["w"])))
        elif k == "prune":
            lines.append(f"pruned arrows {it['removed']}; p0 <= sum of lower p: "
                         f"before {it['held_before']}, after {it['holds_after']}")
        elif k == "threshold":
            lines.append(f"threshold per unit degree: {it['value']}")
        elif k == "noether_fano":
            lines.append(f"Noether-Fano inequality: {'holds' if it['holds'] else 'fails'}")
        elif k == "estimate":
            lines.append(f"estimate: lhs {it['lhs']} vs rhs {it['rhs']}: {'holds' if it['holds'] else 'fails'}")
    return lines


def cmd_involution(args) -> Report:
    M, n, nu0 = args.M, args.n, args.nu0
    if M < 4:
        raise UsageError("need M >= 4")
    T = lattice.tau_matrix(M)
    cls = lattice.DivisorClass(n, nu0, M, M - 2)
    once = lattice.tau_action(cls)
    twice = lattice.tau_action(once)
    items = [
        {"kind": "tau", "matrix": [list(r) for r in T], "tau_squared_identity": twice == cls},
        {"kind": "class", "image": [once.a, once.b]},
        {"kind": "bound", "value": lattice.maximality_bound(M)},
    ]
    if nu0 <= n:
        items.append({"kind": "untwist", "maximal": False, "message": "point not maximal; untwisting not needed"})
    else:
        r = lattice.untwist_check(n, nu0, M)
        tight = Fraction(nu0, n) == lattice.maximality_bound(M)
        items.append({"kind": "untwist", "maximal": True, "new_n": r.new_n, "new_nu": r.new_nu,
                      "maximal_removed": r.maximal_removed, "at_bound": tight})
    return Report("involution", {"M": M, "n": n, "nu0": nu0}, items, 0)


def _human_involution(rep: Report) -> list:
    lines = []
    for it in rep.items:
        k = it["kind"]
        if k == "tau":
            lines.append(f"tau = {it['matrix']}; tau^2 = id: {it['tau_squared_identity']}")
        elif k == "class":
            lines.append(f"tau({rep.config['n']}H - {rep.config['nu0']}E) = {it['image'][0]}H - {it['image'][1]}E")
        elif k == "bound":
            lines.append(f"nu0/n bound: {it['value']}")
        elif not it["maximal"]:
            lines.append(it["message"])
        else:
            lines.append(f"untwisted: ({it['new_n']}, {it['new_nu']}); maximality removed: "
                         f"{it['maximal_removed']}; nu0/n at the bound: {it['at_bound']}")
    return lines


def cmd_random_germ(args) -> str:
    prime = _prime(args.prime)
    make = germ.engineered_irregular_germ if args.irregular else germ.random_germ
    try:
        g = make(args.M, args.mu, args.seed, GF(prime))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return germ.format_germ(g)


# entry point --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fanorigid", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--output", help="write the report here instead of stdout")

    v = sub.add_parser("verify-claims", help="run the claim ledger or a single claim file")
    v.add_argument("--M", default="5..30", help="range A..B of M values")
    v.add_argument("--corrupt", action="append", metavar="NAME=VALUE", help="test hook: replace a bound")
    v.add_argument("--jobs", type=int, default=None)
    v.add_argument("--strict-mu3", action="store_true", help="let the experimental mu=3 chain affect status")
    v.add_argument("--no-experimental", action="store_true")
    v.add_argument("--claim-file")
    common(v)

    c = sub.add_parser("check-regularity", help="check the regularity conditions of a germ")
    c.add_argument("germ", nargs="?")
    c.add_argument("--random", nargs=3, metavar=("M", "MU", "SEED"))
    c.add_argument("--prime", type=int)
    c.add_argument("--samples", type=int, default=8)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--base-locus", action="store_true")
    common(c)

    g = sub.add_parser("graph", help="evaluate a resolution graph")
    g.add_argument("graph")
    g.add_argument("--mu", type=int, required=True)
    g.add_argument("--M", type=int, required=True)
    g.add_argument("--nu")
    g.add_argument("--m")
    common(g)

    i = sub.add_parser("involution", help="the involution at a point of multiplicity M-2")
    i.add_argument("--M", type=int, required=True)
    i.add_argument("--n", type=int, required=True)
    i.add_argument("--nu0", type=int, required=True)
    common(i)

    r = sub.add_parser("random-germ", help="print a seeded random germ")
    r.add_argument("M", type=int)
    r.add_argument("mu", type=int)
    r.add_argument("seed", type=int)
    r.add_argument("--prime", type=int)
    r.add_argument("--irregular", action="store_true")
    r.add_argument("--output")
    return ap


_COMMANDS = {
    "verify-claims": (cmd_verify_claims, _human_claims),
    "check-regularity": (cmd_check_regularity, _human_regularity),
    "graph": (cmd_graph, _human_graph),
    "involution": (cmd_involution, _human_involution),
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "random-germ":
            text = cmd_random_germ(args)
            _write(args.output, lambda out: out.write(text))
            return 0
        run, human = _COMMANDS[args.command]
        report = run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, DenominatorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(args.output, lambda out: _emit(report, args.format, out, human(report)))
    return report.status


def _write(path, fn) -> None:
    if path:
        with open(path, "w") as fh:
            fn(fh)
    else:
        fn(sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
