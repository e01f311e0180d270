"""Command-line front end: ``singleton-lab <subcommand> ...``.

Exit status is 0 on success or admissible input, 1 when a violation or
failure is found, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import bounds, gf, propagate, stabilizer, verify
from .errors import SingletonLabError

SEED_ENV = "SINGLETON_LAB_SEED"
FORMATS = ("human", "json-lines", "csv")


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        if "." in text or "e" in text.lower():
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected an integer or p/q rational, got {text!r}") from None


def _params(text: str, pure: bool) -> bounds.CodeParams:
    parts = text.split(",")
    if len(parts) not in (4, 5):
        raise UsageError("--params takes n,k,d,c[,q]")
    try:
        n, d = int(parts[0]), int(parts[2])
        q = int(parts[4]) if len(parts) == 5 else 2
    except ValueError:
        raise UsageError(f"n, d and q must be integers in {text!r}") from None
    try:
        return bounds.CodeParams(
            n, _fraction(parts[1]), d, _fraction(parts[3]), q, True if pure else None, "cli"
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer") from None


class Out:
    """Writes records in the selected format."""

    def __init__(self, fmt: str, stream):
        self.fmt, self.stream = fmt, stream
        self._csv = None

    def record(self, data: dict, human: str) -> None:
        if self.fmt == "json-lines":
            self.stream.write(json.dumps(data, sort_keys=True) + "\n")
        elif self.fmt == "csv":
            flat = {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in data.items()}
            if self._csv is None:
                self._csv = csv.DictWriter(self.stream, fieldnames=list(flat), lineterminator="\n")
                self._csv.writeheader()
            self._csv.writerow(flat)
        else:
            self.stream.write(human.rstrip("\n") + "\n")


# --- subcommands -----------------------------------------------------------------

def cmd_check(args, out: Out) -> int:
    verdict = bounds.classify(_params(args.params, args.pure))
    lines = [f"{verdict.params}: {'admissible' if verdict.admissible else 'VIOLATION'}"]
    for c in verdict.checks:
        if not c.applicable:
            lines.append(f"  {c.bound}: not applicable")
        else:
            mark = "tight" if c.tight else ("ok" if c.satisfied else "violated")
            lines.append(f"  {c.bound}: k={c.lhs} <= {c.rhs}  {mark}")
    if verdict.eaqmds:
        lines.append("  on the upper boundary (EAQMDS)")
    out.record(verdict.to_dict(), "\n".join(lines))
    return 0 if verdict.admissible else 1


def cmd_region(args, out: Out) -> int:
    try:
        region = bounds.rate_region(_fraction(args.delta))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(bounds.region_svg([region]))
    if out.fmt == "csv":
        out.stream.write(bounds.region_to_csv(region))
        return 0
    data = {
        "delta": str(region.delta),
        "regime": region.regime,
        "vertices": [[str(x), str(y)] for x, y in region.vertices],
        "points": {k: [str(x), str(y)] for k, (x, y) in sorted(region.points.items())},
        "segments": [
            {"start": [str(v) for v in s.start], "end": None if s.end is None else [str(v) for v in s.end],
             "status": s.status, "slope": str(bounds.segment_slope(s))}
            for s in region.segments
        ],
    }
    human = [f"delta={region.delta} ({region.regime})", f"vertices {bounds.vertices_str(region)}"]
    human += [f"  {k} = ({x},{y})" for k, (x, y) in sorted(region.points.items())]
    for s in region.segments:
        end = "inf" if s.end is None else f"({s.end[0]},{s.end[1]})"
        human.append(f"  segment ({s.start[0]},{s.start[1]}) -> {end}: slope {bounds.segment_slope(s)}, {s.status}")
    out.record(data, "\n".join(human))
    return 0


def cmd_propagate(args, out: Out) -> int:
    try:
        db = propagate.load_database(args.db)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        records = propagate.closure(db, max_steps=args.max_steps, unsound=args.unsound)
    except SingletonLabError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    for rec in records:
        p = rec.params
        data = {
            "n": p.n, "k": str(p.k), "d": p.d, "c": str(p.c), "q": p.q, "pure": p.pure,
            "existence": rec.existence, "trail": [[r, str(par)] for r, par in rec.trail],
            "admissible": bounds.classify(p).admissible,
        }
        out.record(data, propagate.format_record(rec))
    return 0


def cmd_verify_code(args, out: Out) -> int:
    corpus = stabilizer.load_corpus()
    if args.name not in corpus:
        raise UsageError(f"unknown code {args.name!r}; known: {', '.join(sorted(corpus))}")
    code = corpus[args.name].code
    kl = stabilizer.knill_laflamme_check(code, args.d)
    dec = verify.check_decoupling(stabilizer.purified_code_state(code), args.d)
    worst = dec.worst
    data = {
        "name": args.name, "q": code.q, "n": code.n, "k": code.k, "d": args.d,
        "distance_at_least": kl.distance_at_least, "pure": kl.pure,
        "witness": None if kl.witness is None else kl.witness.label(),
        "decoupled": dec.correctable,
        "worst_mutual_information": None if worst is None else worst.mutual_information,
        "sigma_bar": dec.sigma_bar, "s_ref": dec.s_ref,
    }
    human = [
        f"{args.name} [[{code.n},{code.k}]]_{code.q} at d={args.d}: "
        f"distance {'ok' if kl.distance_at_least else 'FAILS'}, {'pure' if kl.pure else 'not pure'}",
        f"  decoupling {'holds' if dec.correctable else 'FAILS'}"
        + ("" if worst is None else f", worst I(R:{','.join(worst.erased)}) = {worst.mutual_information:.3e}"),
    ]
    ok = kl.distance_at_least and dec.correctable
    if args.theorem5 is not None:
        try:
            wit = propagate.theorem5_execute(code, args.theorem5, args.d)
            data["theorem5"] = {"params": str(wit.params), "bin_deviation": wit.bin_deviation,
                                "vacuous": wit.vacuous, "eaqmds": bounds.classify(wit.params).eaqmds}
            human.append(f"  certified {wit.params}" + (" (vacuous)" if wit.vacuous else ""))
        except SingletonLabError as exc:
            data["theorem5"] = {"error": type(exc).__name__, "message": str(exc)}
            human.append(f"  shortened-code certificate failed: {type(exc).__name__}: {exc}")
            ok = False
    out.record(data, "\n".join(human))
    return 0 if ok else 1


def cmd_fuzz(args, out: Out) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    report = verify.fuzz(args.lemma, args.trials, dim_budget=args.dim_budget, seed=seed)
    data = report.to_dict()
    data.pop("elapsed")
    human = f"lemma {report.lemma}: {report.trials} trials, worst margin {data['worst_margin']}, " \
            f"{len(report.violations)} violations (seed {seed})"
    human += "".join(f"\n  violation seed={v.seed} dims={v.dims} margin={v.margin}" for v in report.violations)
    out.record(data, human)
    return 0 if report.ok else 1


def cmd_construct(args, out: Out) -> int:
    try:
        field = gf.field_of_order(args.q)
        code = gf.reed_solomon(field, args.n, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        dist = gf.min_distance(code)
    except SingletonLabError:
        dist = gf.min_distance_by_rank(code)
    data = {"q": args.q, "n": code.n, "k": code.k, "min_distance": dist,
            "mds": dist == code.n - code.k + 1, "generator": [list(r) for r in code.generator],
            "polynomial": list(field.poly)}
    human = [f"RS[{code.n},{code.k}] over {field}: min distance {dist}"]
    human += ["  " + " ".join(map(str, row)) for row in code.generator]
    out.record(data, "\n".join(human))
    return 0 if data["mds"] else 1


def cmd_simulate(args, out: Out) -> int:
    try:
        report = verify.protocol_campaign(args.scheme, args.q, args.n, args.d, seed=_default_seed())
    except (ValueError, SingletonLabError) as exc:
        raise UsageError(str(exc)) from None
    data = report.to_dict()
    human = f"{report.scheme} q={report.q} n={report.n} d={report.d}: k={report.k} c={report.c}, " \
            f"{report.runs} runs over {report.patterns} erasure patterns, {report.failures} failures, " \
            f"point {'inside' if report.in_region else 'OUTSIDE'} the rate region"
    out.record(data, human)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singleton-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=FORMATS, default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify code parameters against every bound")
    p.add_argument("--params", required=True, help="n,k,d,c[,q]; k and c may be p/q")
    p.add_argument("--pure", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("region", help="rate region for a relative distance")
    p.add_argument("--delta", required=True, help="p/q")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("propagate", help="closure of a code database under the propagation rules")
    p.add_argument("--db", help="database file (default: bundled)")
    p.add_argument("--max-steps", type=int, default=64)
    p.add_argument("--unsound", action="store_true", help="also enable the unsound shortening rule")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("verify-code", help="check a named stabilizer code")
    p.add_argument("--name", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--theorem5", type=int, metavar="C", help="also certify the shortened EA code")
    p.set_defaults(func=cmd_verify_code)

    p = sub.add_parser("fuzz", help="random-state campaign for an entropy inequality")
    p.add_argument("--lemma", choices=("1", "2", "ssa"), required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--dim-budget", type=int, default=512)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("construct", help="build a classical code")
    p.add_argument("family", choices=("rs",))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", help="run a protocol over every erasure pattern")
    p.add_argument("scheme", choices=("densecoding", "mdspoint"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args, Out(args.format, stdout))
    except UsageError as exc:
        sys.stderr.write(f"singleton-lab: {exc}\n")
        return 2


def run(argv: list[str]) -> tuple[int, str]:
    """Run a command and capture its standard output."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
