"""``chowforms`` command line: formula tables, verification suites, decompositions, point counts.

Exit codes: 0 success, 1 verification failure or inconsistent input,
2 usage error, 3 enumeration guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import chowlab, decomp, formulas
from .errors import (ChowformsError, EnumerationTooLarge, GenericityFailure, Inconsistent,
                     NotZeroDimensional, SplittingFailure)
from .exactalg import Field, PrimeField, Rationals, default_field
from .polyring import Form, Ring, apply, random_form, random_linears

SCHEMA_VERSION = 1
BINARY_DEFAULT_PRIME = 1000003

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    field: Field
    seed: int = 0
    retries: int = chowlab.DEFAULT_RETRIES
    enumeration_guard: int = chowlab.DEFAULT_GUARD
    output: str = "json"

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "seed": self.seed, "retries": self.retries,
                "enumeration_guard": self.enumeration_guard, "output": self.output}


def parse_range(text: str) -> list[int]:
    """``"a..b"`` (inclusive) or a single integer."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        out = list(range(int(lo), int(hi) + 1))
    else:
        out = [int(text)]
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


def parse_triple(text: str) -> tuple[int, int, int]:
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 3:
        raise UsageError("--synth expects n,d,s")
    return parts[0], parts[1], parts[2]


# --------------------------------------------------------------------------
# output


def emit(command: str, config: RunConfig, results: list[dict], out, csv_columns=None,
         text_lines=None) -> None:
    if config.output == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command,
               "config": config.to_json(), "results": results}
        out.write(json.dumps(doc, indent=2) + "\n")
    elif config.output == "csv":
        buf = io.StringIO()
        columns = csv_columns or sorted({k for r in results for k in r})
        writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for r in results:
            writer.writerow({k: _flat(v) for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        for line in (text_lines if text_lines is not None
                     else [json.dumps(r, sort_keys=True) for r in results]):
            out.write(line + "\n")


def _flat(v):
    return json.dumps(v) if isinstance(v, (dict, list)) else v


def _report_line(r: dict) -> str:
    status = "PASS" if r["pass"] else "FAIL"
    params = " ".join(f"{k}={v}" for k, v in r["params"].items() if not isinstance(v, list))
    pairs = " ".join(f"{k}={r['computed'].get(k)}/{v}" for k, v in r["expected"].items())
    extra = f" error={r['error']}" if "error" in r else ""
    return f"{status} {r['oracle_name']} {params} seed={r['seed']} {pairs}{extra}".rstrip()


# --------------------------------------------------------------------------
# subcommands


def cmd_formulas(args, config: RunConfig, out) -> int:
    rows = formulas.table(parse_range(args.n), parse_range(args.d),
                          zero_dim=args.zero_dim, defective=args.defective)
    results = []
    for r in rows:
        item = r.to_json()
        item["s"] = r.smin
        item["degree"] = str(r.vsh_degree)
        results.append(item)
    text = [f"{'d':>4} {'n':>4} {'s':>4} {'sexp':>5} {'dim':>6}  degree"]
    text += [f"{r.d:>4} {r.n:>4} {r.smin:>4} {r.sexp:>5} {r.vsh_dim:>6}  {r.vsh_degree}"
             for r in rows]
    emit("formulas", config, results, out, csv_columns=["d", "n", "s", "degree"],
         text_lines=text)
    if args.figure:
        from .plotting import plot_profiles
        plot_profiles(rows, args.figure)
    return EXIT_OK


SMALL_GRIDS = {
    "chow-tangent": [{"n": n, "s": s} for n in (2, 3, 4) for s in (2, 3, 4)],
    "ideal-claim": [{"n": n, "s": s} for n in (2, 3) for s in (3, 4)],
    "terracini": [{"n": n, "d": d} for n in (1, 2, 3) for d in range(1, 9)],
    "chow-degree": [{"n": 2, "s": 2}, {"n": 2, "s": 3}, {"n": 2, "s": 4}, {"n": 3, "s": 2}],
    "smoothness": [{"n": 2, "d": 5}, {"n": 2, "d": 8}],
    "roundtrip": [{"n": n, "d": d} for n in (1, 2, 3) for d in range(1, 7)],
}
SUITES = list(SMALL_GRIDS)
_REQUIRED = {"chow-tangent": ("n", "s"), "ideal-claim": ("n", "s"), "terracini": ("n", "d"),
             "chow-degree": ("n", "s"), "smoothness": ("n", "d"), "roundtrip": ("n", "d")}


def run_oracle(suite: str, cell: dict, seed: int, config: RunConfig, t_range=None) -> dict:
    field, retries = config.field, config.retries
    try:
        if suite == "chow-tangent":
            rep = chowlab.verify_chow_tangent(cell["n"], cell["s"], seed, field, retries)
        elif suite == "ideal-claim":
            s = cell["s"]
            ts = t_range or range(s - 1, s + 3)
            rep = chowlab.ideal_claim_hilbert_check(cell["n"], s, ts, seed, field, retries)
        elif suite == "terracini":
            rep = chowlab.verify_terracini(cell["n"], cell["d"], seed, field, retries)
        elif suite == "chow-degree":
            n, s = cell["n"], cell["s"]
            rep = chowlab.VerificationReport("chow-degree", {"n": n, "s": s}, seed, field)
            rep.computed = {"degree": chowlab.chow_degree_oracle(
                n, s, seed, field, retries, config.enumeration_guard)}
            rep.expected = {"degree": formulas.chow_degree(n, s)}
        elif suite == "smoothness":
            rep = decomp.verify_smoothness_case(cell["n"], cell["d"], seed, field, retries)
        elif suite == "roundtrip":
            rep = decomp.verify_roundtrip(cell["n"], cell["d"], cell.get("s"), seed, field,
                                          retries)
        else:
            raise UsageError(f"unknown suite {suite!r}")
    except (GenericityFailure, Inconsistent, NotZeroDimensional) as exc:
        return {"oracle_name": suite, "params": cell, "seed": seed,
                "field": field.to_json(), "computed": {}, "expected": {}, "pass": False,
                "retries_used": retries, "error": f"{type(exc).__name__}: {exc}"}
    return rep.to_json()


def cmd_verify(args, config: RunConfig, out) -> int:
    suites = SUITES if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {SUITES + ['all']}")
    t_range = parse_range(args.t) if args.t else None
    results = []
    for suite in suites:
        if args.grid == "small" or args.suite == "all":
            cells = SMALL_GRIDS[suite]
        else:
            cell = {k: getattr(args, k) for k in ("n", "d", "s") if getattr(args, k) is not None}
            missing = [k for k in _REQUIRED[suite] if k not in cell]
            if missing:
                raise UsageError(f"suite {suite} needs --{' --'.join(missing)}")
            cells = [cell]
        for cell in cells:
            for k in range(args.seeds):
                results.append(run_oracle(suite, cell, config.seed + k, config, t_range))
    emit("verify", config, results, out, text_lines=[_report_line(r) for r in results])
    return EXIT_OK if all(r["pass"] for r in results) else EXIT_FAIL


def _decompose_binary(args, config: RunConfig, out) -> int:
    field = config.field
    rng = random.Random(config.seed)
    if args.file:
        f = Form.from_json(json.loads(Path(args.file).read_text())["form"])
        planted = None
    else:
        if args.synth_d is None:
            raise UsageError("--binary needs --synth-d or --file")
        d = args.synth_d
        planted = random_linears(1, formulas.sstar(d), rng, field, Ring.S)
        f = Form.zero(1, d, Ring.S, field)
        for l in planted:
            f = f + l.power(d).scale(field.random(rng))
    try:
        terms = decomp.sylvester_binary(f, config.enumeration_guard)
    except SplittingFailure as exc:
        emit("decompose", config, [{"form": f.to_json(), "error": str(exc)}], out,
             text_lines=[f"SplittingFailure: {exc}"])
        return EXIT_FAIL
    total = Form.zero(1, f.degree, Ring.S, field)
    for c, l in terms:
        total = total + l.power(f.degree).scale(c)
    result = {
        "form": f.to_json(),
        "powers": [{"coefficient": field.format(c), "linear_form": l.to_json()}
                   for c, l in terms],
        "summands": len(terms),
        "residual_zero": (total - f).is_zero(),
    }
    if planted is not None:
        result["recovered_planted_points"] = (sorted(l.coeffs for l in planted)
                                              == sorted(l.coeffs for _, l in terms))
    text = [f"{field.format(c)} * ({l.coeffs[0]}*X0 + {l.coeffs[1]}*X1)^{f.degree}"
            for c, l in terms] + [f"residual zero: {result['residual_zero']}"]
    emit("decompose", config, [result], out, text_lines=text)
    return EXIT_OK if result["residual_zero"] else EXIT_FAIL


def cmd_decompose(args, config: RunConfig, out) -> int:
    if args.binary:
        return _decompose_binary(args, config, out)
    if args.synth:
        n, d, s = parse_triple(args.synth)
        inst = decomp.synth_instance(n, d, s, config.seed, config.field)
    elif args.file:
        inst = decomp.CodimOneInstance.from_json(json.loads(Path(args.file).read_text()))
    else:
        raise UsageError("decompose needs --synth n,d,s, --file or --binary")
    forward = decomp.forward_check(inst.f, inst.hyperplanes)
    try:
        rebuilt = decomp.reconstruct(inst.f, inst.hyperplanes,
                                     decomp.SamplingPlan.for_degree(inst.n, inst.d, config.seed),
                                     config.retries)
    except Inconsistent as exc:
        emit("decompose", config, [{"forward_check": forward, "error": str(exc)}], out,
             text_lines=[f"forward check: {forward}", f"Inconsistent: {exc}"])
        return EXIT_FAIL
    total = rebuilt.summands[0]
    for g in rebuilt.summands[1:]:
        total = total + g
    result = rebuilt.to_json()
    result["forward_check"] = forward
    result["residual_zero"] = (total - inst.f).is_zero()
    result["annihilated"] = [
        apply(L.to_form(), g).is_zero()
        for L, g in zip(rebuilt.hyperplanes, rebuilt.summands)]
    text = [f"forward check: {forward}",
            f"system: {rebuilt.equations} equations, {rebuilt.unknowns} unknowns"]
    for i, (L, g) in enumerate(zip(rebuilt.hyperplanes, rebuilt.summands)):
        text.append(f"summand {i + 1} (killed by {L.coeffs}): {g}")
    text.append(f"residual zero: {result['residual_zero']}")
    emit("decompose", config, [result], out, text_lines=text)
    ok = result["residual_zero"] and all(result["annihilated"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_count(args, config: RunConfig, out) -> int:
    field = config.field
    if args.file:
        inst = decomp.CodimOneInstance.from_json(json.loads(Path(args.file).read_text()))
        f, n, d = inst.f, inst.n, inst.d
        s = args.s if args.s is not None else inst.s
        source = "file"
    else:
        missing = [k for k in ("n", "d", "s") if getattr(args, k) is None]
        if missing:
            raise UsageError(f"count needs --{' --'.join(missing)} (or --file)")
        n, d, s = args.n, args.d, args.s
        if args.synthetic:
            f = decomp.synth_instance(n, d, s, config.seed, field).f
            source = "synthetic"
        else:
            f = random_form(n, d, config.seed, field)
            source = "random"
    count = decomp.vsh_point_count(f, s, config.enumeration_guard)
    result = {"n": n, "d": d, "s": s, "p": str(field.modulus), "source": source,
              "count": count, "smin": formulas.smin(n, d),
              "degree_bound": str(formulas.vsh_degree(n, d)),
              "vsh_dim": formulas.vsh_dim(n, d)}
    text = [f"rational points: {count}  (degree bound {result['degree_bound']}, "
            f"smin {result['smin']})"]
    emit("count", config, [result], out, text_lines=text)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--prime", type=int, default=None,
                        help="prime modulus (default $CHOWFORMS_FIELD_PRIME or 2147483647)")
    common.add_argument("--rationals", action="store_true", help="work over Q instead")
    common.add_argument("--retries", type=int, default=chowlab.DEFAULT_RETRIES)
    common.add_argument("--guard", type=int, default=chowlab.DEFAULT_GUARD,
                        help="enumeration guard")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--format", choices=["json", "csv", "text"], default=None)
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")

    parser = argparse.ArgumentParser(prog="chowforms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("formulas", parents=[common], help="closed-form invariants table")
    p.add_argument("--n", default="1..10", help="range a..b")
    p.add_argument("--d", default="1..10", help="range a..b")
    p.add_argument("--zero-dim", action="store_true", help="only rows with dim VSH = 0")
    p.add_argument("--defective", action="store_true", help="only rows with smin != sexp")
    p.add_argument("--figure", default=None, help="also write a PNG/PDF figure here")

    p = sub.add_parser("verify", parents=[common], help="run randomized oracles")
    p.add_argument("suite", help=f"one of {', '.join(SUITES)}, all")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", default=None, help="degree range for ideal-claim, a..b")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--grid", choices=["small"], default=None)

    p = sub.add_parser("decompose", parents=[common], help="codimension-one decomposition")
    p.add_argument("--synth", default=None, help="n,d,s")
    p.add_argument("--file", default=None, help="instance JSON (form + hyperplanes)")
    p.add_argument("--binary", action="store_true", help="Sylvester power-sum decomposition")
    p.add_argument("--synth-d", type=int, default=None)

    p = sub.add_parser("count", parents=[common], help="rational points of VSH over F_p")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--p", type=int, default=None, help="prime (alias of --prime)")
    p.add_argument("--synthetic", action="store_true", help="plant a decomposition")
    p.add_argument("--file", default=None)
    return parser


def _config(args) -> RunConfig:
    prime = args.prime if args.prime is not None else getattr(args, "p", None)
    if args.rationals:
        field: Field = Rationals()
    elif prime is not None:
        field = PrimeField(prime)
    elif args.command == "decompose" and args.binary:
        field = PrimeField(BINARY_DEFAULT_PRIME)
    else:
        field = default_field()
    output = args.format or ("text" if args.command == "decompose" else "json")
    return RunConfig(field, args.seed, args.retries, args.guard, output)


COMMANDS = {"formulas": cmd_formulas, "verify": cmd_verify, "decompose": cmd_decompose,
            "count": cmd_count}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        return COMMANDS[args.command](args, config, out)
    except (UsageError, ValueError) as exc:
        print(f"chowforms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationTooLarge as exc:
        print(f"chowforms: enumeration guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ChowformsError as exc:
        print(f"chowforms: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
