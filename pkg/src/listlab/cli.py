"""Command-line front end.

Exit codes: 0 success (decodable / certificate / artifact written), 1 a
violation was found by ``verify``, 2 usage, input, or resource errors, 3 an
attack ended in a stage failure (informational, not an error).

Every randomized subcommand requires an explicit --seed; identical flags and
seed produce byte-identical primary output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import attack as atk
from . import bounds as bnd
from . import construct as cons
from . import verifier as ver
from .errors import ListLabError
from .model import code_stats, load_code, save_code

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2
EXIT_STAGE_FAILED = 3


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r} ({e})")


def _frac_list(text: str):
    return [_frac(tok) for tok in text.split(",") if tok.strip()]


def _int_list(text: str):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _config_echo(args: argparse.Namespace) -> dict:
    echo = {}
    for key, val in sorted(vars(args).items()):
        if key == "func":
            continue
        echo[key] = str(val) if isinstance(val, Fraction) else val
    return echo


def _write_json(path, doc: dict):
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _emit(args, doc: dict):
    if getattr(args, "out", None):
        _write_json(args.out, {"config": _config_echo(args), **doc})


# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    code, _ = load_code(args.code)
    query = ver.RadiusQuery(p=args.p, L=args.L, mode=args.mode)
    if args.sample:
        v = ver.sampled_violation_search(code, query, samples=args.sample,
                                         seed=args.seed if args.seed is not None else 0)
        scope = f"sampled ({args.sample} subsets)"
    else:
        v = ver.is_list_decodable(code, query, max_subsets=args.max_subsets)
        scope = "exact"
    if v is None:
        print(f"decodable ({scope}): no (p={args.p}, L={args.L}) violation in {args.code}")
        _emit(args, {"result": {"decodable": True, "scope": scope}})
        return EXIT_OK
    print(f"VIOLATION ({scope}): indices {list(v.codeword_indices)} "
          f"distances {list(v.distances)} threshold {v.threshold} mode {v.mode}")
    _emit(args, {"result": {"decodable": False, "scope": scope},
                 "violation": v.to_json_dict()})
    return EXIT_VIOLATION


def cmd_radius(args) -> int:
    code, _ = load_code(args.code)
    t_star, witness = ver.exact_radius(code, args.L, max_subsets=args.max_subsets)
    print(f"t* = {t_star} (t*/n = {t_star}/{code.n} = {t_star / code.n:.4f}) for L={args.L}")
    doc = {"result": {"t_star": t_star, "n": code.n, "L": args.L}}
    if witness is not None:
        print(f"witness at t*+1: indices {list(witness.codeword_indices)} "
              f"distances {list(witness.distances)}")
        doc["violation"] = witness.to_json_dict()
    _emit(args, doc)
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.method == "greedy-subcode":
        code, _ = load_code(args.input_code)
        out = cons.greedy_distance_subcode(code, args.alpha)
        save_code(out, args.out, metadata={"construction": "greedy-subcode",
                                           "alpha": str(args.alpha)})
        print(f"kept {len(out)} of {len(code)} words at alpha={args.alpha}; wrote {args.out}")
        return EXIT_OK
    spec = cons.RandomCodeSpec(q=args.q, n=args.n, R=args.R, eps=args.eps,
                               L=args.L, seed=args.seed)
    code = cons.random_code(spec, cap=args.cap)
    meta = {"construction": args.method, "seed": str(args.seed), "R": str(args.R),
            "eps": str(args.eps), "L": str(args.L)}
    if args.method == "random-expurgated":
        p = bnd.generalized_singleton_radius(args.L, args.R, args.eps)
        before = len(code)
        code = cons.expurgate_violations(code, p, args.L, max_subsets=args.max_subsets)
        meta["p"] = str(p)
        print(f"expurgated {before - len(code)} of {before} words at p={p}")
    save_code(code, args.out, metadata=meta)
    stats = code_stats(code)
    print(f"wrote {len(code)} words (q={code.q}, n={code.n}, "
          f"min distance {stats.min_distance}) to {args.out}")
    return EXIT_OK


def cmd_family(args) -> int:
    family = cons.build_set_family(args.m, args.member_size, args.union_floor,
                                   seed=args.seed, target=args.target)
    cons.save_family(family, args.out)
    print(f"family: {len(family.sets)} sets of size {family.member_size} over "
          f"[{family.ground_size}], W={family.W}, union floor {family.union_floor}, "
          f"verified={family.verified}; wrote {args.out}")
    return EXIT_OK


def cmd_attack(args) -> int:
    code, _ = load_code(args.code)
    family = None
    if args.family:
        family = cons.load_family(args.family)

    if args.mode == "singleton":
        cert = atk.singleton_witness(code, args.L)
        report = atk.AttackReport(outcome="certificate", provenance="singleton_witness",
                                  certificate=cert,
                                  counters={"threshold": cert.threshold, "L": args.L})
    elif args.mode == "warmup1":
        report = atk.run_warmup1(code, cap=args.family_cap, seed=args.seed)
    elif args.mode == "warmup2":
        report = atk.run_warmup2(code, eps=args.eps, R=args.R, seed=args.seed,
                                 family=family)
    else:
        report = atk.run_general_attack(code, L=args.L, R=args.R, eps=args.eps,
                                        seed=args.seed, family=family,
                                        family_target=args.family_target)

    doc = {"report": report.to_json_dict()}
    if report.outcome == "certificate":
        cert = report.certificate
        ok = atk.verify_certificate(code, cert)
        print(f"CERTIFICATE ({report.provenance}, {cert.mode}): indices "
              f"{list(cert.codeword_indices)} distances {list(cert.distances)} "
              f"threshold {cert.threshold} verified={ok}")
        _emit(args, doc)
        if args.cert_out:
            _write_json(args.cert_out, cert.to_json_dict())
        return EXIT_OK
    print(f"stage_failed({report.failed_stage}) in {report.provenance}: "
          f"counters {json.dumps(report.counters, sort_keys=True)}")
    _emit(args, doc)
    return EXIT_STAGE_FAILED


def cmd_bounds(args) -> int:
    rows = []
    for L in args.L:
        for R in args.R:
            for eps in args.eps:
                row = bnd.theorem_bound_table([(L, R, eps)])[0]
                if args.q:
                    params = bnd.BoundParams(L=L, R=float(R), eps=float(eps),
                                             q=args.q, n=args.n)
                    verdict = bnd.capacity_check(params)
                    row["q"] = args.q
                    row["entropy_at_radius"] = verdict.entropy_at_radius
                    row["capacity_margin"] = verdict.margin
                    row["verdict"] = verdict.verdict
                rows.append(row)
    if args.csv:
        cols = list(rows[0].keys())
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        if args.csv == "-":
            sys.stdout.write(buf.getvalue())
        else:
            Path(args.csv).write_text(buf.getvalue())
            print(f"wrote {len(rows)} rows to {args.csv}")
    else:
        for row in rows:
            print(json.dumps(row, sort_keys=True))
    return EXIT_OK


SWEEP_COLUMNS = ["q", "seed", "n", "L", "R", "eps", "initial_size",
                 "expurgated_size", "t_star", "t_star_over_n", "target_pn",
                 "attack_outcome"]


def cmd_sweep(args) -> int:
    """One row per (q, seed): expurgated random code, its exact radius, attack outcome."""
    rows = []
    p = bnd.generalized_singleton_radius(args.L, args.R, args.eps)
    for q in args.q:
        for seed in range(args.seeds):
            spec = cons.RandomCodeSpec(q=q, n=args.n, R=args.R, eps=args.eps,
                                       L=args.L, seed=seed)
            code = cons.random_code(spec)
            initial = len(code)
            code = cons.expurgate_violations(code, p, args.L,
                                             max_subsets=args.max_subsets)
            t_star, _ = ver.exact_radius(code, args.L, max_subsets=args.max_subsets)
            try:
                report = atk.run_general_attack(code, L=args.L, R=args.R,
                                                eps=args.eps, seed=seed)
                outcome = (report.outcome if report.outcome == "certificate"
                           else f"stage_failed:{report.failed_stage}")
            except ListLabError as e:
                outcome = f"error:{type(e).__name__}"
            rows.append({
                "q": q, "seed": seed, "n": args.n, "L": args.L,
                "R": str(args.R), "eps": str(args.eps),
                "initial_size": initial, "expurgated_size": len(code),
                "t_star": t_star, "t_star_over_n": f"{t_star / args.n:.6f}",
                "target_pn": f"{float(p * args.n):.6f}",
                "attack_outcome": outcome,
            })
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.csv == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(args.csv).write_text(buf.getvalue())
        print(f"wrote {len(rows)} rows to {args.csv}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="listlab",
        description="Workbench for list-decoding radii: exact verification, "
                    "constructions, set families, and certificate attacks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exact (p, L)-list-decodability decision")
    p.add_argument("code", help="code file (text or .json)")
    p.add_argument("--p", type=_frac, required=True, help="relative radius, e.g. 1/3")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--mode", choices=ver.MODES, default="ordinary")
    p.add_argument("--max-subsets", type=int, default=ver.DEFAULT_MAX_SUBSETS)
    p.add_argument("--sample", type=int, default=0,
                   help="check N random subsets instead of the exact enumeration")
    p.add_argument("--seed", type=int, default=None, help="seed for --sample")
    p.add_argument("--out", help="write a JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("radius", help="largest decodable integer radius t*")
    p.add_argument("code")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--max-subsets", type=int, default=ver.DEFAULT_MAX_SUBSETS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("construct", help="random / expurgated / greedy-subcode codes")
    p.add_argument("--method", choices=["random", "random-expurgated", "greedy-subcode"],
                   default="random")
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--R", type=_frac)
    p.add_argument("--eps", type=_frac, default=Fraction(0))
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--seed", type=int)
    p.add_argument("--cap", type=int, default=cons.DEFAULT_CODE_CAP)
    p.add_argument("--max-subsets", type=int, default=ver.DEFAULT_MAX_SUBSETS)
    p.add_argument("--in", dest="input_code", help="input code for greedy-subcode")
    p.add_argument("--alpha", type=_frac, help="distance threshold for greedy-subcode")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("family", help="set family with verified W-wise unions")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--member-size", type=int, required=True)
    p.add_argument("--union-floor", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("attack", help="hunt for a bad list-decoding configuration")
    p.add_argument("--code", required=True)
    p.add_argument("--mode", choices=["general", "warmup1", "warmup2", "singleton"],
                   required=True)
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--R", type=_frac, default=None)
    p.add_argument("--eps", type=_frac, default=None)
    p.add_argument("--seed", type=int, default=None,
                   help="required for the randomized attack modes")
    p.add_argument("--family", help="family file overriding the built-in construction")
    p.add_argument("--family-cap", type=int, default=100_000,
                   help="cap on enumerated/sampled family size (warmup1)")
    p.add_argument("--family-target", type=int, default=None)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--cert-out", help="write the bare certificate JSON here")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("bounds", help="closed-form bound tables and capacity checks")
    p.add_argument("--L", type=_int_list, required=True, help="comma list, e.g. 2,3")
    p.add_argument("--R", type=_frac_list, required=True)
    p.add_argument("--eps", type=_frac_list, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--csv", help="CSV output path, or - for stdout")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="CSV experiment over alphabet sizes and seeds")
    p.add_argument("--q", type=_int_list, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--R", type=_frac, required=True)
    p.add_argument("--eps", type=_frac, required=True)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--max-subsets", type=int, default=ver.DEFAULT_MAX_SUBSETS)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_sweep)

    return parser


def _validate(args) -> None:
    if args.command == "construct":
        if args.method in ("random", "random-expurgated"):
            missing = [f for f in ("q", "n", "R") if getattr(args, f) is None]
            if missing:
                raise SystemExit(f"construct --method {args.method} needs --" +
                                 ", --".join(missing))
            if args.seed is None:
                raise SystemExit("randomized constructions require --seed")
        else:
            if args.input_code is None or args.alpha is None:
                raise SystemExit("greedy-subcode needs --in and --alpha")
    if args.command == "attack":
        if args.mode in ("general",) and (args.R is None or args.eps is None):
            raise SystemExit("attack --mode general needs --R and --eps")
        if args.mode == "warmup2" and args.eps is None:
            raise SystemExit("attack --mode warmup2 needs --eps")
        if args.mode in ("general", "warmup1", "warmup2") and args.seed is None:
            raise SystemExit(f"attack --mode {args.mode} requires --seed")
    if args.command == "verify" and args.sample and args.seed is None:
        raise SystemExit("verify --sample requires --seed")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except SystemExit as e:
        if isinstance(e.code, str):
            print(e.code, file=sys.stderr)
            return EXIT_ERROR
        raise
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except ListLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
