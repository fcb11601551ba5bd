"""Command-line driver: every computation emits a JSON certificate.

Exit status is 0 when all verdicts are positive, 1 on an inconclusive or
negative verdict and 2 on a usage error. Certificate bodies carry no
timestamps; run metadata goes to a detached ``<output>.meta.json`` file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Optional

from . import __version__

OUTPUT_DIR_ENV = "ARBOREAL_OUTPUT_DIR"
TOOL = {"name": "arboreal", "version": __version__}


class UsageError(Exception):
    pass


# -- individual computations ----------------------------------------------------------
# Each returns (ok, body). They take plain arguments so they can run in worker processes.

def run_unicritical(p: int, n_direct: int = 7) -> tuple[bool, dict]:
    from .maximality import verify_theorem1

    cert = verify_theorem1(p, n_direct=n_direct)
    return cert.verdict == "surjective", cert.to_json()


def run_quadratic(pmax: int) -> tuple[bool, dict]:
    from .quadfamily import (mod11_obstruction, mod13_value_reading, case_rules,
                             congruence_case_check, sweep)

    report = sweep(pmax)
    rules = [congruence_case_check(r) for r in case_rules()]
    body = report.to_json()
    body["case_rules"] = [{"rule": r.rule, "ok": r.ok, "classes": r.results, "failure": r.failure}
                          for r in rules]
    body["mod11_obstruction"] = mod11_obstruction()
    body["mod13_value_reading"] = {str(k): v for k, v in mod13_value_reading().items()}
    return report.all_certified and all(r.ok for r in rules), body


def run_bound(p: int, precision: int) -> tuple[bool, dict]:
    from .bounds import bound_report, delta_height

    rep = bound_report(p, precision)
    body = rep.to_json()
    h = delta_height(p, 6 if p == 3 else 4, precision)
    body["delta_height_at_0"] = h.to_json()
    ok = rep.n_bound > 0 and bool(rep.exclusion.get("excluded")) and h.lower > 0
    return ok, body


def run_jacobian_order(curve_spec: str, q: int) -> tuple[bool, dict]:
    from .hyperelliptic import jacobian_order

    curve = load_curve(curve_spec)
    order, lp = jacobian_order(curve, q)
    return True, {"curve": curve.to_json(), "name": curve.name, "q": q, "order": order,
                  "l_polynomial": list(lp.coeffs)}


def run_mwsieve(preset: Optional[str], config_path: Optional[str]) -> tuple[bool, dict]:
    from .mwsieve import SieveConfig, c2_preset, run_c2_pipeline

    if config_path:
        cfg = SieveConfig.from_json(json.loads(Path(config_path).read_text()))
    elif preset == "paper-C2":
        cfg = c2_preset()
    else:
        raise UsageError(f"unknown preset {preset!r}")
    body = run_c2_pipeline(cfg)
    return body.get("verdict") != "inconclusive", body


def run_eisenstein(p: int, i: int, nmax: int) -> tuple[bool, dict]:
    from .eisenstein import corollary_family_check, translation_family_check

    fam = corollary_family_check(p, i, nmax)
    translation = [row for row in translation_family_check(p) if row["i"] == i]
    ok = fam["verdict"] and all(r["translate"] and r["matches_target"] for r in translation)
    return ok, {"family": fam, "translation": translation}


def run_f_variant(p: int) -> tuple[bool, dict]:
    from .quadfamily import proposition_f_check

    out = proposition_f_check(p)
    return out["verdict"] in ("surjective", "stage3"), out


def run_x2() -> tuple[bool, dict]:
    from .quadfamily import x2_torsion_check

    out = x2_torsion_check()
    return out["gcd"] == 1, out


def run_c2_orders() -> tuple[bool, dict]:
    from .hyperelliptic import C2, jacobian_order

    orders = {str(q): jacobian_order(C2, q)[0] for q in (3, 5, 7, 11, 13)}
    return True, orders


def _reproduce_tasks() -> list[tuple[str, Callable, tuple]]:
    tasks = [(f"unicritical_p{p}", run_unicritical, (p,)) for p in (3, 5, 7)]
    tasks.append(("quadratic_sweep", run_quadratic, (5000,)))
    tasks.append(("bound_p3", run_bound, (3, 50)))
    tasks.append(("jacobian_C2", run_c2_orders, ()))
    tasks.append(("jacobian_X2", run_x2, ()))
    tasks.append(("mwsieve_C2", run_mwsieve, ("paper-C2", None)))
    for p in (3, 5, 7):
        for i in range(2, p + 1):
            tasks.append((f"eisenstein_p{p}_i{i}", run_eisenstein, (p, i, 2)))
    for p in (3, 7):
        tasks.append((f"f_variant_p{p}", run_f_variant, (p,)))
    return tasks


def _call(fn, args):
    return fn(*args)


def run_reproduce(jobs: int = 1) -> tuple[bool, dict]:
    tasks = _reproduce_tasks()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_call, [t[1] for t in tasks], [t[2] for t in tasks]))
    else:
        results = [fn(*args) for _, fn, args in tasks]
    sections = {}
    verdicts = {}
    for (name, _, _), (ok, body) in zip(tasks, results):
        sections[name] = body
        verdicts[name] = ok
    sweep_body = sections["quadratic_sweep"]
    bound_body = sections["bound_p3"]
    discrepancies = []
    if not sweep_body.get("published_exceptional_match"):
        extra = sorted(set(sweep_body["exceptional"]) - set(_published_exceptional()))
        discrepancies.append({"item": "exceptional primes", "extra": extra,
                              "missing": sorted(set(_published_exceptional()) - set(sweep_body["exceptional"]))})
    if sweep_body.get("excluded"):
        discrepancies.append({"item": "prime count", "certified": sweep_body["certified"],
                              "primes_below_pmax": sweep_body["count"],
                              "excluded": sweep_body["excluded"]})
    if bound_body.get("discrepancy"):
        discrepancies.append({"item": "n_bound(3)", "computed": bound_body["n_bound"],
                              "published": bound_body["n_bound_published"]})
    body = {"verdicts": verdicts, "discrepancies": discrepancies, "sections": sections}
    return all(verdicts.values()), body


def _published_exceptional():
    from .quadfamily import PUBLISHED_EXCEPTIONAL

    return PUBLISHED_EXCEPTIONAL


# -- plumbing -------------------------------------------------------------------------

def load_curve(spec: str):
    from importlib import resources

    from .hyperelliptic import HyperCurve

    path = Path(spec)
    if path.exists():
        return HyperCurve.load(path)
    name = path.stem if path.suffix == ".json" else spec
    res = resources.files("arboreal.data").joinpath(f"{name}.json")
    if res.is_file():
        return HyperCurve.from_json(json.loads(res.read_text()), name=name)
    raise UsageError(f"no curve file {spec!r}")


def _positive(kind):
    def check(s):
        v = int(s)
        if v < kind:
            raise argparse.ArgumentTypeError(f"must be at least {kind}")
        return v
    return check


def _odd_prime(s):
    import gmpy2

    v = int(s)
    if v < 3 or not gmpy2.is_prime(v):
        raise argparse.ArgumentTypeError("must be an odd prime")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arboreal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"arboreal {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the certificate here ('-' for stdout)")
    common.add_argument("--jobs", type=_positive(1), default=1, help="worker processes")
    common.add_argument("--no-deterministic", dest="deterministic", action="store_false",
                        help="allow unordered output")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("verify-unicritical", parents=[common], help="phi_p over Q(zeta_p), p = 3, 5, 7")
    s.add_argument("--p", type=int, required=True, choices=(3, 5, 7))
    s.add_argument("--n-direct", type=_positive(1), default=7)

    s = sub.add_parser("verify-quadratic", parents=[common], help="quadratic family sweep")
    s.add_argument("--pmax", type=_positive(3), default=5000)

    s = sub.add_parser("bound", parents=[common], help="effective index bound")
    s.add_argument("--p", type=_odd_prime, required=True)
    s.add_argument("--precision", type=_positive(30), default=50)

    s = sub.add_parser("jacobian-order", parents=[common], help="#J(F_q) for a curve file")
    s.add_argument("--curve", required=True)
    s.add_argument("--q", type=_odd_prime, required=True)

    s = sub.add_parser("mwsieve", parents=[common], help="Mordell-Weil sieve")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--preset", choices=("paper-C2",))
    g.add_argument("--config")

    s = sub.add_parser("eisenstein", parents=[common], help="Eisenstein checks for phi_(p,i)")
    s.add_argument("--p", type=_odd_prime, required=True)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--nmax", type=_positive(1), default=3)

    sub.add_parser("reproduce-paper", parents=[common], help="run every computation")
    return parser


def dispatch(args: argparse.Namespace) -> tuple[bool, dict]:
    cmd = args.command
    if cmd == "verify-unicritical":
        return run_unicritical(args.p, args.n_direct)
    if cmd == "verify-quadratic":
        return run_quadratic(args.pmax)
    if cmd == "bound":
        return run_bound(args.p, args.precision)
    if cmd == "jacobian-order":
        return run_jacobian_order(args.curve, args.q)
    if cmd == "mwsieve":
        return run_mwsieve(args.preset, args.config)
    if cmd == "eisenstein":
        if not 2 <= args.i <= args.p:
            raise UsageError("--i must satisfy 2 <= i <= p")
        return run_eisenstein(args.p, args.i, args.nmax)
    if cmd == "reproduce-paper":
        return run_reproduce(args.jobs)
    raise UsageError(f"unknown command {cmd!r}")


def config_of(args: argparse.Namespace) -> dict:
    skip = {"json", "jobs", "deterministic"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def summary(command: str, ok: bool, body: dict) -> str:
    if command == "jacobian-order":
        return str(body["order"])
    if command == "verify-unicritical":
        return f"p={body['p']} verdict={body['verdict']} survivors={len(body['survivors'])}"
    if command == "verify-quadratic":
        return (f"primes={body['count']} certified={body['certified']} status={body['status']} "
                f"exceptional={body['exceptional']}")
    if command == "bound":
        return f"p={body['p']} n_bound={body['n_bound']} published={body['n_bound_published']}"
    if command == "reproduce-paper":
        lines = [f"{k}: {'ok' if v else 'FAIL'}" for k, v in body["verdicts"].items()]
        lines += [f"discrepancy: {json.dumps(d, sort_keys=True)}" for d in body["discrepancies"]]
        return "\n".join(lines)
    return f"{command}: {'ok' if ok else 'inconclusive'}"


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def output_path(args: argparse.Namespace) -> Optional[str]:
    if args.json:
        return args.json
    root = os.environ.get(OUTPUT_DIR_ENV)
    if root:
        return str(Path(root) / f"{args.command}.json")
    return None


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.time()
    try:
        ok, body = dispatch(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"arboreal: error: {exc}", file=sys.stderr)
        return 2
    doc = {"tool": TOOL, "config": config_of(args), "verdict": "positive" if ok else "negative",
           "result": body}
    text = dumps(doc)
    out = output_path(args)
    if out == "-":
        sys.stdout.write(text)
    else:
        print(summary(args.command, ok, body))
        if out:
            path = Path(out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            meta = {"tool": TOOL, "config": config_of(args), "argv": list(argv or sys.argv[1:]),
                    "started": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
                    "elapsed_seconds": round(time.time() - started, 3)}
            path.with_name(path.name + ".meta.json").write_text(dumps(meta))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
