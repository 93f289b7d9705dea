"""Command-line interface.

Every command prints one JSON document (or a CSV growth table, or a plain
text table) and exits with 0 on success, 1 on a verification failure with a
witness, 2 on a usage error and 3 when a cap is hit or a constant is left
uncertified.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction

from . import report
from .errors import (
    CapExceeded,
    HypGrowthError,
    K1Uncertified,
    N0Uncertified,
    NotFound,
    PresetError,
    RelationFound,
    VerificationFailure,
)
from .growth import beta, uniform_growth_certificate
from .horoballs import compute_k1, default_h0, ford_system, invariance_check
from .isometry import GroupElement, classify, element
from .pingpong import algebraic_free_oracle, certify_free
from .presets import get_preset, parse_gens
from .search import compute_n0, find_hyperbolic_in_ball, generating_set
from .verify import SUITES, TrialConfig, run_all

WORKERS_ENV = "HYPGROWTH_WORKERS"


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _group(args):
    return get_preset(args.group, args.delta, args.matrices)


def _gens(group, text):
    words = parse_gens(group, text)
    labels = [p.strip() for p in text.split(",") if p.strip()] if text else None
    return generating_set(group, words, labels)


# --------------------------------------------------------------- commands


def cmd_classify(args):
    group = _group(args)
    g = element(group, args.word)
    cl = classify(g)
    return {"group": group.id, "element": g.to_json(), "classification": cl.to_json()}


def cmd_growth(args):
    group = _group(args)
    S = _gens(group, args.gens)
    return beta(S, args.radius, cap=args.cap)


def cmd_find_hyperbolic(args):
    group = _group(args)
    S = _gens(group, args.gens)
    return find_hyperbolic_in_ball(S, args.max_radius, cap=args.cap)


def cmd_pingpong(args):
    group = _group(args)
    if args.g1 or args.g2:
        if not (args.g1 and args.g2):
            raise PresetError("--g1 and --g2 go together")
        g1, g2 = element(group, args.g1), element(group, args.g2)
        rep = algebraic_free_oracle(g1, g2, args.oracle_len, args.workers)
        if not rep.passed:
            raise RelationFound(f"relation {rep.witness} = 1 between g1 and g2", rep.witness)
        return {"mode": "oracle-only", "g1": g1.to_json(), "g2": g2.to_json(), "oracle": rep.to_json()}
    if not (args.s and args.gamma):
        raise PresetError("pingpong needs --s and --gamma (or --g1 and --g2)")
    s, gamma = element(group, args.s), element(group, args.gamma)
    k1 = args.k1
    if k1 is None:
        sysm = ford_system(3, default_h0(group.model.delta)) if group.cusped else None
        k1 = compute_k1(group, sysm, raise_uncertified=False).k1
    return certify_free(s, gamma, k1, args.oracle_len, workers=args.workers)


def cmd_certify(args):
    group = _group(args)
    S = _gens(group, args.gens)
    return uniform_growth_certificate(group, S, n_max=args.max_radius, oracle_len=args.oracle_len,
                                      workers=args.workers, with_n0=not args.skip_n0)


def cmd_horoballs(args):
    group = _group(args)
    if group.kind != "matrix" or not group.cusped:
        raise PresetError(f"preset {group.id} has no cusps")
    h0 = Fraction(args.h0) if args.h0 is not None else default_h0(group.model.delta)
    sysm = ford_system(args.Q, h0)
    gens = [GroupElement(group, ((i, 1),)) for i in range(len(group.gens))]
    inv = invariance_check(sysm, gens)
    return {"group": group.id, "system": sysm.to_json(), "invariance": inv.to_json()}


def cmd_verify(args):
    cfg = TrialConfig(args.model, args.seed, args.trials,
                      args.tolerance if args.tolerance is not None else 1e-6,
                      args.delta if args.delta is not None else 1.0, args.workers)
    suites = tuple(args.lemmas.split(",")) if args.lemmas else SUITES
    out = run_all(cfg, suites)
    if any(r.failed for r in out["reports"]):
        failed = [r.lemma for r in out["reports"] if r.failed]
        raise VerificationFailure(f"lemma suites with failures: {', '.join(failed)}",
                                  witness=report.clean(out))
    return out


def cmd_constants(args):
    group = _group(args)
    sysm = ford_system(3, default_h0(group.model.delta)) if group.cusped else None
    k1 = compute_k1(group, sysm, raise_uncertified=False)
    ledger = compute_n0(group, cap=args.cap, sysm=sysm, k1=k1, raise_uncertified=False)
    doc = ledger.to_json()
    doc["k1_detail"] = k1.to_json()
    if not k1.certified or ledger.n0_status == "uncertified":
        raise CapExceeded("constants left uncertified at the caps", partial=doc)
    return doc


COMMANDS = {
    "classify": cmd_classify,
    "growth": cmd_growth,
    "find-hyperbolic": cmd_find_hyperbolic,
    "pingpong": cmd_pingpong,
    "certify": cmd_certify,
    "horoballs": cmd_horoballs,
    "verify-lemmas": cmd_verify,
    "constants": cmd_constants,
}


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--deterministic", action="store_true",
                        help="omit timestamps and timings so reruns are byte-identical")
    common.add_argument("--workers", type=int, default=_default_workers(),
                        help=f"worker processes (default from ${WORKERS_ENV}, else 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--delta", type=float, default=None, help="hyperbolicity constant")
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--matrices", default=None,
                        help="generators of the custom preset, e.g. '1,2,0,1;1,0,2,1'")

    p = argparse.ArgumentParser(prog="hypgrowth",
                                description="Growth, ping-pong and horoball computations "
                                            "for groups acting on trees and the hyperbolic plane.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="classify an element")
    s.add_argument("--group", required=True)
    s.add_argument("--word", required=True)

    s = sub.add_parser("growth", parents=[common], help="exact ball counts")
    s.add_argument("--group", required=True)
    s.add_argument("--gens", default=None)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--cap", type=int, default=10_000_000)

    s = sub.add_parser("find-hyperbolic", parents=[common], help="shortest hyperbolic element")
    s.add_argument("--group", required=True)
    s.add_argument("--gens", default=None)
    s.add_argument("--max-radius", type=int, default=12)
    s.add_argument("--cap", type=int, default=10_000_000)

    s = sub.add_parser("pingpong", parents=[common], help="certify a free pair")
    s.add_argument("--group", required=True)
    s.add_argument("--s", default=None, help="hyperbolic element; g1 = s^(10 k1)")
    s.add_argument("--gamma", default=None, help="conjugator; g2 = gamma g1 gamma^-1")
    s.add_argument("--k1", type=int, default=None)
    s.add_argument("--g1", default=None, help="run only the word oracle on g1, g2")
    s.add_argument("--g2", default=None)
    s.add_argument("--oracle-len", type=int, default=8)

    s = sub.add_parser("certify", parents=[common], help="uniform growth certificate")
    s.add_argument("--group", required=True)
    s.add_argument("--gens", default=None)
    s.add_argument("--max-radius", type=int, default=12)
    s.add_argument("--oracle-len", type=int, default=8)
    s.add_argument("--skip-n0", action="store_true", help="leave the n0 audit out of the ledger")

    s = sub.add_parser("horoballs", parents=[common], help="Ford horoball system")
    s.add_argument("--group", default="modular")
    s.add_argument("--Q", type=int, default=3)
    s.add_argument("--h0", default=None, help="height of the ball at infinity (default exp(200 delta))")

    s = sub.add_parser("verify-lemmas", parents=[common], help="randomized lemma suites")
    s.add_argument("--model", choices=["tree", "h2"], required=True)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--tolerance", type=float, default=None)
    s.add_argument("--lemmas", default=None, help=f"comma list from {','.join(SUITES)}")

    s = sub.add_parser("constants", parents=[common], help="k1, n0 and thresholds")
    s.add_argument("--group", required=True)
    s.add_argument("--cap", type=int, default=6, help="word length cap for the n0 audit")
    return p


def _status(exc, command: str) -> str:
    if isinstance(exc, VerificationFailure):
        return "failure"
    if isinstance(exc, NotFound):
        return "not-found"
    if isinstance(exc, (K1Uncertified, N0Uncertified)) or (
            isinstance(exc, CapExceeded) and command == "constants"):
        return "uncertified"
    if isinstance(exc, CapExceeded):
        return "cap-exceeded"
    if exc.exit_code == 1:
        return "failure"
    return "error"


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    params = {k: v for k, v in vars(args).items() if k not in ("format", "deterministic", "workers")}
    started = time.perf_counter()
    try:
        result = COMMANDS[args.command](args)
        doc = report.envelope(args.command, params, result, deterministic=args.deterministic,
                              started=started)
    except HypGrowthError as exc:
        err = {"type": type(exc).__name__, "message": str(exc), "stage": getattr(exc, "stage", None)}
        if getattr(exc, "witness", None) is not None:
            err["witness"] = exc.witness
        if getattr(exc, "partial", None) is not None:
            err["partial"] = exc.partial
        doc = report.envelope(args.command, params, None, _status(exc, args.command), exc.exit_code, err,
                              args.deterministic, started)
        print(f"hypgrowth {args.command}: {exc}", file=sys.stderr)
    except ValueError as exc:
        doc = report.envelope(args.command, params, None, "error", 2,
                              {"type": "ValueError", "message": str(exc)}, args.deterministic, started)
        print(f"hypgrowth {args.command}: {exc}", file=sys.stderr)
    report.validate(doc)
    if args.format == "csv":
        if args.command != "growth" or doc["result"] is None:
            print("hypgrowth: CSV output is only available for growth tables", file=sys.stderr)
            out.write(report.dumps(doc) + "\n")
            return 2 if doc["exit_code"] == 0 else doc["exit_code"]
        out.write(result.to_csv())
    elif args.format == "table":
        out.write(report.render_table(doc) + "\n")
    else:
        out.write(report.dumps(doc) + "\n")
    return doc["exit_code"]


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
