"""``rssw`` command line.

Exit codes: 0 report produced, 1 a verification failed, 2 parse or usage
error, 3 hypothesis violation (definite form or non-spin signature).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3

# labels for the equivariance table
_KIND_LABELS = {
    "kernel": "3/2-spinors preserved",
    "cliffmult": "Clifford multiplication equivariant",
    "projection": "projection equivariant (Pin(2))",
    "mu": "quadratic moment map equivariant",
}


def _default_seed() -> int:
    env = os.environ.get("RSSW_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"RSSW_SEED must be an integer, got {env!r}")


def _emit(payload, fmt: str, text: str | None = None):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text if text is not None else _flat_text(payload))


def _flat_text(d: dict, prefix: str = "") -> str:
    lines = []
    for k, v in d.items():
        if isinstance(v, dict):
            lines.append(_flat_text(v, f"{prefix}{k}."))
        else:
            lines.append(f"{prefix}{k}: {v}")
    return "\n".join(lines)


def _cmd_analyze(args) -> int:
    from .report import analyze

    rep = analyze(args.expr)
    if args.format == "json":
        print(rep.to_json())
    else:
        print(rep.to_text())
    return EXIT_OK


def _cmd_index(args) -> int:
    from .index import ManifoldInvariants, ahat, ch_tc_twisted, index_dirac, index_rs

    inv = ManifoldInvariants(args.sigma, args.chi, args.c1sq)
    payload = {
        "sigma": args.sigma,
        "chi": args.chi,
        "c1sq": args.c1sq,
        "ch_tc_twisted_deg4": str(ch_tc_twisted(inv).evaluate()),
        "ahat_ch_tc_twisted": str((ahat(inv.sigma, inv.c1sq) * ch_tc_twisted(inv)).evaluate()),
        "index_dirac": str(index_dirac(inv)),
        "index_rs": str(index_rs(inv)),
    }
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_feasibility(args) -> int:
    from .repring import lambda_total
    from .topology import RepCounts, kdegree_feasibility

    c = RepCounts(args.k, args.m, args.r, args.s)
    v = kdegree_feasibility(c)
    payload = {
        "k": c.k,
        "m": c.m,
        "r": c.r,
        "s": c.s,
        "lambda_V": str(lambda_total(2 * c.r + 2 * c.k, c.s)),
        "lambda_W": str(lambda_total(2 * c.r, c.s + c.m)),
        "required_trace": str(v.required_trace),
        "verdict": str(v),
        "excluded": v.excluded,
    }
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_repring(args) -> int:
    from .repring import char_at_i, char_at_j, char_on_circle, parse_repring

    x = parse_repring(args.expr)
    payload = {
        "expr": args.expr,
        "normal_form": str(x),
        "char_at_i": char_at_i(x),
        "char_at_j": char_at_j(x),
        "char_on_circle": list(char_on_circle(x)),
    }
    poly = " + ".join(f"{c}*c^{n}" for n, c in enumerate(payload["char_on_circle"]) if c) or "0"
    text = (
        f"normal form   {payload['normal_form']}\n"
        f"char at i     {payload['char_at_i']}\n"
        f"char at j     {payload['char_at_j']}\n"
        f"on circle     {poly}   (c = 2cos t)"
    )
    _emit(payload, args.format, text)
    return EXIT_OK


def _cmd_equivariance(args) -> int:
    import time

    from .pin2 import verify_equivariance

    t0 = time.perf_counter()
    res = verify_equivariance(args.elements, args.samples, args.seed)
    elapsed = time.perf_counter() - t0
    rows = {k: {"checks": n, "passed": p, "ok": n == p} for k, (n, p) in res.items()}
    payload = {"seed": args.seed, "elements_per_branch": args.elements, "inputs": args.samples,
               "seconds": round(elapsed, 3), "results": rows}
    lines = [f"{'identity':<40} {'passed':>12}  status"]
    for k, r in rows.items():
        lines.append(f"{_KIND_LABELS[k]:<40} {r['passed']:>5}/{r['checks']:<6}  {'PASS' if r['ok'] else 'FAIL'}")
    lines.append(f"({elapsed:.2f}s, seed {args.seed})")
    _emit(payload, args.format, "\n".join(lines))
    return EXIT_OK if all(r["ok"] for r in rows.values()) else EXIT_CHECK_FAILED


def _cmd_kuranishi(args) -> int:
    from .kuranishi import demo

    rep = demo(args.seed, args.dim_c, args.dim_r, args.gamma, args.cutoff)
    # floats go out via repr, which round-trips exactly
    _emit(rep, args.format)
    ok = (rep["sandwich_ok"] and rep["monotone_ok"] and rep["planted"]["holds"]
          and rep["generic_biconditional"] and rep["sphere_ok"])
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="rssw", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"rssw {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="full report for a connected-sum expression")
    a.add_argument("expr", help='e.g. "2E8 # 3H" or "K3bar # S2xS2"')
    a.set_defaults(func=_cmd_analyze)

    i = sub.add_parser("index", parents=[common], help="Rarita-Schwinger index from sigma, chi, c1^2")
    i.add_argument("--sigma", type=int, required=True)
    i.add_argument("--chi", type=int, required=True)
    i.add_argument("--c1sq", type=int, default=0)
    i.set_defaults(func=_cmd_index)

    f = sub.add_parser("feasibility", parents=[common], help="K-degree verdict for counts k, m")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--m", type=int, required=True)
    f.add_argument("--r", type=int, default=None, help="defaults to max(0, -k)")
    f.add_argument("--s", type=int, default=0)
    f.set_defaults(func=_cmd_feasibility)

    r = sub.add_parser("repring", parents=[common], help="representation ring of Pin(2)")
    rsub = r.add_subparsers(dest="repring_command", required=True)
    ev = rsub.add_parser("eval", parents=[common], help="normal form and characters")
    ev.add_argument("expr")
    ev.set_defaults(func=_cmd_repring)

    e = sub.add_parser("verify-equivariance", parents=[common], help="exact Pin(2) equivariance suite")
    e.add_argument("--samples", type=int, default=50, help="random inputs per identity")
    e.add_argument("--elements", type=int, default=25, help="group elements per Pin(2) branch")
    e.set_defaults(func=_cmd_equivariance)

    k = sub.add_parser("kuranishi", parents=[common], help="finite-dimensional approximation sandbox")
    ksub = k.add_subparsers(dest="kuranishi_command", required=True)
    d = ksub.add_parser("demo", parents=[common], help="verification report for one seeded instance")
    d.add_argument("--dim-c", type=int, default=40)
    d.add_argument("--dim-r", type=int, default=38)
    d.add_argument("--gamma", type=float, default=0.25)
    d.add_argument("--cutoff", type=float, default=None)
    d.set_defaults(func=_cmd_kuranishi)
    return p


def main(argv=None) -> int:
    from .kuranishi import CutoffCollision
    from .repring import RepRingParseError
    from .report import ManifoldParseError
    from .topology import HypothesisViolation

    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = "json"
    if not hasattr(args, "seed"):
        args.seed = _default_seed()
    if getattr(args, "command", None) == "feasibility" and args.r is None:
        args.r = max(0, -args.k)
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(f"rssw: hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (ManifoldParseError, RepRingParseError) as exc:
        print(f"rssw: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CutoffCollision, ValueError) as exc:
        print(f"rssw: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
