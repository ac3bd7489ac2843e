"""Single-executable CLI multiplexing all subcommands.

Every run that writes an output file also writes a manifest beside it
(parameters, tool version, timestamp, output digest); re-running with the
manifest's parameters reproduces byte-identical primary output.

Exit codes: 0 success, 1 usage error, 2 domain error (including
"not admissible" and "insufficient primes").
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .experiments import BVScanConfig, bv_discrepancy, gap_scan, persist
from .primes import sieve_upto
from .sieveweights import (
    make_config,
    lambda_from_y,
    multiplicative_identities_selftest,
    rho_for_threshold,
    s1_asymptotic,
    s1_bruteforce,
    s2_asymptotic,
    s2_bruteforce,
    s_rho,
    y_from_F,
)
from .tuples import Tuple, dilate, is_admissible, narrow_tuple
from .variational import constant_f, maximize_mk, optimal_f, rk_threshold


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        sys.exit(1)


def _load_key_values(path) -> dict:
    """Simple key=value config file; '#' starts a comment."""
    out = {}
    for i, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("config line %d: expected key=value" % i)
        key, val = line.split("=", 1)
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def build_parser() -> _Parser:
    p = _Parser(prog="apgaps")
    p.add_argument("--config", help="key=value file providing flag defaults")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="parallelism cap (output is independent of it)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write primary output here (with manifest)")
    sub = p.add_subparsers(dest="cmd")

    t = sub.add_parser("tuple").add_subparsers(dest="sub")
    tf = t.add_parser("find")
    tf.add_argument("--k", type=int, required=True)
    tf.add_argument("--budget", type=int, default=32)
    tc = t.add_parser("check")
    tc.add_argument("--file", required=True)

    mk = sub.add_parser("mk").add_subparsers(dest="sub")
    mc = mk.add_parser("compute")
    mc.add_argument("--k", type=int, required=True)
    mc.add_argument("--degree", type=int, required=True)
    mc.add_argument("--theta", type=float, default=None)

    sv = sub.add_parser("sieve").add_subparsers(dest="sub")
    sd = sv.add_parser("demo")
    sd.add_argument("--k", type=int)
    sd.add_argument("--X", type=int, required=True)
    sd.add_argument("--M", type=int, default=1)
    sd.add_argument("--a", type=int, default=0)
    sd.add_argument("--tuple-file")
    sd.add_argument("--degree", type=int, default=0)
    sd.add_argument("--theta", type=float, default=0.49)
    sd.add_argument("--delta", type=float, default=0.02)
    sd.add_argument("--D0", type=int, default=None)
    sd.add_argument("--Pf", type=int, default=1)
    sv.add_parser("selftest")

    bv = sub.add_parser("bv").add_subparsers(dest="sub")
    bs = bv.add_parser("scan")
    bs.add_argument("--X", type=int, required=True)
    bs.add_argument("--M", type=int, default=1)
    bs.add_argument("--qmax", type=int, required=True)
    bs.add_argument("--regime", default="log-power",
                    choices=("log-power", "exp-sqrt", "power"))
    bs.add_argument("--theta", type=float, default=None)
    bs.add_argument("--Pf", type=int, default=1)

    gp = sub.add_parser("gaps").add_subparsers(dest="sub")
    gs = gp.add_parser("scan")
    gs.add_argument("--X", type=int, required=True)
    gs.add_argument("--M", type=int, default=1)
    gs.add_argument("--a", type=int, default=1)
    gs.add_argument("--r", type=int, default=1)
    gs.add_argument("--tuple-file")
    return p


# ---------------------------------------------------------------------------
# subcommand bodies: each returns (exit_code, primary_output_text)
# ---------------------------------------------------------------------------

def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _cmd_tuple(args):
    if args.sub == "find":
        t = narrow_tuple(args.k, args.budget)
        return 0, _json({
            "k": t.k, "diameter": t.diameter, "offsets": list(t.offsets),
            "admissible": True,
        })
    if args.sub == "check":
        t = Tuple.load(args.file)
        ok = is_admissible(t)
        text = _json({"k": t.k, "diameter": t.diameter, "admissible": ok})
        return (0 if ok else 2), text
    raise ValueError("expected 'tuple find' or 'tuple check'")


def _cmd_mk(args):
    if args.sub != "compute":
        raise ValueError("expected 'mk compute'")
    res = maximize_mk(args.k, args.degree)
    out = {
        "k": res.k,
        "degree": res.basis_degree,
        "lower_bound": res.lower_bound,
        "witness": res.witness_floats(),
    }
    if args.theta is not None:
        out["theta"] = args.theta
        out["r_k"] = rk_threshold(res.lower_bound, args.theta)
    return 0, _json(out)


def _cmd_sieve(args):
    if args.sub == "selftest":
        rep = multiplicative_identities_selftest()
        return (0 if rep.ok else 2), _json({
            "pairs_checked": rep.pairs_checked,
            "lcm_identity_failures": rep.lcm_identity_failures,
            "phi_lcm_identity_failures": rep.phi_lcm_identity_failures,
            "ok": rep.ok,
        })
    if args.sub != "demo":
        raise ValueError("expected 'sieve demo' or 'sieve selftest'")
    if args.tuple_file:
        base = Tuple.load(args.tuple_file)
    elif args.k:
        base = narrow_tuple(args.k)
    else:
        raise ValueError("sieve demo needs --tuple-file or --k")
    k = base.k
    h = dilate(base, args.M, args.a % args.M if args.M > 1 else 0).elements
    d0 = args.D0 if args.D0 is not None else base.diameter + 1
    cfg = make_config(args.X, args.M, args.a, h, args.theta, args.delta,
                      d0, args.Pf)
    if args.degree == 0:
        F = constant_f(k)
        mk_lower = float(2 * k / (k + 1))
    else:
        res = maximize_mk(k, args.degree)
        F = optimal_f(res)
        mk_lower = res.lower_bound
    lt = lambda_from_y(cfg, y_from_F(cfg, F))
    s1 = s1_bruteforce(cfg, lt)
    pt = sieve_upto(max((2 * cfg.x - 1) * cfg.M + cfg.h[-1], 4))
    per_m, s2 = s2_bruteforce(cfg, lt, pt)
    rho = rho_for_threshold(mk_lower, cfg.theta, cfg.delta)
    s1a = s1_asymptotic(cfg, F)
    s2a = s2_asymptotic(cfg, F)
    return 0, _json({
        "k": k, "X": cfg.X, "M": cfg.M, "a": cfg.a,
        "tuple": list(cfg.h), "D0": cfg.D0,
        "Wprime": cfg.Wprime, "V": cfg.V, "nu0": cfg.nu0, "R": cfg.R,
        "table_size": len(lt),
        "S1": float(s1), "S2": float(s2),
        "S2_per_m": [float(v) for v in per_m],
        "rho": rho, "S_rho": float(s_rho(s1, s2, rho)),
        "S1_asymptotic": s1a, "S2_asymptotic": s2a,
        "S1_ratio": float(s1) / s1a if s1a else None,
        "S2_ratio": float(s2) / s2a if s2a else None,
    })


def _cmd_bv(args):
    if args.sub != "scan":
        raise ValueError("expected 'bv scan'")
    cfg = BVScanConfig(X=args.X, M=args.M, q_max=args.qmax,
                       regime=args.regime, Pf=args.Pf, theta=args.theta)
    res = bv_discrepancy(cfg)
    if args.format == "csv":
        lines = ["q,worst_a,discrepancy"]
        lines += ["%d,%d,%.12g" % row for row in res.per_q]
        return 0, "\n".join(lines) + "\n"
    return 0, _json({
        "X": cfg.X, "M": cfg.M, "q_max": cfg.q_max, "regime": cfg.regime,
        "total": res.total, "psi_total": res.psi_total,
        "q_cap_advisory": res.q_cap_advisory,
        "threshold_ratio": res.threshold_ratio,
        "per_q": [{"q": q, "worst_a": a, "discrepancy": d}
                  for q, a, d in res.per_q],
    })


def _cmd_gaps(args):
    if args.sub != "scan":
        raise ValueError("expected 'gaps scan'")
    hint = Tuple.load(args.tuple_file) if args.tuple_file else None
    from .variational import theorem_bound

    shape = theorem_bound(args.r, "log-power")
    rec = gap_scan(args.M, args.a, args.X, args.r, tuple_hint=hint,
                   bound_shape=shape.expression)
    code = 0 if rec.status == "ok" else 2
    if args.format == "csv":
        lines = ["M,a,X,r,gap_observed,bound_shape,witness_primes,status,tuple_hit"]
        lines.append("%d,%d,%d,%d,%s,%s,%s,%s,%s" % (
            rec.M, rec.a, rec.X, rec.r,
            "" if rec.gap_observed is None else rec.gap_observed,
            rec.bound_shape,
            ";".join(str(p) for p in rec.witness_primes),
            rec.status,
            "" if rec.tuple_hit is None else rec.tuple_hit,
        ))
        return code, "\n".join(lines) + "\n"
    return code, _json({
        "M": rec.M, "a": rec.a, "X": rec.X, "r": rec.r,
        "gap_observed": rec.gap_observed,
        "bound_shape": rec.bound_shape,
        "bound_factor": shape.factor,
        "witness_primes": rec.witness_primes,
        "status": rec.status,
        "tuple_hit": rec.tuple_hit,
    })


_DISPATCH = {
    "tuple": _cmd_tuple,
    "mk": _cmd_mk,
    "sieve": _cmd_sieve,
    "bv": _cmd_bv,
    "gaps": _cmd_gaps,
}


def _write_manifest(args, out_path: str, text: str) -> None:
    manifest = {
        "subcommand": "%s %s" % (args.cmd, getattr(args, "sub", "") or ""),
        "parameters": {
            k: v for k, v in sorted(vars(args).items())
            if k not in ("cmd", "sub") and v is not None
        },
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }
    Path(out_path + ".manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n"
    )


def dispatch(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cmd is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        if args.config:
            for key, val in _load_key_values(args.config).items():
                flag = "--" + key.replace("_", "-")
                if hasattr(args, key) and flag not in argv:
                    setattr(args, key, _coerce(val))
        code, text = _DISPATCH[args.cmd](args)
    except ValueError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    if args.out:
        Path(args.out).write_text(text)
        _write_manifest(args, args.out, text)
    else:
        sys.stdout.write(text)
    return code


def _coerce(val: str):
    for cast in (int, float):
        try:
            return cast(val)
        except ValueError:
            continue
    return val


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
