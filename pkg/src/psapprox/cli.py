"""Command-line front end.

    psapprox expand            --config cfg.json
    psapprox build-eta         --config cfg.json
    psapprox verify            --config cfg.json --eps 1/20 --range 5..60
    psapprox denominator-check --config cfg.json --eps 1/10 --range 1..200

Exit status: 0 ok, 1 violations, 2 input error, 3 precision cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from .config import ProblemConfig, load_config, parse_range, validate
from .errors import (AmbiguityError, BranchInconsistentError, HypothesisError, InputError,
                     PrecisionCapError, PsApproxError)
from .eta import Approximant, build_eta_multi, build_eta_single, certify_error, multi_cutoff
from .exact.ball import decimal_str
from .implicit import build_F, solve_series, validate_hypotheses, zero_in_interval
from .jsonio import dumps, parse_rational_arg, rat_from_json, rat_to_json
from .powersum import denominator_check, min_denominator_base
from .puiseux import coates_log_bound, expand_at_infinity, is_squarefree_in_y
from .verify import (CSV_COLUMNS, HOLDS, UNDECIDED, VIOLATED, MultiProblem, SingleProblem,
                     check_multi_bound, check_single_bound, error_ball, subspace_instrument,
                     subspace_product)

EXIT_OK, EXIT_VIOLATIONS, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


def _rational_flag(text: str) -> Fraction:
    """``N/D`` or a JSON ``{"num": N, "den": D}`` pair."""
    t = text.strip()
    if t.startswith("{"):
        try:
            return rat_from_json(json.loads(t), "flag")
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid rational {text!r}: {exc.msg}") from None
    return parse_rational_arg(t)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="psapprox", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("expand", "build-eta", "verify", "denominator-check"):
        p = sub.add_parser(name)
        p.add_argument("--config", default="-", help="config JSON path, '-' for stdin")
        p.add_argument("--mode", choices=("single", "multi"))
        p.add_argument("--out-dir", default=".")
        p.add_argument("--precision-cap", type=int, metavar="BITS")
        p.add_argument("--eps", metavar="N/D")
        p.add_argument("--t", metavar="N/D")
        p.add_argument("--range", metavar="a..b")
        p.add_argument("--grace", type=int, metavar="N")
    return ap


def _load(args) -> ProblemConfig:
    if args.config == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise InputError(f"config: cannot read {args.config}: {exc.strerror}") from None
    cfg = load_config(text)
    if args.mode:
        cfg.mode = args.mode
    if args.precision_cap is not None:
        if args.precision_cap < 64:
            raise InputError("--precision-cap: must be >= 64")
        cfg.precision_cap = args.precision_cap
    if args.eps is not None:
        cfg.eps = _rational_flag(args.eps)
    if args.t is not None:
        cfg.t = _rational_flag(args.t)
    if args.range is not None:
        cfg.index_range = parse_range(args.range, "--range")
    if args.grace is not None:
        cfg.grace = args.grace
    validate(cfg)
    return cfg


def _write(out_dir: Path, name: str, text: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def _ball_json(b) -> dict:
    return {"lo": decimal_str(b.lo, 20, "down"), "hi": decimal_str(b.hi, 20, "up")}


# -- problem construction ------------------------------------------------------------------

def _single(cfg: ProblemConfig) -> Tuple[SingleProblem, Approximant]:
    cfg.require("f", "G")
    app = build_eta_single(cfg.f, cfg.G, cfg.t, cfg.r, cfg.branch)
    return SingleProblem(cfg.f, cfg.G, app), app


def _multi(cfg: ProblemConfig, check_hypotheses: bool = False):
    cfg.require("G_list", "y0_interval")
    inst = build_F(cfg.G_list)
    if check_hypotheses:
        rep = validate_hypotheses(inst)
        if not rep.all_true():
            raise HypothesisError(f"multi-sum bound inapplicable: hypotheses fail ({rep})")
    y0 = zero_in_interval(inst, *cfg.y0_interval)
    series = solve_series(inst, y0, multi_cutoff(inst.g[0], cfg.t))
    app = build_eta_multi(inst, series, cfg.t)
    return MultiProblem(inst, app), app, inst, series


# -- commands --------------------------------------------------------------------------------

def cmd_expand(cfg: ProblemConfig, out_dir: Path) -> int:
    if cfg.mode != "single":
        raise InputError("mode: expand needs mode 'single'")
    cfg.require("f")
    if not is_squarefree_in_y(cfg.f):
        raise InputError("f: not squarefree in y")
    branches, stats = expand_at_infinity(cfg.f, cfg.k_max, with_stats=True)
    cp = coates_log_bound(cfg.f)
    report = {
        "f": cfg.f.to_json(),
        "k_max": cfg.k_max,
        "germs": stats,
        "branches": [b.to_json() for b in branches],
        "coates": {"N": cp.N, "f0": cp.f0, "mu": str(cp.mu), "log_lambda": _ball_json(cp.log_lambda)},
    }
    _write(out_dir, "branches.json", dumps(report))
    print(f"{len(branches)} real branch(es) at infinity, {stats['complex']} complex germ(s)")
    for i, b in enumerate(branches):
        lead = [str(b.a(k)) for k in range(b.v, min(b.v + 4, b.k_max + 1))]
        print(f"  branch {i}: e={b.e} v={b.v} leading coefficients {', '.join(lead)}"
              f"  lambda<={decimal_str(b.lam.hi, 6, 'up')}")
    print(f"  Coates: N={cp.N} f0={cp.f0} log Lambda in [{_ball_json(cp.log_lambda)['lo']}, "
          f"{_ball_json(cp.log_lambda)['hi']}]")
    return EXIT_OK


def cmd_build_eta(cfg: ProblemConfig, out_dir: Path) -> int:
    if cfg.mode == "single":
        problem, app = _single(cfg)
        extra = {}
    else:
        problem, app, inst, series = _multi(cfg)
        extra = {"instance": inst.to_json(), "series": series.to_json()}
    if cfg.index_range is not None or cfg.certify_range is not None:
        cert = certify_error(app, lambda m: error_ball(problem, m, max_bits=cfg.precision_cap),
                             cfg.certify_indices())
        extra["certificate_sample"] = [cfg.certify_indices().start, cfg.certify_indices().stop - 1]
        extra["ratios"] = [{"index": m, **_ball_json(r)} for m, r in sorted(cert.ratios.items())]
    report = {"approximant": app.to_json(), **extra}
    _write(out_dir, "approximant.json", dumps(report))
    roots = ", ".join(str(c) for c in app.eta.roots)
    print(f"eta: H={app.H} k={app.k} K={app.K} L={app.L} roots {{{roots}}}")
    if app.C is not None:
        print(f"  C<={decimal_str(app.C.hi, 6, 'up')} n0={app.n0}")
    print(f"  classification: {app.classification} (heuristic)")
    return EXIT_OK


def _csv_text(rows: List[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(CSV_COLUMNS), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _counts(indices_verdicts, grace: Optional[int]) -> Tuple[int, int]:
    bad = [(i, v) for i, v in indices_verdicts if grace is None or i > grace]
    return sum(v == VIOLATED for _, v in bad), sum(v == UNDECIDED for _, v in bad)


def cmd_verify(cfg: ProblemConfig, out_dir: Path) -> int:
    indices = cfg.indices()
    if cfg.mode == "single":
        problem, app = _single(cfg)
        hits = check_single_bound(problem, cfg.eps, indices, cfg.precision_cap, all_rows=True)
    else:
        problem, app, _, _ = _multi(cfg, check_hypotheses=True)
        hits = check_multi_bound(problem, cfg.eps, indices, cfg.precision_cap, all_rows=True)
    rows = [h.row() for h in hits]
    _write(out_dir, "report.csv", _csv_text(rows))
    verdicts = [(h.index, h.verdict) for h in hits]
    sub_rows = []
    if cfg.subspace_samples:
        instr = subspace_instrument(app.eta, cfg.subspace_primes)
        for m, p, q in cfg.subspace_samples:
            prod, rhs = subspace_product(instr, m, p, q)
            # overlapping enclosures are not a certified violation
            verdict = VIOLATED if prod.lo > rhs.hi else HOLDS
            sub_rows.append({"m": m, "p": p, "q": q, "product": _ball_json(prod), "rhs": _ball_json(rhs),
                             "verdict": verdict})
            verdicts.append((m, verdict))
    n_viol, n_und = _counts(verdicts, cfg.grace)
    code = EXIT_VIOLATIONS if n_viol else (EXIT_PRECISION if n_und else EXIT_OK)
    report = {
        "mode": cfg.mode,
        "eps": rat_to_json(cfg.eps),
        "range": [indices.start, indices.stop - 1],
        "grace": cfg.grace,
        "k": app.k,
        "classification": app.classification,
        "rows": rows,
        "subspace": sub_rows,
        "violated": n_viol,
        "undecided": n_und,
        "exit": code,
    }
    _write(out_dir, "report.json", dumps(report))
    print(f"{len(rows)} candidate(s) tested, {n_viol} violated, {n_und} undecided"
          + (f" beyond index {cfg.grace}" if cfg.grace is not None else ""))
    for h in hits:
        if h.verdict != HOLDS and (cfg.grace is None or h.index > cfg.grace):
            print(f"  index {h.index}: p/q = {h.p}/{h.q} {h.verdict}")
    return code


def cmd_denominator_check(cfg: ProblemConfig, out_dir: Path) -> int:
    cfg.require("xi")
    indices = cfg.indices()
    bad = denominator_check(cfg.xi, cfg.eps, indices, cfg.precision_cap)
    counted = [n for n in bad if cfg.grace is None or n > cfg.grace]
    report = {
        "xi": cfg.xi.to_json(),
        "D": min_denominator_base(cfg.xi),
        "eps": rat_to_json(cfg.eps),
        "range": [indices.start, indices.stop - 1],
        "grace": cfg.grace,
        "violations": bad,
    }
    _write(out_dir, "denominator_check.json", dumps(report))
    print(f"denominator check: {len(bad)} violation(s)" + (f" at n = {bad}" if bad else ""))
    return EXIT_VIOLATIONS if counted else EXIT_OK


COMMANDS = {
    "expand": cmd_expand,
    "build-eta": cmd_build_eta,
    "verify": cmd_verify,
    "denominator-check": cmd_denominator_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        return COMMANDS[args.command](cfg, Path(args.out_dir))
    except (PrecisionCapError, AmbiguityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except BranchInconsistentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATIONS
    except (InputError, HypothesisError, PsApproxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
