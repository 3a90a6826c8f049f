"""Command-line interface.

Exit codes: 0 all checks pass (or the expected search outcome holds),
1 a check failed / Unstable / unexpected search outcome, 2 usage, parse or budget error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .adhm import DEFAULT_MAX_EXT_DEGREE, FAIL, adhm_check
from .exactla import ExtensionRequired, Field, FieldError, ShapeError, parse_field
from .io import DocumentError, digest, dumps, load_rep, rep_to_doc, verdict_to_json, write_atomic
from .pencil import DEFAULT_ORACLE_BUDGET, Pencil, is_regular, subspace_image_oracle
from .quiver import PROFILES, AdhmDatum, AugmentedRep, FramedRep, check_relations, check_relations_augmented
from .quiver import SamplerExhausted, monad_dims, moduli_dim, sample_augmented_rep, sample_rep
from .search import search_counterexample, trial_seed, wall_witness_search
from .stability import (
    DEFAULT_MAX_PAIRS,
    INCONCLUSIVE,
    UNSTABLE,
    StabilityParam,
    UnsupportedMethod,
    check_Q23,
    check_theta_ss,
    classify_theta,
    kronecker_ss,
)
from .subspaces import BudgetExceeded


class UsageError(Exception):
    pass


def _theta(text: str) -> StabilityParam:
    try:
        a, b = text.split(",")
        return StabilityParam(Fraction(a.strip()), Fraction(b.strip()))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected THETA0,THETA1, got {text!r}") from exc


def _field(text: str):
    try:
        return parse_field(text)
    except FieldError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def _flag(v):
    if isinstance(v, Field):
        return v.name
    if isinstance(v, (int, bool, str, type(None))):
        return v
    return str(v)


def _header(args, command: str) -> dict:
    flags = {k: _flag(v) for k, v in sorted(vars(args).items()) if k not in ("func", "timing")}
    return {"tool": "framedquiver", "version": __version__, "command": command, "flags": flags}


def _emit(report: dict, args, started: float) -> None:
    if getattr(args, "timing", False):
        report["timing_seconds"] = round(time.perf_counter() - started, 6)
    sys.stdout.write(dumps(report))


def _relations_json(rel) -> dict:
    return {"relation": rel.relation, "passed": rel.passed, "failures": rel.failures}


def _pencil_json(st) -> dict:
    F = st.det.field
    out = {"tag": st.tag, "det": st.det.format()}
    if st.witness is not None:
        out["witness"] = [F.format(x) for x in st.witness]
    if st.minimal is not None:
        out["epsilon"] = st.minimal.epsilon
        out["v"] = [[F.format(x) for x in v.col(0)] for v in st.minimal.v]
    return out


def _pencil_status(A1, A2) -> Optional[dict]:
    try:
        return _pencil_json(is_regular(Pencil(A1, A2)))
    except ExtensionRequired as exc:
        return {"tag": "ExtensionRequired", "detail": str(exc), "degree": exc.degree}


# -- check ----------------------------------------------------------------------------------

def cmd_check(args) -> int:
    started = time.perf_counter()
    rep, dig = load_rep(args.input)
    theta = args.theta
    report = _header(args, "check")
    report["input_digest"] = dig
    report["experimental"] = rep.field.is_finite
    failed = False
    if isinstance(rep, Pencil):
        theta = theta or StabilityParam.theta_c(max(rep.c, 1))
        report["kind"] = "kronecker"
        report["pencil"] = _pencil_status(rep.A1, rep.A2)
        report["theta"] = str(theta)
        if rep.field.is_finite:
            v = kronecker_ss(rep.A1, rep.A2, theta, stable=args.stable, max_pairs=args.max_pairs)
            report["verdict"] = verdict_to_json(v)
            failed = v.tag == UNSTABLE
        else:
            report["verdict"] = {"tag": INCONCLUSIVE, "method": "criteria"}
        _emit(report, args, started)
        return 1 if failed else 0
    report["kind"] = rep.kind
    if isinstance(rep, AdhmDatum):
        ad = adhm_check(rep, args.max_ext_degree)
        report["adhm"] = {
            name: {"status": r.status, "detail": r.detail, **({"witness": r.witness} if r.witness else {})}
            for name, r in (("P1", ad.P1), ("P2", ad.P2), ("P3", ad.P3))
        }
        _emit(report, args, started)
        return 1 if any(r.status == FAIL for r in (ad.P1, ad.P2, ad.P3)) else 0
    theta = theta or StabilityParam.theta_c(max(rep.c, 1))
    rel = check_relations(rep) if isinstance(rep, FramedRep) else check_relations_augmented(rep)
    report["relations"] = _relations_json(rel)
    report["pencil"] = _pencil_status(rep.A1, rep.A2)
    report["theta"] = str(theta)
    report["chamber"] = classify_theta(theta, rep.c).value if rep.c >= 1 else None
    v = check_theta_ss(rep, theta, stable=args.stable, mode=args.mode, max_pairs=args.max_pairs)
    report["verdict"] = verdict_to_json(v)
    if isinstance(rep, AugmentedRep) and args.mode == "exhaustive":
        report["q23"] = verdict_to_json(check_Q23(rep, max_pairs=args.max_pairs))
    failed = (not rel.passed) or v.tag == UNSTABLE
    _emit(report, args, started)
    return 1 if failed else 0


# -- sample --------------------------------------------------------------------------------

def cmd_sample(args) -> int:
    started = time.perf_counter()
    report = _header(args, "sample")
    if args.count and not args.out:
        raise UsageError("--out is required when --count > 0")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        if not os.access(args.out, os.W_OK):
            raise UsageError(f"output directory {args.out!r} is not writable")
    files = []
    for i in range(args.count):
        s = trial_seed(args.seed, i)
        try:
            if args.augmented:
                rep = sample_augmented_rep(args.n, args.c, args.field, s, args.profile)
            else:
                rep = sample_rep(args.n, args.c, args.field, s, args.profile)
        except SamplerExhausted as exc:
            files.append({"index": i, "seed": s, "error": str(exc)})
            continue
        name = f"sample-{args.seed}-{i:04d}.json"
        text = dumps(rep_to_doc(rep))
        write_atomic(os.path.join(args.out, name), text)
        files.append({"index": i, "seed": s, "file": name, "digest": digest(text.encode())})
    report["files"] = files
    _emit(report, args, started)
    return 0


# -- search --------------------------------------------------------------------------------

def cmd_search(args) -> int:
    started = time.perf_counter()
    report = _header(args, "search")
    profiles = tuple(args.profiles.split(",")) if args.profiles else PROFILES
    for p in profiles:
        if p not in PROFILES:
            raise UsageError(f"unknown profile {p!r}")
    if args.what == "counterexample":
        res = search_counterexample(args.n, args.c, args.field, args.trials, args.seed, profiles,
                                    jobs=args.jobs, max_pairs=args.max_pairs)
    else:
        if args.wall is None:
            raise UsageError("search wall needs --wall R1|R2")
        res = wall_witness_search(args.n, args.c, args.field, args.wall, args.trials, args.seed, profiles,
                                  jobs=args.jobs, max_pairs=args.max_pairs)
    report.update(
        experimental=res.experimental,
        trials=res.trials,
        semistable=res.semistable,
        unstable=res.unstable,
        sampler_exhausted=res.exhausted,
        ok=res.ok,
    )
    key = "violations" if res.kind == "counterexample" else "witnesses"
    entries = []
    if args.out and res.findings:
        os.makedirs(args.out, exist_ok=True)
    for fnd in res.findings:
        entry = {"trial": fnd.trial, "seed": fnd.seed, "profile": fnd.profile, "reasons": list(fnd.reasons)}
        if args.out:
            tag = "targeted" if fnd.trial < 0 else f"{fnd.trial:06d}"
            name = f"{res.kind}-{args.seed}-{tag}.json"
            write_atomic(os.path.join(args.out, name), dumps(rep_to_doc(fnd.rep)))
            entry["fixture"] = name
        else:
            entry["rep"] = rep_to_doc(fnd.rep)
        entries.append(entry)
    report[key] = entries
    report[key + "_count"] = len(entries)
    _emit(report, args, started)
    return 0 if res.ok else 1


# -- dims / chamber / oracle ---------------------------------------------------------------

def cmd_dims(args) -> int:
    try:
        m = monad_dims(args.n, args.r, args.a, args.c)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    nonempty = "true" if m.nonempty else "false"
    print(f"k=({m.k1},{m.k2},{m.k3},{m.k4}) dim={moduli_dim(args.n, args.r, args.a, args.c)} nonempty={nonempty}")
    return 0


def cmd_chamber(args) -> int:
    print(classify_theta(args.theta, args.c).value)
    return 0


def cmd_oracle(args) -> int:
    started = time.perf_counter()
    rep, dig = load_rep(args.input)
    report = _header(args, "oracle")
    report["input_digest"] = dig
    ok = subspace_image_oracle(Pencil(rep.A1, rep.A2), budget=args.budget)
    report["oracle"] = ok
    report["pencil"] = _pencil_status(rep.A1, rep.A2)
    _emit(report, args, started)
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="framedquiver", description="Framed quiver representations, stability and pencils.")
    p.add_argument("--version", action="version", version=f"framedquiver {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, budget=True):
        sp.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
        if budget:
            sp.add_argument("--max-pairs", type=_positive, default=DEFAULT_MAX_PAIRS,
                            help="cap on enumerated subspace pairs")

    c = sub.add_parser("check", help="run every check applicable to a document")
    c.add_argument("input")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--theta", type=_theta, help="stability parameter THETA0,THETA1")
    g.add_argument("--theta-c", action="store_true", help="use theta_c = (2c, 1-2c) (default)")
    c.add_argument("--mode", choices=("exhaustive", "criteria"), default="exhaustive")
    c.add_argument("--stable", action="store_true", help="report Stable when the rep is stable")
    c.add_argument("--max-ext-degree", type=_positive, default=DEFAULT_MAX_EXT_DEGREE)
    common(c)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sample", help="write seeded representations satisfying the relations")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--c", type=_positive, required=True)
    s.add_argument("--field", type=_field, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--count", type=_nonneg, default=1)
    s.add_argument("--profile", choices=PROFILES, default="generic")
    s.add_argument("--augmented", action="store_true", help="sample the augmented quiver instead")
    s.add_argument("--out")
    common(s, budget=False)
    s.set_defaults(func=cmd_sample)

    se = sub.add_parser("search", help="seeded theorem probe or wall-witness search")
    se.add_argument("what", choices=("counterexample", "wall"))
    se.add_argument("--n", type=_positive, required=True)
    se.add_argument("--c", type=_positive, required=True)
    se.add_argument("--field", type=_field, default=parse_field("F5"))
    se.add_argument("--trials", type=_nonneg, required=True)
    se.add_argument("--seed", type=int, required=True)
    se.add_argument("--wall", choices=("R1", "R2"))
    se.add_argument("--profiles", help=f"comma-separated subset of {','.join(PROFILES)}")
    se.add_argument("--jobs", type=_positive, default=1)
    se.add_argument("--out", help="directory for fixture documents")
    common(se)
    se.set_defaults(func=cmd_search)

    d = sub.add_parser("dims", help="monad dimensions and moduli dimension")
    for name in ("n", "r", "a", "c"):
        d.add_argument(f"--{name}", type=int, required=True)
    d.set_defaults(func=cmd_dims)

    ch = sub.add_parser("chamber", help="position of theta relative to the chamber and its walls")
    ch.add_argument("--c", type=_positive, required=True)
    ch.add_argument("--theta", type=_theta, required=True)
    ch.set_defaults(func=cmd_chamber)

    o = sub.add_parser("oracle", help="exhaustive dim(A1 S + A2 S) >= dim S check")
    o.add_argument("input")
    o.add_argument("--budget", type=_positive, default=DEFAULT_ORACLE_BUDGET)
    common(o, budget=False)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return args.func(args)
    except (DocumentError, UsageError, BudgetExceeded, UnsupportedMethod, OSError, FieldError, ShapeError) as exc:
        print(f"framedquiver: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
