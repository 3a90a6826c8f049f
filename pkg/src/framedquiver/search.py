"""Seeded searches: probing the regularity / vanishing-f theorem and the walls of the chamber.

Finite-field outcomes are experimental evidence; the theorems are stated over C.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .exactla import Field, Matrix
from .pencil import Pencil, is_regular
from .quiver import PROFILES, FramedRep, SamplerExhausted, sample_rep
from .stability import StabilityParam, check_theta_ss, wall_parameter

DEFAULT_PROFILES = PROFILES
TRIAL_STRIDE = 1_000_000


def trial_seed(seed: int, index: int) -> int:
    """Seed of the index-th trial; a function of (seed, index) only."""
    if not 0 <= index < TRIAL_STRIDE:
        raise ValueError("trial index out of range")
    return seed * TRIAL_STRIDE + index


@dataclass(frozen=True)
class Finding:
    trial: int
    seed: int
    profile: str
    rep: FramedRep
    reasons: tuple[str, ...]


@dataclass
class SearchReport:
    kind: str
    n: int
    c: int
    field: Field
    trials: int
    seed: int
    profiles: tuple[str, ...]
    semistable: int = 0
    unstable: int = 0
    exhausted: int = 0
    findings: list[Finding] = dc_field(default_factory=list)
    wall: Optional[str] = None
    experimental: bool = True

    @property
    def violations(self) -> list[Finding]:
        return self.findings if self.kind == "counterexample" else []

    @property
    def witnesses(self) -> list[Finding]:
        return self.findings if self.kind == "wall" else []

    @property
    def ok(self) -> bool:
        if self.kind == "counterexample":
            return not self.findings
        return self.trials == 0 or bool(self.findings)


def _probe(args):
    """One counterexample trial: returns (status, profile, seed, rep, reasons)."""
    n, c, field, seed, index, profile, max_pairs = args
    s = trial_seed(seed, index)
    try:
        rep = sample_rep(n, c, field, s, profile)
    except SamplerExhausted:
        return "exhausted", profile, s, None, ()
    v = check_theta_ss(rep, StabilityParam.theta_c(c), max_pairs=max_pairs)
    if not v.semistable:
        return "unstable", profile, s, None, ()
    reasons = []
    if not is_regular(Pencil(rep.A1, rep.A2)).regular:
        reasons.append("singular pencil")
    nonzero = [q + 1 for q, fq in enumerate(rep.f) if not fq.is_zero()]
    if nonzero:
        reasons.append(f"f_q != 0 at q = {nonzero}")
    return "semistable", profile, s, (rep if reasons else None), tuple(reasons)


def _run(func, tasks, jobs: int):
    if jobs <= 1 or len(tasks) < 2:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        # map preserves task order, so the merge is independent of scheduling
        return list(ex.map(func, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def search_counterexample(
    n: int,
    c: int,
    field: Field,
    trials: int,
    seed: int,
    profiles: Sequence[str] = DEFAULT_PROFILES,
    jobs: int = 1,
    max_pairs: Optional[int] = None,
) -> SearchReport:
    """Sample (Q1)-reps; every theta_c-semistable one must have a regular pencil and f = 0."""
    from .stability import DEFAULT_MAX_PAIRS

    profiles = tuple(profiles)
    mp = DEFAULT_MAX_PAIRS if max_pairs is None else max_pairs
    tasks = [(n, c, field, seed, i, profiles[i % len(profiles)], mp) for i in range(trials)]
    report = SearchReport("counterexample", n, c, field, trials, seed, profiles)
    for i, (status, profile, s, rep, reasons) in enumerate(_run(_probe, tasks, jobs)):
        if status == "exhausted":
            report.exhausted += 1
        elif status == "unstable":
            report.unstable += 1
        else:
            report.semistable += 1
            if reasons:
                report.findings.append(Finding(i, s, profile, rep, reasons))
    return report


def r1_targeted(n: int, c: int, field: Field) -> FramedRep:
    """e = 0 with the regular pencil (I, I) and C = 0, f = 0."""
    I = Matrix.identity(field, c)
    Z = Matrix.zeros(field, c, c)
    return FramedRep(n, c, field, I, I, (Z,) * n, Matrix.zeros(field, 1, c), (Matrix.zeros(field, c, 1),) * (n - 1))


def r2_targeted(n: int, c: int, field: Field) -> Optional[FramedRep]:
    """c = 1 only: A = 0, e = 1; semistable at (1, 0) and destabilized at theta_c by (V0, 0)."""
    if c != 1:
        return None
    Z = Matrix.zeros(field, 1, 1)
    return FramedRep(n, 1, field, Z, Z, (Z,) * n, Matrix.identity(field, 1), (Z,) * (n - 1))


def _wall_probe(args):
    n, c, field, seed, index, profile, wall, max_pairs = args
    s = trial_seed(seed, index)
    try:
        rep = sample_rep(n, c, field, s, profile)
    except SamplerExhausted:
        return "exhausted", profile, s, None, ()
    return _classify_wall(rep, wall, max_pairs) + (profile, s, rep)


def _classify_wall(rep: FramedRep, wall: str, max_pairs: int):
    bar = check_theta_ss(rep, wall_parameter(wall, rep.c), max_pairs=max_pairs)
    at_c = check_theta_ss(rep, StabilityParam.theta_c(rep.c), max_pairs=max_pairs)
    status = "semistable" if at_c.semistable else "unstable"
    if bar.semistable and not at_c.semistable:
        w = at_c.witness
        return (status, (f"{wall}-semistable; theta_c-unstable via dims {w.dims} ({at_c.violated})",))
    return (status, ())


def wall_witness_search(
    n: int,
    c: int,
    field: Field,
    wall: str,
    trials: int,
    seed: int,
    profiles: Sequence[str] = DEFAULT_PROFILES,
    jobs: int = 1,
    max_pairs: Optional[int] = None,
) -> SearchReport:
    """Reps semistable at the wall parameter but unstable at theta_c.

    Targeted constructions are tried first (trial index -1); then seeded samples.
    """
    from .stability import DEFAULT_MAX_PAIRS

    wall_parameter(wall, c)
    profiles = tuple(profiles)
    mp = DEFAULT_MAX_PAIRS if max_pairs is None else max_pairs
    report = SearchReport("wall", n, c, field, trials, seed, profiles, wall=wall)
    if trials == 0:
        return report
    target = r1_targeted(n, c, field) if wall == "R1" else r2_targeted(n, c, field)
    if target is not None:
        _, reasons = _classify_wall(target, wall, mp)
        if reasons:
            report.findings.append(Finding(-1, -1, "targeted", target, reasons))
    tasks = [(n, c, field, seed, i, profiles[i % len(profiles)], wall, mp) for i in range(trials)]
    for i, (status, reasons, profile, s, rep) in enumerate(_run(_wall_probe, tasks, jobs)):
        if status == "exhausted":
            report.exhausted += 1
            continue
        if status == "semistable":
            report.semistable += 1
        else:
            report.unstable += 1
        if reasons:
            report.findings.append(Finding(i, s, profile, rep, reasons))
    return report
