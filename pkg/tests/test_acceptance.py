"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every threshold below is pinned.  All arithmetic is exact, so every numeric
tolerance is zero; the remaining pins are sample sizes and wall-clock budgets.
"""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import product

import pytest

from oracles import _inside, brute_p3_fails

from framedquiver.adhm import FAIL, adhm_p3
from framedquiver.destabilizer import DestabilizerError, destabilizer_from_singular_pencil
from framedquiver.exactla import GAUSSIAN, QQ, ExtensionField, Matrix, PrimeField, det_pencil, det_pencil_cofactor
from framedquiver.pencil import Pencil, is_regular, subspace_image_oracle
from framedquiver.quiver import (
    PROFILES,
    GaugeElement,
    check_relations,
    check_relations_augmented,
    embed_to_augmented,
    gauge_act,
    monad_dims,
    moduli_dim,
    random_rotation,
    sample_augmented_rep,
    sample_rep,
    so2_act,
    to_adhm,
)
from framedquiver.search import search_counterexample, wall_witness_search
from framedquiver.stability import (
    ChamberClass,
    StabilityParam,
    check_Q23,
    check_theta_ss,
    classify_theta,
    kronecker_ss,
)

# -- pinned tolerances ------------------------------------------------------------------
RESIDUAL_TOL = 0            # exact arithmetic: residuals must be exactly zero
MISMATCH_TOL = 0            # allowed disagreements in every cross-check
C1_REPS, C1_SECONDS = 200, 60.0
C2_PENCILS, C2_SECONDS = 256, 10.0
C3_TRIALS, C3_SECONDS = 500, 600.0
C4_PER_FIELD, C4_SECONDS = 100, 120.0
C5_REPS = 500
C6_REPS = 100
C7_REPS, C7_THETAS, C7_TRIALS = 20, 10, 1000
C8_ACTIONS = 50
C9_ROWS = 20
C10_PENCILS, C10_MAX_C = 100, 4
C12_DATA = 100
SEED = 20240101

F5 = PrimeField(5)
FIELD_KINDS = [QQ, GAUSSIAN, F5, ExtensionField(5, 2)]


def _rand_matrix(F, c, rng):
    return Matrix(F, c, c, tuple(tuple(F.random_element(rng) if rng.random() < 0.7 else F.zero
                                       for _ in range(c)) for _ in range(c)))


def test_criterion_01_relation_exactness(acceptance):
    t = time.perf_counter()
    bad = []
    for i in range(C1_REPS):
        n, c = 2 + i % 4, 1 + (i // 4) % 4
        F = QQ if (i // 16) % 2 == 0 else F5
        rep = sample_rep(n, c, F, SEED + i, PROFILES[i % 3])
        rel = check_relations(rep)
        nonzero = sum(1 for ch in rel.checks for m in (ch.first, ch.second) for row in m.data for x in row
                      if not F.is_zero(x))
        if nonzero > RESIDUAL_TOL:
            bad.append(i)
    dt = time.perf_counter() - t
    ok = len(bad) <= MISMATCH_TOL and dt < C1_SECONDS
    assert acceptance(1, "relation exactness", ok,
                      f"{C1_REPS} reps, {len(bad)} with nonzero residuals, {dt:.1f}s (< {C1_SECONDS:.0f}s)")


def test_criterion_02_kronecker_lemma_over_f2(acceptance):
    F2 = PrimeField(2)
    t = time.perf_counter()
    mismatches, regular, total = 0, 0, 0
    for bits in product((0, 1), repeat=8):
        A1 = Matrix(F2, 2, 2, ((bits[0], bits[1]), (bits[2], bits[3])))
        A2 = Matrix(F2, 2, 2, ((bits[4], bits[5]), (bits[6], bits[7])))
        a = kronecker_ss(A1, A2, StabilityParam.theta_c(2)).semistable
        b = is_regular(Pencil(A1, A2)).regular
        o = subspace_image_oracle(Pencil(A1, A2))
        mismatches += not (a == b == o)
        regular += b
        total += 1
    dt = time.perf_counter() - t
    ok = total == C2_PENCILS and mismatches <= MISMATCH_TOL and dt < C2_SECONDS
    assert acceptance(2, "Kronecker lemma, all F2 pencils", ok,
                      f"{total} pencils ({regular} regular), {mismatches} mismatches, {dt:.1f}s (< {C2_SECONDS:.0f}s)")


def test_criterion_03_main_theorem_probe(acceptance):
    t = time.perf_counter()
    parts, violations, ok = [], 0, True
    for n, c in ((2, 2), (3, 2), (2, 3)):
        r = search_counterexample(n, c, F5, C3_TRIALS, SEED)
        violations += len(r.violations)
        sampled = r.semistable + r.unstable
        ok &= sampled >= C3_TRIALS and r.semistable > 0
        parts.append(f"(n,c)=({n},{c}): {r.semistable} semistable / {sampled}")
    dt = time.perf_counter() - t
    ok = ok and violations <= MISMATCH_TOL and dt < C3_SECONDS
    assert acceptance(3, "main theorem probe over F5", ok,
                      "; ".join(parts) + f"; {violations} violations, {dt:.1f}s (< {C3_SECONDS:.0f}s) [experimental]")


def _definition_violated(rep, sub) -> bool:
    """Independent re-check: invariance by rank tests, then the theta_c inequalities."""
    c = rep.c
    if not all(_inside(sub.S1, A @ sub.S0) for A in (rep.A1, rep.A2)):
        return False
    if not all(_inside(sub.S0, M @ sub.S1) for M in rep.B + rep.D):
        return False
    t0, t1 = 2 * c, 1 - 2 * c
    val = t0 * sub.s0 + t1 * sub.s1
    in_ker = (rep.e @ sub.S0).is_zero()
    has_f = all(_inside(sub.S0, f) for f in rep.f)
    return (in_ker and val > 0) or (has_f and val > (t0 + t1) * c)


def test_criterion_04_destabilizer_soundness(acceptance):
    t = time.perf_counter()
    counts = {}
    for F in (QQ, F5):
        good = 0
        for i in range(C4_PER_FIELD):
            n, c = 2 + i % 3, 1 + i % 4
            rep = sample_augmented_rep(n, c, F, SEED + i, "forced-singular-pencil")
            try:
                res = destabilizer_from_singular_pencil(rep)
            except DestabilizerError:
                continue
            good += res.violated in ("Q2'", "Q3'") and _definition_violated(rep, res.subrep)
        counts[F.name] = good
    dt = time.perf_counter() - t
    ok = all(v == C4_PER_FIELD for v in counts.values()) and dt < C4_SECONDS
    assert acceptance(4, "destabilizer soundness", ok,
                      ", ".join(f"{k}: {v}/{C4_PER_FIELD}" for k, v in counts.items())
                      + f", {dt:.1f}s (< {C4_SECONDS:.0f}s)")


def test_criterion_05_q23_lemma(acceptance):
    fields = [F5, PrimeField(7), ExtensionField(5, 2)]
    disagree, tags = 0, {}
    for i in range(C5_REPS):
        F = fields[i % 3]
        n, c = 2 + i % 4, 1 + (i // 3) % 2
        rep = sample_augmented_rep(n, c, F, SEED + i, PROFILES[(i // 6) % 3])
        a = check_Q23(rep).tag
        b = check_theta_ss(rep, StabilityParam.theta_c(c)).tag
        disagree += a != b
        tags[b] = tags.get(b, 0) + 1
    ok = disagree <= MISMATCH_TOL
    assert acceptance(5, "(Q2')/(Q3') vs theta_c", ok,
                      f"{C5_REPS} reps {dict(sorted(tags.items()))}, {disagree} disagreements")


def test_criterion_06_lambda_vs_augmented(acceptance):
    disagree = 0
    for i in range(C6_REPS):
        F = F5 if i % 2 == 0 else PrimeField(7)
        n, c = 2 + i % 4, 1 + (i // 4) % 2
        rep = sample_rep(n, c, F, SEED + i, PROFILES[i % 3])
        th = StabilityParam.theta_c(c)
        a, b = check_theta_ss(rep, th), check_theta_ss(embed_to_augmented(rep), th)
        disagree += (a.tag, a.stable) != (b.tag, b.stable)
    ok = disagree <= MISMATCH_TOL
    assert acceptance(6, "Lambda / Lambda' agreement", ok, f"{C6_REPS} reps, {disagree} disagreements")


INTERIOR_C2 = [(4, -3), (3, -2), (5, -4), (5, -3), (7, -5), (7, -4), (10, -7), (10, -6), (9, -5), (11, -8)]


def test_criterion_07_chamber_and_walls(acceptance):
    thetas = [StabilityParam(a, b) for a, b in INTERIOR_C2]
    interior = all(classify_theta(th, 2) == ChamberClass.InteriorGamma for th in thetas)
    varying, stable_gap = 0, 0
    for i in range(C7_REPS):
        rep = sample_rep(2, 2, F5, SEED + i, PROFILES[i % 3])
        verdicts = [check_theta_ss(rep, th, stable=True) for th in thetas]
        varying += len({v.tag for v in verdicts}) > 1
        stable_gap += sum(v.semistable and not v.stable for v in verdicts)
    r1 = wall_witness_search(2, 2, F5, "R1", C7_TRIALS, SEED)
    r2 = wall_witness_search(2, 2, F5, "R2", C7_TRIALS, SEED)
    targeted = bool(r1.witnesses) and r1.witnesses[0].trial == -1
    ok = (interior and len(thetas) == C7_THETAS and varying <= MISMATCH_TOL and stable_gap <= MISMATCH_TOL
          and len(r1.witnesses) >= 1 and len(r2.witnesses) >= 1 and targeted)
    assert acceptance(7, "chamber invariance and wall witnesses", ok,
                      f"{C7_REPS} reps x {len(thetas)} interior thetas, {varying} varying, "
                      f"{stable_gap} semistable-not-stable; R1 witnesses {len(r1.witnesses)} "
                      f"(targeted {'ok' if targeted else 'missing'}), R2 witnesses {len(r2.witnesses)}")


def _tag(rep):
    th = StabilityParam.theta_c(rep.c)
    mode = "exhaustive" if rep.field.is_finite else "criteria"
    return check_theta_ss(rep, th, mode=mode).tag


def test_criterion_08_group_actions(acceptance):
    rng = random.Random(SEED)
    changes = {}
    for F in FIELD_KINDS:
        bad = 0
        for i in range(C8_ACTIONS):
            rep = sample_rep(2 + i % 2, 2, F, SEED + i, PROFILES[i % 3])
            g = GaugeElement.random(F, 2, rng)
            out = gauge_act(g, rep)
            bad += _tag(out) != _tag(rep)
            bad += not check_relations(out).passed
            bad += is_regular(Pencil(out.A1, out.A2)).regular != is_regular(Pencil(rep.A1, rep.A2)).regular
            aug = sample_augmented_rep(2 + i % 3, 2, F, SEED + i, PROFILES[i % 3])
            nu = random_rotation(F, rng)
            rot = so2_act(nu, aug)
            bad += _tag(rot) != _tag(aug)
            bad += not check_relations_augmented(rot).passed
            bad += is_regular(Pencil(rot.A1, rot.A2)).regular != is_regular(Pencil(aug.A1, aug.A2)).regular
        changes[F.name] = bad
    ok = all(v <= MISMATCH_TOL for v in changes.values())
    assert acceptance(8, "gauge and rotation invariance", ok,
                      f"{C8_ACTIONS} gauges + {C8_ACTIONS} rotations per field; changes "
                      + ", ".join(f"{k}: {v}" for k, v in changes.items()))


# (n, r, a, c) -> (k1, k2, k3, k4), moduli dimension
FORMULA_TABLE = [
    ((2, 1, 0, 5), (5, 5, 5, 6), 10),
    ((1, 2, 1, 3), (3, 4, 3, 4), 13),
    ((3, 2, 1, 0), (0, 3, 2, 1), 3),
    ((1, 1, 0, 1), (1, 1, 1, 2), 2),
    ((1, 1, 0, 0), (0, 0, 0, 1), 0),
    ((2, 2, 0, 3), (3, 3, 3, 5), 12),
    ((2, 2, 1, 3), (3, 5, 4, 4), 14),
    ((3, 3, 2, 4), (7, 13, 11, 8), 48),
    ((4, 3, 1, 2), (2, 6, 5, 4), 20),
    ((5, 4, 3, 1), (16, 31, 28, 17), 143),
    ((1, 3, 2, 0), (1, 3, 1, 2), 8),
    ((2, 3, 2, 2), (4, 8, 6, 5), 28),
    ((3, 1, 0, 7), (7, 7, 7, 8), 14),
    ((4, 2, 1, 6), (6, 10, 9, 7), 28),
    ((6, 3, 2, 1), (7, 19, 17, 8), 54),
    ((2, 4, 3, 0), (6, 12, 9, 7), 54),
    ((3, 4, 2, 5), (8, 14, 12, 10), 76),
    ((5, 2, 1, 2), (2, 7, 6, 3), 13),
    ((1, 5, 4, 3), (9, 13, 9, 10), 94),
    ((7, 3, 2, 2), (9, 23, 21, 10), 68),
]


def test_criterion_09_formulas(acceptance):
    wrong = [args for args, k, d in FORMULA_TABLE if monad_dims(*args).k != k or moduli_dim(*args) != d]
    ok = len(FORMULA_TABLE) == C9_ROWS and not wrong
    assert acceptance(9, "monad and moduli dimension formulas", ok,
                      f"{len(FORMULA_TABLE)} rows, {len(wrong)} wrong {wrong if wrong else ''}".rstrip())


def test_criterion_10_det_pencil_cross_check(acceptance):
    rng = random.Random(SEED)
    diffs = {}
    for F in FIELD_KINDS:
        bad = 0
        for i in range(C10_PENCILS):
            c = 1 + i % C10_MAX_C
            A1, A2 = _rand_matrix(F, c, rng), _rand_matrix(F, c, rng)
            bad += det_pencil(A1, A2).coeffs != det_pencil_cofactor(A1, A2).coeffs
        diffs[F.name] = bad
    ok = all(v <= MISMATCH_TOL for v in diffs.values())
    assert acceptance(10, "det_pencil interpolation vs cofactor", ok,
                      f"{C10_PENCILS} pencils per field (c <= {C10_MAX_C}); differences "
                      + ", ".join(f"{k}: {v}" for k, v in diffs.items()))


def _cli(args, cwd):
    out = subprocess.run([sys.executable, "-m", "framedquiver.cli", *args], capture_output=True, cwd=cwd)
    return out.returncode, out.stdout


def _snapshot(path):
    return {name: open(os.path.join(path, name), "rb").read() for name in sorted(os.listdir(path))}


def test_criterion_11_determinism(acceptance, tmp_path):
    commands = [
        ["sample", "--n", "3", "--c", "2", "--field", "F5", "--seed", "7", "--count", "3", "--out", "samples"],
        ["sample", "--n", "2", "--c", "2", "--field", "Q(i)", "--seed", "7", "--count", "2",
         "--profile", "forced-singular-pencil", "--augmented", "--out", "samples_aug"],
        ["search", "counterexample", "--n", "2", "--c", "2", "--trials", "40", "--seed", "3", "--out", "found"],
        ["search", "wall", "--wall", "R2", "--n", "2", "--c", "2", "--trials", "60", "--seed", "3",
         "--jobs", "2", "--out", "walls"],
        ["check", os.path.join("samples", "sample-7-0000.json"), "--stable"],
    ]
    runs = []
    for _ in range(2):
        for d in ("samples", "samples_aug", "found", "walls"):
            target = tmp_path / d
            if target.exists():
                for f in target.iterdir():
                    f.unlink()
        outputs = [_cli(cmd, tmp_path) for cmd in commands]
        files = {d: _snapshot(tmp_path / d) for d in ("samples", "samples_aug", "walls") if (tmp_path / d).exists()}
        runs.append((outputs, files))
    same = runs[0] == runs[1]
    codes = [code for code, _ in runs[0][0]]
    reports_parse = all(json.loads(out) for _, out in runs[0][0])
    nfiles = sum(len(v) for v in runs[0][1].values())
    ok = same and reports_parse and all(c in (0, 1) for c in codes) and nfiles >= 5
    assert acceptance(11, "determinism of seeded commands", ok,
                      f"{len(commands)} commands run twice, {nfiles} fixtures; "
                      f"{'byte-identical' if same else 'outputs differ'}; exit codes {codes}")


def test_criterion_12_p3_oracle(acceptance):
    disagree, fails, total = {}, 0, 0
    for p in (3, 5):
        F = PrimeField(p)
        bad = 0
        for i in range(C12_DATA):
            n, c = 1 + i % 2, 1 + (i // 2) % 2
            d = to_adhm(sample_rep(n, c, F, SEED + i, PROFILES[i % 3]))
            got = adhm_p3(d).status == FAIL
            bad += got != brute_p3_fails(d)
            fails += got
            total += 1
        disagree[f"p={p}"] = bad
    ok = all(v <= MISMATCH_TOL for v in disagree.values())
    assert acceptance(12, "(P3) vs brute-force enumeration", ok,
                      f"{total} data ({fails} failing P3), disagreements "
                      + ", ".join(f"{k}: {v}" for k, v in disagree.items()))
