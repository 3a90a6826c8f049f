from framedquiver.exactla import PrimeField
from framedquiver.search import (
    r1_targeted,
    r2_targeted,
    search_counterexample,
    trial_seed,
    wall_witness_search,
)
from framedquiver.stability import StabilityParam, check_theta_ss

F5 = PrimeField(5)


def test_trial_seeds_are_positional():
    assert trial_seed(7, 0) == 7_000_000
    assert trial_seed(7, 12) == 7_000_012


def test_empty_searches():
    r = search_counterexample(2, 2, F5, 0, 1)
    assert r.trials == 0 and r.ok and not r.violations
    w = wall_witness_search(2, 1, F5, "R1", 0, 1)
    assert w.ok and not w.witnesses


def test_counterexample_probe_small():
    r = search_counterexample(2, 2, F5, 60, 3)
    assert r.semistable + r.unstable + r.exhausted == 60
    assert r.semistable > 0 and r.ok


def test_parallel_merge_matches_serial():
    a = search_counterexample(2, 2, F5, 24, 5, jobs=1)
    b = search_counterexample(2, 2, F5, 24, 5, jobs=2)
    assert (a.semistable, a.unstable, a.exhausted) == (b.semistable, b.unstable, b.exhausted)


def test_r1_targeted_construction():
    rep = r1_targeted(2, 1, F5)
    assert check_theta_ss(rep, StabilityParam(1, -1)).semistable
    v = check_theta_ss(rep, StabilityParam.theta_c(1))
    assert not v.semistable and v.witness.dims == (1, 1) and v.violated == "cond1"
    w = wall_witness_search(2, 1, F5, "R1", 1, 0)
    assert w.witnesses[0].trial == -1


def test_r2_targeted_construction():
    rep = r2_targeted(2, 1, F5)
    assert check_theta_ss(rep, StabilityParam(1, 0)).semistable
    assert not check_theta_ss(rep, StabilityParam.theta_c(1)).semistable
    assert r2_targeted(2, 2, F5) is None


def test_r2_wall_witnesses_for_c2():
    w = wall_witness_search(2, 2, F5, "R2", 200, 1)
    assert w.ok and len(w.witnesses) >= 1
    for fnd in w.witnesses:
        assert check_theta_ss(fnd.rep, StabilityParam(2, -1)).semistable
        assert not check_theta_ss(fnd.rep, StabilityParam.theta_c(2)).semistable
