"""Acceptance gate: one test per criterion, each under its time budget.

tests/conftest.py prints a pass/fail line per criterion at the end of the run.
"""
import itertools
import json
import os
import random
import subprocess
import sys
import time
from pathlib import Path

from adelia import modules as md
from adelia.adeles import coface_maps, cube_diagram, decomposition_check, kan_compare, \
    local_system, reduced_adele_complex
from adelia.arith import parse_poly
from adelia.identities import (support_dimension, vanishing_detector, verify_completion_flat,
                               verify_generic_absorption, verify_idempotency,
                               verify_key_decomposition, verify_local_decomposition)
from adelia.ktheory import mayer_vietoris_audit
from adelia.limits import compare_limits, complex_cohomology, is_limit_cube
from adelia.randomgen import random_cube, random_finite_length
from adelia.rings import SemilocalPID
from adelia.scheme import (build_artinian, build_semilocal_curve, build_synthetic_poset,
                           cartesian_lift, compose, injections, verify_cartesian)

ROOT = Path(__file__).resolve().parent.parent


def curves():
    return {
        "Z_(2,3)": build_semilocal_curve("Z", [2, 3]),
        "Z_(2,3,5)": build_semilocal_curve("Z", [2, 3, 5]),
        "F5[t]_(t,t-1)": build_semilocal_curve("F5[t]", [parse_poly("t", 5), parse_poly("t-1", 5)]),
    }


def surface():
    dims = {"x": 0, "y": 0, "c": 1, "d": 1, "g": 2}
    rels = [("x", "c"), ("y", "c"), ("y", "d"), ("c", "g"), ("d", "g")]
    return build_synthetic_poset(2, dims, rels)


def artinians():
    return {"Spec Z/2^k": build_artinian("Z", 2), "Spec F5[t]/t^k": build_artinian("F5[t]", parse_poly("t", 5))}


def _timed(limit):
    start = time.perf_counter()
    return lambda: (time.perf_counter() - start, limit)


def _check_time(clock):
    elapsed, limit = clock()
    print(f"elapsed {elapsed:.1f}s (limit {limit}s)")
    assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"


def test_criterion_1_affine_acyclicity():
    clock = _timed(60)
    for name, X in curves().items():
        R = X.base_ring
        for k in range(100):
            F = random_finite_length(R, random.Random(f"acceptance:1:{name}:{k}"))
            H = complex_cohomology(reduced_adele_complex(X, F, 2))
            assert H[0] == md.fg_invariants(F), (name, k)
            assert all(h == (0, []) for h in H[1:]), (name, k)
    _check_time(clock)


def _test_coefficients(X, tag):
    R = X.base_ring
    q = R.primes[0]
    coeffs = [1, md.cyclic(R, q ** 3), md.from_invariants(R, [R.primes[-1], q * R.primes[-1]])]
    for k in range(3):
        coeffs.append(random_finite_length(R, random.Random(f"acceptance:{tag}:{k}")))
    return coeffs


def test_criterion_2_stratified_decomposition():
    clock = _timed(10)
    for name, X in curves().items():
        for F in _test_coefficients(X, f"2:{name}"):
            for s in (2, 4):
                for r in range(X.n + 1):
                    assert decomposition_check(X, F, s, r)[0], (name, r, s)
    for name, A in artinians().items():
        F = md.cyclic(A.base_ring, A.base_ring.primes[0] ** 2)
        assert decomposition_check(A, F, 3, 0)[0], name
    S = surface()
    for r in range(3):
        assert decomposition_check(S, None, 1, r)[0]
    _check_time(clock)


def test_criterion_3_fibration_laws():
    clock = _timed(10)
    failures = 0
    for n in range(5):
        for k in range(1, n + 2):
            for T in itertools.combinations(range(n + 1), k):
                r = len(T) - 1
                for rr in range(r + 1):
                    for alpha in injections(rr, r):
                        failures += bool(verify_cartesian(T, alpha))
                        S = cartesian_lift(T, alpha)
                        for r3 in range(rr + 1):
                            for beta in injections(r3, rr):
                                failures += cartesian_lift(T, compose(alpha, beta)) != \
                                    cartesian_lift(S, beta)
    assert failures == 0
    _check_time(clock)


def test_criterion_4_limit_comparison():
    clock = _timed(120)
    diagrams = []
    for name, X in curves().items():
        for F in _test_coefficients(X, f"4:{name}"):
            for s in (2, 4):
                diagrams.append((name, X, F, s))
    for name, A in artinians().items():
        diagrams.append((name, A, md.cyclic(A.base_ring, A.base_ring.primes[0] ** 2), 3))
    diagrams.append(("surface", surface(), None, 1))
    for name, X, F, s in diagrams:
        rep = compare_limits(cube_diagram(X, F, s), coface_maps(X, F, s))
        assert rep["verdict"] == "pass", (name, rep)
    for n in (1, 2, 3):
        for k in range(100):
            cube = random_cube(n, random.Random(f"acceptance:4:{n}:{k}"), free=(k % 4 == 0))
            rep = compare_limits(cube, kan_compare(cube))
            assert rep["verdict"] == "pass", (n, k, rep)
            assert rep["oracles"]["cube"]["full_families"]
            assert rep["oracles"]["semicosimplicial"]["all_injections"]
    _check_time(clock)


def test_criterion_5_descent_square():
    clock = _timed(5)
    X = build_semilocal_curve("Z", [2, 3])
    for s in (2, 4):
        ok, rep = is_limit_cube(cube_diagram(X, 1, s))
        assert ok and rep["defect"] == {"kernel": "0", "cokernel": "0"}
        bad = cube_diagram(X, 1, s, system=local_system(X, 1, s, base_override="Z"))
        ok, rep = is_limit_cube(bad)
        assert not ok and rep["defect"]["cokernel"] == "nonzero"
        assert rep["defect"]["witness"] == ["1/5", "1/5", "1/5"]
    _check_time(clock)


def _identity_verdicts(X, C, Rlocal, M, kind, s):
    out = []
    i = max(0, support_dimension(C, X))
    for ii in range(i, 2):
        out.append(verify_local_decomposition(C, ii, X, s)["verdict"])
        out.append(verify_idempotency(C, ii, X, s)["verdict"])
    out.append(verify_generic_absorption(X, s, C=C, samples=5)["verdict"])
    out.append(verify_key_decomposition(C, 1, (0,), X, s)["verdict"])
    out.append(verify_completion_flat(Rlocal, kind, M, s, t=3)["verdict"])
    return out


def test_criterion_6_identity_suite():
    clock = _timed(120)
    for name, X in curves().items():
        R = X.base_ring
        for k in range(50):
            rng = random.Random(f"acceptance:6:{name}:{k}")
            C = random_finite_length(R, rng, free_rank=rng.choice([0, 0, 1]))
            q = rng.choice(R.primes)
            Rlocal = SemilocalPID(R.base, (q,))
            M = random_finite_length(Rlocal, rng)
            kind = ("R", "K", "trunc")[k % 3]
            v4 = _identity_verdicts(X, C, Rlocal, M, kind, 4)
            v8 = _identity_verdicts(X, C, Rlocal, M, kind, 8)
            assert v4 == v8, (name, k)
            assert all(v == "pass" for v in v4), (name, k, v4)
    _check_time(clock)


def test_criterion_7_vanishing_detector():
    clock = _timed(30)
    Xs = list(curves().values())
    counterexamples = 0
    for k in range(200):
        rng = random.Random(f"acceptance:7:{k}")
        X = Xs[k % len(Xs)]
        C = random_finite_length(X.base_ring, rng)
        for i, j in ((0, ()), (1, (0,))):
            vanishes, w = vanishing_detector(C, i, j, X)
            assert w["agree"]
            counterexamples += not w["implication_holds"]
    assert counterexamples == 0
    _check_time(clock)


def test_criterion_8_mayer_vietoris():
    clock = _timed(30)
    for name, X in curves().items():
        _, rep = mayer_vietoris_audit(X, samples=1000, seed=0)
        assert rep["checks"]["k0_surjective"] and rep["checks"]["k0_middle_exact"], name
        assert rep["snf_certificate"] == ["1"] * len(X.base_ring.primes)
        assert rep["witness_failures"] == 0 and rep["exact"], name
    _check_time(clock)


def test_criterion_9_determinism(tmp_path):
    cfg = ROOT / "configs" / "curve23.toml"
    reports, times = [], []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        start = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "adelia.cli", "verify", "--config", str(cfg),
                               "--seed", "7", "--out", str(out)],
                              capture_output=True, text=True, env={**os.environ})
        times.append(time.perf_counter() - start)
        assert proc.returncode == 0, proc.stderr
        rep = json.loads(out.read_text())
        rep.pop("timings")
        reports.append(json.dumps(rep, sort_keys=True))
    assert reports[0] == reports[1]
    print(f"runs took {times[0]:.1f}s and {times[1]:.1f}s")
    assert sum(times) < 2 * max(times) + 1
