"""Suite orchestration: build the scheme and coefficients from a RunConfig and run verifiers."""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from . import modules as md
from .adeles import (adele, compare_semicosimplicial, coface_maps, cube_diagram,
                     decomposition_check, kan_compare, local_system, reduced_adele_complex)
from .arith import Poly, RatFunc, parse_poly, valuation
from .diagrams import dim_of
from .errors import AdeliaError, UnsupportedFamily
from .identities import (verify_completion_flat, verify_generic_absorption,
                         verify_idempotency, verify_key_decomposition,
                         verify_local_decomposition, support_dimension, vanishing_detector)
from .ktheory import mayer_vietoris_audit
from .limits import (compare_limits, complex_cohomology, is_limit_cube, rational_h0,
                     strong_approximation)
from .randomgen import random_cube, random_finite_length
from .rings import SemilocalPID
from .scheme import build_artinian, build_semilocal_curve, build_synthetic_poset, dimension_types

REPORT_SCHEMA = 1


# -- building inputs ---------------------------------------------------------------

def _scalar(text, base):
    return int(text) if base == "Z" else parse_poly(text, int(base[1:-3]))


def build_scheme(scheme):
    b = scheme["builder"]
    if b == "curve":
        return build_semilocal_curve(scheme["base"], [_scalar(p, scheme["base"]) for p in scheme["primes"]])
    if b == "artinian":
        return build_artinian(scheme["base"], _scalar(scheme["prime"], scheme["base"]))
    return build_synthetic_poset(scheme["n"], scheme["dims"], [tuple(r) for r in scheme["relations"]])


def build_coefficients(cfg, X, seed):
    """List of (instance id, coefficient) where a coefficient is a module or a free rank."""
    out = []
    if X.base_ring is None:
        return [("placeholder", None)]
    R = X.base_ring
    base = cfg.scheme["base"]
    for c in cfg.coefficients:
        if c["kind"] == "presentation":
            rels = tuple(tuple(_scalar(x, base) for x in row) for row in c["relations"])
            out.append((c["name"], md.PresentedModule(R, c["ngens"], rels)))
        elif c["kind"] == "structure-sheaf":
            out.append((c["name"], c["rank"]))
        else:
            for k in range(c["count"]):
                rng = random.Random(f"{seed}:coefficient:{c['name']}:{k}")
                out.append((f"{c['name']}#{k}", random_finite_length(R, rng, max_exp=c["bound"])))
    return out


def _is_free(F):
    return isinstance(F, int)


def _as_module(F, R):
    return md.free(R, F) if _is_free(F) else F


# -- JSON sanitizing ---------------------------------------------------------------

def plain(obj):
    """Exact scalars become strings; containers are made JSON-ready with sorted keys."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction, Poly, RatFunc)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(x) for x in obj]
    return str(obj)


def _inst(instance, ok, payload=None, verdict=None):
    v = verdict or ("pass" if ok else "fail")
    rep = {"instance": instance, "verdict": v}
    if payload is not None:
        rep["witness" if v != "fail" else "defect"] = payload
    return rep


def _desc(obj):
    if isinstance(obj, md.PresentedModule):
        rank, facs = md.fg_invariants(obj)
        return {"rank": rank, "invariant_factors": facs}
    return obj.describe()


# -- suites -------------------------------------------------------------------------

def suite_adeles(cfg, X, coeffs, seed):
    out = []
    for name, F in coeffs:
        for s in cfg.precision:
            for typ in dimension_types(X.n):
                tag = f"{name}/A{typ}/s={s}"
                try:
                    obj = adele(typ, F, X, s)
                except UnsupportedFamily as exc:
                    out.append(_inst(tag, True, {"reason": str(exc)}, "inapplicable"))
                    continue
                emb = obj.embedding()
                injective = len(emb) == dim_of(obj.carrier)
                out.append(_inst(tag, injective, {"carrier": _desc(obj.carrier),
                                                  "flags": [list(c) for c in obj.order]}))
            for r in range(X.n + 1):
                tag = f"{name}/decomposition/r={r}/s={s}"
                try:
                    ok, whole, prod = decomposition_check(X, F, s, r)
                except UnsupportedFamily as exc:
                    out.append(_inst(tag, True, {"reason": str(exc)}, "inapplicable"))
                    continue
                out.append(_inst(tag, ok, {"whole": _desc(whole.carrier), "product": _desc(prod)}))
    return out


def suite_cohomology(cfg, X, coeffs, seed):
    out = []
    for name, F in coeffs:
        for s in cfg.precision:
            tag = f"{name}/s={s}"
            try:
                system = local_system(X, F, s)
            except UnsupportedFamily as exc:
                out.append(_inst(tag, True, {"reason": str(exc)}, "inapplicable"))
                continue
            if X.base_ring is None:
                # placeholder modules carry no sheaf, so there is no Gamma to compare with
                out.append(_inst(tag, True, {"reason": "synthetic poset has no structure sheaf"},
                                 "inapplicable"))
                continue
            if system.kind == "presented":
                C = reduced_adele_complex(X, F, s, system=system)
                H = complex_cohomology(C)
                gamma = md.fg_invariants(system.base())
                ok = H[0] == gamma and all(h == (0, []) for h in H[1:])
                out.append(_inst(tag, ok, {"H": [{"rank": r, "invariant_factors": f} for r, f in H],
                                           "global_sections": {"rank": gamma[0], "invariant_factors": gamma[1]}}))
            else:
                out.append(_rational_cohomology(tag, X, F, s, system, seed))
    return out


def _rational_cohomology(tag, X, k, s, system, seed):
    """H^0 = R^k by the valuation criterion; H^1 = 0 by strong approximation on samples."""
    M = coface_maps(X, k, s, system)
    H0 = rational_h0(M)
    # H^0 sits in level 0 = O^k + K^k; project to the generic-point block and compare with R^k
    base = system.base()
    dom = base.dom
    start, pos = None, 0
    for label, w in M.labels[0]:
        if label == (X.generic_point,):
            start = pos
        pos += w
    P = [[dom.one if j == i - start else dom.zero for j in range(k)] for i in range(pos)]
    proj = H0.image(P, k)
    ok0 = proj.equals(base)
    rng = random.Random(f"{seed}:cohomology:{tag}")
    primes = list(X.base_ring.primes)
    eb = X.base_ring.euclid
    A = M.levels[1]
    ok1 = True
    example = None
    for _ in range(20):
        x = A.sample(rng)
        # level 1 has one block of width k per closed point, in prime order
        for g in range(k):
            comp = [x[b * k + g] for b in range(len(primes))]
            f, o = strong_approximation(comp, primes, eb, dom)
            if not all(valuation(oq, q) >= 0 for oq, q in zip(o, primes) if oq):
                ok1 = False
            if any(f - oq != aq for oq, aq in zip(o, comp)):
                ok1 = False
            if example is None:
                example = {"a": comp, "f": f, "o": o}
    payload = {"H0": proj.describe(), "H0_equals_R": ok0, "H1_zero_by_approximation": ok1,
               "example": example}
    return _inst(tag, ok0 and ok1, payload)


def suite_cube_check(cfg, X, coeffs, seed):
    out = []
    override = cfg.descent_vertex if cfg.descent_vertex != "R" else None
    for name, F in coeffs:
        for s in cfg.precision:
            tag = f"{name}/s={s}"
            try:
                system = local_system(X, F, s, base_override=override) if X.base_ring is not None \
                    else local_system(X, F, s)
            except UnsupportedFamily as exc:
                out.append(_inst(tag, True, {"reason": str(exc)}, "inapplicable"))
                continue
            cube = cube_diagram(X, F, s, system=system)
            M = coface_maps(X, F, s, system=system)
            kan_ok, msg = compare_semicosimplicial(kan_compare(cube), M)
            lim = compare_limits(cube, M)
            if X.base_ring is None:
                desc_ok, desc = True, "inapplicable: synthetic poset has no global sections"
            else:
                desc_ok, desc = is_limit_cube(cube)
            ok = kan_ok and lim["verdict"] == "pass" and desc_ok
            payload = {"kan_compare": msg, "limits": lim, "descent": desc}
            out.append(_inst(tag, ok, payload))
    for k in range(cfg.random_cubes):
        for n in (1, 2, 3):
            rng = random.Random(f"{seed}:cube-check:random:{n}:{k}")
            cube = random_cube(n, rng, free=(k % 4 == 0))
            lim = compare_limits(cube, kan_compare(cube))
            out.append(_inst(f"random/n={n}/{k}", lim["verdict"] == "pass", lim))
    return out


def _identity_inputs(cfg, X, coeffs, seed):
    mods = [(name, _as_module(F, X.base_ring)) for name, F in coeffs]
    for k in range(cfg.identity_instances):
        rng = random.Random(f"{seed}:identities:random:{k}")
        mods.append((f"random#{k}", random_finite_length(X.base_ring, rng, free_rank=rng.choice([0, 0, 1]))))
    return mods


def identity_reports(X, C, name, s):
    """Every applicable identity verifier on one coefficient, as a list of reports."""
    reps = []
    dim = support_dimension(C, X)
    for i in range(max(dim, 0), X.n + 1):
        reps.append(verify_local_decomposition(C, i, X, s, instance=f"{name}/i={i}"))
        reps.append(verify_idempotency(C, i, X, s, instance=f"{name}/i={i}"))
    reps.append(verify_key_decomposition(C, 1, (0,), X, s, instance=name))
    reps.append(verify_generic_absorption(X, s, C=C, instance=name))
    rank, facs = md.fg_invariants(C)
    for q in X.base_ring.primes:
        Rq = SemilocalPID(X.base_ring.base, (q,))
        local = md.module_localize(C, q)
        if rank:
            local = md.from_invariants(Rq, md.fg_invariants(local)[1])
        for kind, t in (("R", None), ("K", None), ("trunc", 2)):
            reps.append(verify_completion_flat(Rq, kind, local, s, t=t,
                                               instance=f"{name}/q={q}/{kind}"))
    vanish, wit = vanishing_detector(C, 1, (0,), X, s)
    reps.append({"identity": "vanishing_detector", "instance": name, "precision": s,
                 "verdict": "pass", "witness": wit})
    return reps


def suite_identities(cfg, X, coeffs, seed):
    if not X.is_curve:
        return [_inst("scheme", True, {"reason": "identity verifiers run on semilocal curves"},
                      "inapplicable")]
    out = []
    for name, C in _identity_inputs(cfg, X, coeffs, seed):
        verdicts = {}
        for s in cfg.precision:
            for rep in identity_reports(X, C, name, s):
                key = f"{rep['identity']}/{rep['instance']}"
                verdicts.setdefault(key, []).append(rep["verdict"])
                out.append(_inst(f"{key}/s={s}", rep["verdict"] == "pass",
                                 rep.get("witness", rep.get("defect"))))
        stable = all(len(set(v)) == 1 for v in verdicts.values())
        out.append(_inst(f"{name}/precision-stability", stable,
                         {"precisions": cfg.precision, "checks": len(verdicts)}))
    return out


def suite_kv_check(cfg, X, coeffs, seed):
    if not X.is_curve:
        return [_inst("scheme", True, {"reason": "the K-shadow audit needs a semilocal curve"},
                      "inapplicable")]
    seq, rep = mayer_vietoris_audit(X, samples=cfg.idele_samples, seed=seed)
    return [_inst(str(X.base_ring), rep["exact"], rep)]


SUITE_FUNCS = {
    "adeles": suite_adeles,
    "cohomology": suite_cohomology,
    "cube-check": suite_cube_check,
    "identities": suite_identities,
    "kv-check": suite_kv_check,
}


def run_one(cfg, suite, seed):
    """Run a single suite; returns (suite record, seconds)."""
    t0 = time.perf_counter()
    X = build_scheme(cfg.scheme)
    coeffs = build_coefficients(cfg, X, seed)
    try:
        instances = SUITE_FUNCS[suite](cfg, X, coeffs, seed)
    except AdeliaError as exc:
        instances = [_inst("suite", False, {"error": type(exc).__name__, "message": str(exc)})]
    instances = sorted((plain(i) for i in instances), key=lambda r: r["instance"])
    verdicts = {i["verdict"] for i in instances}
    verdict = "fail" if "fail" in verdicts else ("pass" if "pass" in verdicts else "inapplicable")
    return {"suite": suite, "verdict": verdict, "instances": instances}, time.perf_counter() - t0


def run_suites(cfg, seed, suites=None, jobs=1):
    """Run the requested suites and assemble a deterministic report (timings kept apart)."""
    suites = sorted(suites or cfg.suites)
    if jobs > 1 and len(suites) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, [cfg] * len(suites), suites, [seed] * len(suites)))
    else:
        results = [run_one(cfg, s, seed) for s in suites]
    records = [r for r, _ in results]
    timings = {r["suite"]: round(t, 3) for r, t in results}
    verdicts = {r["verdict"] for r in records}
    overall = "fail" if "fail" in verdicts else "pass"
    report = {
        "tool": "adelia",
        "version": __version__,
        "schema": REPORT_SCHEMA,
        "seed": str(seed),
        "input": cfg.source,
        "verdict": overall,
        "suites": sorted(records, key=lambda r: r["suite"]),
        "timings": timings,
    }
    return report


def carriers_report(cfg, seed):
    """A(T, F) carriers for every coefficient, dimension type and precision."""
    X = build_scheme(cfg.scheme)
    rows = []
    for name, F in build_coefficients(cfg, X, seed):
        for s in cfg.precision:
            for typ in dimension_types(X.n):
                try:
                    obj = adele(typ, F, X, s)
                    rows.append({"coefficient": name, "type": list(typ), "precision": s,
                                 "regime": obj.regime, "carrier": _desc(obj.carrier),
                                 "factors": {"/".join(c): _desc(obj.factors[c]) for c in obj.order},
                                 "truncation": [str(T) for T in obj.truncation]})
                except UnsupportedFamily as exc:
                    rows.append({"coefficient": name, "type": list(typ), "precision": s,
                                 "regime": "unsupported", "reason": str(exc)})
    return plain({"tool": "adelia", "version": __version__, "schema": REPORT_SCHEMA,
                  "input": cfg.source, "carriers": rows})
