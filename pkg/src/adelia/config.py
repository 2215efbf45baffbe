"""TOML run configuration: parsing and validation with field paths."""
from __future__ import annotations

import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ParseError, ValidationError

SUITES = ("adeles", "cohomology", "cube-check", "identities", "kv-check")
BUILDERS = ("curve", "artinian", "synthetic")
COEFF_KINDS = ("presentation", "structure-sheaf", "random-finite-length")


@dataclass
class RunConfig:
    scheme: dict
    coefficients: list
    precision: list
    suites: list
    seed: int = None
    descent_vertex: str = "R"
    identity_instances: int = 5
    idele_samples: int = 1000
    random_cubes: int = 0
    source: dict = field(default_factory=dict)   # validated input, echoed into reports


def _decimal(value, path, allow_poly=False):
    """Numbers are kept as exact decimal strings (polynomials as written)."""
    if isinstance(value, bool):
        raise ValidationError("expected a number, got a boolean", path)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        raise ValidationError("floats are not exact; write an integer or a string", path)
    if isinstance(value, str):
        v = value.strip()
        if not v:
            raise ValidationError("empty number", path)
        if v.lstrip("+-").isdigit() or allow_poly:
            return v
        raise ValidationError(f"{value!r} is not an integer literal", path)
    raise ValidationError(f"expected a number, got {type(value).__name__}", path)


def _int(value, path, minimum=None):
    s = _decimal(value, path)
    n = int(s)
    if minimum is not None and n < minimum:
        raise ValidationError(f"must be >= {minimum}, got {n}", path)
    return n


def _list(value, path):
    if not isinstance(value, list):
        raise ValidationError("expected a list", path)
    return value


def _known(raw, keys, path):
    for k in raw:
        if k not in keys:
            where = f"{path}.{k}" if path else k
            raise ValidationError(f"unknown key {k!r}", where)


def _scheme(raw):
    if not isinstance(raw, dict):
        raise ValidationError("missing [scheme] table", "scheme")
    _known(raw, ("builder", "base", "primes", "prime", "n", "dims", "relations"), "scheme")
    builder = raw.get("builder", "curve")
    if builder not in BUILDERS:
        raise ValidationError(f"unknown builder {builder!r}", "scheme.builder")
    out = {"builder": builder}
    if builder in ("curve", "artinian"):
        base = raw.get("base", "Z")
        if not isinstance(base, str) or not (base == "Z" or (base.startswith("F") and base.endswith("[t]"))):
            raise ValidationError(f"base must be 'Z' or 'Fp[t]', got {base!r}", "scheme.base")
        out["base"] = base
        poly = base != "Z"
        if builder == "curve":
            primes = _list(raw.get("primes"), "scheme.primes") if "primes" in raw else None
            if not primes:
                raise ValidationError("a curve needs at least one prime", "scheme.primes")
            out["primes"] = [_decimal(p, f"scheme.primes[{i}]", poly) for i, p in enumerate(primes)]
        else:
            if "prime" not in raw:
                raise ValidationError("an Artinian scheme needs a prime", "scheme.prime")
            out["prime"] = _decimal(raw["prime"], "scheme.prime", poly)
    else:
        out["n"] = _int(raw.get("n", 0), "scheme.n", 0)
        dims = raw.get("dims")
        if not isinstance(dims, dict) or not dims:
            raise ValidationError("expected a table point -> dimension", "scheme.dims")
        out["dims"] = {k: _int(v, f"scheme.dims.{k}", 0) for k, v in dims.items()}
        rels = _list(raw.get("relations", []), "scheme.relations")
        pairs = []
        for i, r in enumerate(rels):
            if not (isinstance(r, list) and len(r) == 2 and all(isinstance(x, str) for x in r)):
                raise ValidationError("expected a pair of point names", f"scheme.relations[{i}]")
            pairs.append(list(r))
        out["relations"] = pairs
    return out


def _coefficient(raw, i, poly):
    path = f"coefficients[{i}]"
    if not isinstance(raw, dict):
        raise ValidationError("expected a table", path)
    kind = raw.get("kind", "presentation")
    if kind not in COEFF_KINDS:
        raise ValidationError(f"unknown kind {kind!r}", f"{path}.kind")
    out = {"kind": kind, "name": str(raw.get("name", f"C{i}"))}
    if kind == "presentation":
        ngens = _int(raw.get("ngens", 1), f"{path}.ngens", 0)
        rels = _list(raw.get("relations", []), f"{path}.relations")
        rows = []
        for r, row in enumerate(rels):
            row = _list(row, f"{path}.relations[{r}]")
            if len(row) != ngens:
                raise ValidationError(f"expected {ngens} entries", f"{path}.relations[{r}]")
            rows.append([_decimal(x, f"{path}.relations[{r}][{c}]", poly) for c, x in enumerate(row)])
        out["ngens"], out["relations"] = ngens, rows
    elif kind == "structure-sheaf":
        out["rank"] = _int(raw.get("rank", 1), f"{path}.rank", 1)
    else:
        out["count"] = _int(raw.get("count", 10), f"{path}.count", 1)
        out["bound"] = _int(raw.get("bound", 3), f"{path}.bound", 1)
    return out


def validate(raw):
    if not isinstance(raw, dict):
        raise ValidationError("configuration must be a table", "")
    _known(raw, ("scheme", "coefficients", "precision", "suites", "seed", "descent", "options"), "")
    scheme = _scheme(raw.get("scheme"))
    poly = scheme.get("base", "Z") != "Z"
    coeffs = [_coefficient(c, i, poly) for i, c in enumerate(_list(raw.get("coefficients", []), "coefficients"))]
    if not coeffs:
        coeffs = [{"kind": "structure-sheaf", "name": "O", "rank": 1}] if scheme["builder"] == "curve" else []
    prec = _list(raw.get("precision", [4]), "precision")
    if not prec:
        raise ValidationError("at least one precision is needed", "precision")
    precision = [_int(p, f"precision[{i}]", 1) for i, p in enumerate(prec)]
    suites = _list(raw.get("suites", list(SUITES)), "suites")
    if not suites:
        raise ValidationError("at least one suite is needed", "suites")
    for i, s in enumerate(suites):
        if s not in SUITES:
            raise ValidationError(f"unknown suite {s!r}", f"suites[{i}]")
    seed = _int(raw["seed"], "seed", 0) if "seed" in raw else None
    descent = raw.get("descent", {})
    if not isinstance(descent, dict):
        raise ValidationError("expected a table", "descent")
    _known(descent, ("vertex",), "descent")
    vertex = descent.get("vertex", "R")
    if vertex not in ("R", "Z"):
        raise ValidationError("vertex must be 'R' or 'Z'", "descent.vertex")
    if vertex == "Z" and scheme.get("base") != "Z":
        raise ValidationError("the global-integers vertex needs base 'Z'", "descent.vertex")
    opts = raw.get("options", {})
    if not isinstance(opts, dict):
        raise ValidationError("expected a table", "options")
    _known(opts, ("identity_instances", "idele_samples", "random_cubes"), "options")
    cfg = RunConfig(
        scheme=scheme, coefficients=coeffs, precision=precision, suites=sorted(set(suites)),
        seed=seed, descent_vertex=vertex,
        identity_instances=_int(opts.get("identity_instances", 5), "options.identity_instances", 0),
        idele_samples=_int(opts.get("idele_samples", 1000), "options.idele_samples", 1),
        random_cubes=_int(opts.get("random_cubes", 0), "options.random_cubes", 0),
    )
    cfg.source = {"scheme": scheme, "coefficients": coeffs, "precision": [str(p) for p in precision],
                  "suites": cfg.suites, "descent": {"vertex": vertex},
                  "options": {"identity_instances": str(cfg.identity_instances),
                              "idele_samples": str(cfg.idele_samples),
                              "random_cubes": str(cfg.random_cubes)}}
    return cfg


def parse_config(path):
    """Read and validate a TOML run configuration."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}", str(path)) from None
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}", str(path)) from None
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"invalid TOML: {exc}", str(path)) from None
    return validate(raw)
