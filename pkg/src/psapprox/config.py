"""Problem configuration: one JSON document with exact rationals."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from .errors import InputError
from .exact.ball import DEFAULT_MAX_BITS
from .jsonio import rat_from_json
from .powersum import PowerSum
from .puiseux import BiPoly

DEFAULT_EPS = Fraction(1, 20)


@dataclass
class ProblemConfig:
    mode: str = "single"
    f: Optional[BiPoly] = None
    G: Optional[PowerSum] = None
    G_list: List[PowerSum] = field(default_factory=list)
    xi: Optional[PowerSum] = None
    r: int = 0
    branch: int = 0
    t: Fraction = Fraction(1, 9)
    eps: Fraction = DEFAULT_EPS
    index_range: Optional[Tuple[int, int]] = None
    certify_range: Optional[Tuple[int, int]] = None
    y0_interval: Optional[Tuple[Fraction, Fraction]] = None
    k_max: int = 8
    precision_cap: int = DEFAULT_MAX_BITS
    grace: Optional[int] = None
    subspace_primes: List[int] = field(default_factory=list)
    subspace_samples: List[Tuple[int, int, int]] = field(default_factory=list)

    def indices(self) -> range:
        if self.index_range is None:
            raise InputError("range: no index range given (config 'range' or --range a..b)")
        a, b = self.index_range
        return range(a, b + 1)

    def certify_indices(self) -> range:
        if self.certify_range is not None:
            a, b = self.certify_range
            return range(a, b + 1)
        return self.indices()

    def require(self, *names: str) -> None:
        for n in names:
            v = getattr(self, n)
            if v is None or (isinstance(v, list) and not v):
                raise InputError(f"{n}: required for mode '{self.mode}'")


def parse_range(obj: Any, where: str = "range") -> Tuple[int, int]:
    if isinstance(obj, str):
        parts = obj.split("..")
        if len(parts) != 2:
            raise InputError(f"{where}: expected 'a..b', got {obj!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"{where}: expected integers in 'a..b', got {obj!r}") from None
    elif isinstance(obj, list) and len(obj) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in obj):
        a, b = obj
    else:
        raise InputError(f"{where}: expected 'a..b' or [a, b]")
    if a > b:
        raise InputError(f"{where}: empty range {a}..{b}")
    if a < 0:
        raise InputError(f"{where}: indices must be non-negative")
    return a, b


def _int_field(obj: dict, name: str, default: Optional[int], minimum: Optional[int] = None) -> Optional[int]:
    if name not in obj:
        return default
    v = obj[name]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{name}: expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise InputError(f"{name}: must be >= {minimum}")
    return v


_KNOWN = {"mode", "f", "G", "G_list", "xi", "r", "branch", "t", "eps", "range", "certify_range",
          "y0_interval", "k_max", "precision_cap", "grace", "subspace"}


def load_config(text: str) -> ProblemConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"config: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return config_from_obj(obj)


def config_from_obj(obj: Any) -> ProblemConfig:
    if not isinstance(obj, dict):
        raise InputError("config: top level must be a JSON object")
    unknown = sorted(set(obj) - _KNOWN)
    if unknown:
        raise InputError(f"config: unknown field(s) {unknown}")
    cfg = ProblemConfig()
    mode = obj.get("mode", "single")
    if mode not in ("single", "multi"):
        raise InputError(f"mode: expected 'single' or 'multi', got {mode!r}")
    cfg.mode = mode
    if "f" in obj:
        cfg.f = BiPoly.from_json(obj["f"], "f")
    if "G" in obj:
        cfg.G = PowerSum.from_json(obj["G"], where="G")
    if "G_list" in obj:
        gl = obj["G_list"]
        if not isinstance(gl, list):
            raise InputError("G_list: expected a list of power sums")
        cfg.G_list = [PowerSum.from_json(g, where=f"G_list[{i}]") for i, g in enumerate(gl)]
    if "xi" in obj:
        cfg.xi = PowerSum.from_json(obj["xi"], where="xi")
    cfg.r = _int_field(obj, "r", 0, 0)
    cfg.branch = _int_field(obj, "branch", 0, 0)
    cfg.k_max = _int_field(obj, "k_max", 8, 0)
    cfg.precision_cap = _int_field(obj, "precision_cap", DEFAULT_MAX_BITS, 64)
    cfg.grace = _int_field(obj, "grace", None)
    if "t" in obj:
        cfg.t = rat_from_json(obj["t"], "t")
    if "eps" in obj:
        cfg.eps = rat_from_json(obj["eps"], "eps")
    if "range" in obj:
        cfg.index_range = parse_range(obj["range"], "range")
    if "certify_range" in obj:
        cfg.certify_range = parse_range(obj["certify_range"], "certify_range")
    if "y0_interval" in obj:
        iv = obj["y0_interval"]
        if not isinstance(iv, list) or len(iv) != 2:
            raise InputError("y0_interval: expected two rational endpoints")
        cfg.y0_interval = (rat_from_json(iv[0], "y0_interval[0]"), rat_from_json(iv[1], "y0_interval[1]"))
    if "subspace" in obj:
        sub = obj["subspace"]
        if not isinstance(sub, dict):
            raise InputError("subspace: expected {primes, samples}")
        primes = sub.get("primes", [])
        if not isinstance(primes, list) or not all(isinstance(p, int) and not isinstance(p, bool) for p in primes):
            raise InputError("subspace.primes: expected a list of integers")
        cfg.subspace_primes = primes
        samples = sub.get("samples", [])
        out = []
        for i, smp in enumerate(samples if isinstance(samples, list) else [None]):
            if not isinstance(smp, dict) or not all(k in smp for k in ("m", "p", "q")):
                raise InputError(f"subspace.samples[{i}]: expected {{m, p, q}}")
            out.append((_int_field(smp, "m", 0, 0), _int_field(smp, "p", 0), _int_field(smp, "q", 1, 1)))
        cfg.subspace_samples = out
    validate(cfg)
    return cfg


def validate(cfg: ProblemConfig) -> None:
    if not 0 < cfg.t < 1:
        raise InputError("t: must lie in (0, 1)")
    if cfg.eps <= 0:
        raise InputError("eps: must be positive")
