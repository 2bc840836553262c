"""Run specifications and the key-value configuration file format.

A configuration file holds one ``key = value`` pair per line; ``#`` starts a
comment.  Keys are the long CLI flag names without the leading dashes, e.g.::

    spot = 100
    sigma = 0.2
    eps-nu = 0.1
    rho = -0.5
    strike = 100
    barrier = 120
    maturity = 1
    method = ae0,ae1

``nu`` and ``lambda`` may be given instead of ``eps-nu`` and ``eps-lambda``;
the writer uses them so that a written file parses back to the same spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .montecarlo import McConfig
from .params import BarrierOption, ConfigError, DomainError, ModelParams, QuadConfig

METHODS = ("ae0", "ae1", "mc")
OUTPUTS = ("text-table", "csv", "json-lines")

_FLOAT_KEYS = ("spot", "sigma", "rate", "div", "eps", "eps-nu", "eps-lambda", "nu",
               "lambda", "theta", "rho", "strike", "barrier", "maturity", "quad-width",
               "quad-floor")
_INT_KEYS = ("paths", "steps", "seed", "quad-time", "quad-space", "workers")
_STR_KEYS = ("method", "output", "scheme", "quad-map", "bridge")
KNOWN_KEYS = frozenset(_FLOAT_KEYS + _INT_KEYS + _STR_KEYS)

DEFAULTS = {
    "spot": 100.0, "sigma": 0.2, "rate": 0.0, "div": 0.0, "eps": 0.1,
    "eps-nu": 0.0, "eps-lambda": 0.0, "theta": 0.0, "rho": 0.0,
    "maturity": 1.0, "method": "ae0,ae1", "output": "text-table",
}


@dataclass(frozen=True)
class RunSpec:
    model: ModelParams
    option: BarrierOption
    methods: tuple = ("ae0", "ae1")
    quad: QuadConfig = field(default_factory=QuadConfig)
    mc: McConfig = field(default_factory=McConfig)
    output: str = "text-table"
    workers: int = 1

    def __post_init__(self):
        if not self.methods:
            raise ConfigError("methods: at least one method is required")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"method: unknown {bad}, expected a subset of {METHODS}")
        if self.output not in OUTPUTS:
            raise ConfigError(f"output: {self.output!r} not in {OUTPUTS}")
        if not self.option.K < self.option.H:
            raise ConfigError(
                f"option: invariant K < H violated (strike={self.option.K}, "
                f"barrier={self.option.H})")
        if not self.model.S < self.option.H:
            raise ConfigError(
                f"option: invariant S < H violated (spot={self.model.S}, "
                f"barrier={self.option.H})")
        if self.workers < 1:
            raise ConfigError("workers: must be >= 1")


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into a dict of raw strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def read_config(path) -> dict:
    try:
        with open(path) as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc


def _coerce(key, value):
    if value is None or not isinstance(value, str):
        return value
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r}") from None
    if key == "bridge":
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"bridge: expected a boolean, got {value!r}")
    return value


def spec_from_mapping(values: dict) -> RunSpec:
    """Build a :class:`RunSpec`; errors name the offending key."""
    v = dict(DEFAULTS)
    v.update({k: x for k, x in values.items() if x is not None})
    v = {k: _coerce(k, x) for k, x in v.items()}
    for key in ("strike", "barrier"):
        if key not in v:
            raise ConfigError(f"{key}: required")
    eps = v["eps"]
    try:
        split = ModelParams.from_products(v["spot"], v["sigma"], v["rate"], v["div"],
                                          v["eps-nu"], v["eps-lambda"], v["theta"],
                                          v["rho"], eps=eps)
        model = replace(split, nu=v.get("nu", split.nu), lam=v.get("lambda", split.lam))
    except DomainError as exc:
        raise ConfigError(f"model: {exc}") from None
    try:
        option = BarrierOption(v["strike"], v["barrier"], v["maturity"])
    except DomainError as exc:
        raise ConfigError(f"option: {exc}") from None

    qd, md = QuadConfig(), McConfig()
    try:
        quad = QuadConfig(v.get("quad-time", qd.n_time), v.get("quad-space", qd.n_space),
                          v.get("quad-width", qd.space_width), v.get("quad-floor", qd.s_floor),
                          v.get("quad-map", qd.endpoint_map))
    except ConfigError as exc:
        raise ConfigError(f"quad: {exc}") from None
    try:
        mc = McConfig(v.get("paths", md.n_paths), v.get("steps", md.n_steps),
                      v.get("seed", md.seed), v.get("scheme", md.scheme),
                      v.get("bridge", md.bridge_correction))
    except ConfigError as exc:
        raise ConfigError(f"mc: {exc}") from None
    methods = tuple(m.strip() for m in str(v["method"]).split(",") if m.strip())
    return RunSpec(model, option, methods, quad, mc, v["output"], v.get("workers", 1))


def spec_to_config_text(spec: RunSpec) -> str:
    m, o, qd, mc = spec.model, spec.option, spec.quad, spec.mc
    pairs = [
        ("spot", m.S), ("sigma", m.sigma), ("rate", m.c), ("div", m.q), ("eps", m.eps),
        ("nu", m.nu), ("lambda", m.lam), ("theta", m.theta), ("rho", m.rho),
        ("strike", o.K), ("barrier", o.H), ("maturity", o.T),
        ("method", ",".join(spec.methods)), ("output", spec.output),
        ("quad-time", qd.n_time), ("quad-space", qd.n_space),
        ("quad-width", qd.space_width), ("quad-floor", qd.s_floor), ("quad-map", qd.endpoint_map),
        ("paths", mc.n_paths), ("steps", mc.n_steps), ("seed", mc.seed),
        ("scheme", mc.scheme), ("bridge", "true" if mc.bridge_correction else "false"),
        ("workers", spec.workers),
    ]
    return "".join(f"{k} = {_fmt(x)}\n" for k, x in pairs)


def _fmt(x):
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else str(x)
    return str(x)

