"""Flat `key = value` configuration files and the typed sweep/demo configs."""
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError
from .model import h_law

FRAMES = ("meyer", "shearlet")
ALGORITHMS = ("one_step", "iterative", "l1")
H_LAWS = ("2^-2j", "2^-j", "const")


def parse_config_text(text):
    """Parse `key = value` lines (# comments, blank lines ignored) into a dict of strings."""
    out = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=no)
        key, val = (s.strip() for s in line.split("=", 1))
        if not key or any(c.isspace() for c in key):
            raise ConfigError("malformed key", key=key or None, line=no)
        if key in out:
            raise ConfigError("duplicate key", key=key, line=no)
        out[key] = (val, no)
    return out


def read_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ConfigError(f"not UTF-8 text: {e}") from None
    return parse_config_text(text)


def _int_list(s):
    s = s.strip()
    if ".." in s:
        a, b = s.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in s.replace(",", " ").split()]


def _str_list(s):
    return [v for v in s.replace(",", " ").split() if v]


def _bool(s):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


@dataclass
class L1Options:
    max_iter: int = 300
    tol: float = 1e-6
    step: float = 1e-3          # primal step as a fraction of max |known data|


@dataclass
class IterativeOptions:
    n_iter: int = 50
    decay: str = "exponential"
    beta_start: float = 1.0     # fraction of the largest coefficient of the known data
    beta_end: float = 1e-3


@dataclass
class SweepConfig:
    frames: list = field(default_factory=lambda: list(FRAMES))
    algorithms: list = field(default_factory=lambda: ["one_step", "l1"])
    j: list = field(default_factory=lambda: [3, 4, 5])
    h_law: str = "2^-2j"
    h_c: float = 0.25
    eps: float = 0.125
    rho: float = 0.35
    meyer_phase: str = "printed"
    timing: str = "cost"        # "cost": deterministic work units in the CSV; "wall": seconds
    noise: float = 0.0
    seed: int = 0
    out: str = "results"
    l1: L1Options = field(default_factory=L1Options)
    iterative: IterativeOptions = field(default_factory=IterativeOptions)

    def h(self, j):
        return h_law(self.h_law, self.h_c, j)


_SWEEP_KEYS = {
    "sweep.frames": ("frames", _str_list),
    "sweep.algorithms": ("algorithms", _str_list),
    "sweep.j": ("j", _int_list),
    "sweep.h_law": ("h_law", str),
    "sweep.h_c": ("h_c", float),
    "sweep.eps": ("eps", float),
    "sweep.rho": ("rho", float),
    "sweep.meyer_phase": ("meyer_phase", str),
    "sweep.timing": ("timing", str),
    "sweep.noise": ("noise", float),
    "sweep.seed": ("seed", int),
    "sweep.out": ("out", str),
}


def _apply_sub(obj, prefix, raw, used):
    for f in fields(obj):
        key = f"{prefix}.{f.name}"
        if key in raw:
            val, no = raw[key]
            try:
                setattr(obj, f.name, type(getattr(obj, f.name))(val))
            except ValueError as e:
                raise ConfigError(str(e), key=key, line=no) from None
            used.add(key)


def sweep_config(raw, known_extra=()):
    """Build and validate a SweepConfig from parsed key/value pairs."""
    cfg = SweepConfig()
    used = set()
    for key, (attr, conv) in _SWEEP_KEYS.items():
        if key in raw:
            val, no = raw[key]
            try:
                setattr(cfg, attr, conv(val))
            except ValueError as e:
                raise ConfigError(str(e), key=key, line=no) from None
            used.add(key)
    _apply_sub(cfg.l1, "l1", raw, used)
    _apply_sub(cfg.iterative, "iterative", raw, used)
    unknown = [k for k in raw if k not in used and k not in known_extra
               and not k.startswith(("diag.", "demo.", "portrait."))]
    if unknown:
        k = sorted(unknown, key=lambda s: raw[s][1])[0]
        raise ConfigError("unknown key", key=k, line=raw[k][1])
    _validate(cfg, raw)
    return cfg


def _line(raw, key):
    return raw.get(key, (None, None))[1]


def _validate(cfg, raw):
    def bad(msg, key):
        raise ConfigError(msg, key=key, line=_line(raw, key))

    if not cfg.frames:
        bad("frame list is empty", "sweep.frames")
    for f in cfg.frames:
        if f not in FRAMES:
            bad(f"unknown frame {f!r}", "sweep.frames")
    if not cfg.algorithms:
        bad("algorithm list is empty", "sweep.algorithms")
    for a in cfg.algorithms:
        if a not in ALGORITHMS:
            bad(f"unknown algorithm {a!r}", "sweep.algorithms")
    if not cfg.j or min(cfg.j) < 1:
        bad("scale list must be non-empty with j >= 1", "sweep.j")
    if cfg.h_law not in H_LAWS:
        bad(f"unknown h-law {cfg.h_law!r}", "sweep.h_law")
    if not 0 < cfg.rho < 0.5:
        bad("rho must lie in (0, 1/2)", "sweep.rho")
    if cfg.eps <= 0 or ("shearlet" in cfg.frames and cfg.eps >= 0.25):
        bad("eps must be positive (and < 1/4 with shearlets)", "sweep.eps")
    if cfg.h_c < 0:
        bad("h_c must be non-negative", "sweep.h_c")
    for j in cfg.j:
        if cfg.h(j) >= cfg.rho:
            bad(f"h_j = {cfg.h(j):g} at j={j} is not below rho={cfg.rho}", "sweep.h_c")
    if cfg.timing not in ("cost", "wall"):
        bad("timing must be 'cost' or 'wall'", "sweep.timing")
    if cfg.meyer_phase not in ("printed", "zero"):
        bad("meyer_phase must be 'printed' or 'zero'", "sweep.meyer_phase")
    if cfg.noise < 0:
        bad("noise must be non-negative", "sweep.noise")
    if cfg.l1.max_iter < 1 or cfg.l1.tol <= 0 or cfg.l1.step <= 0:
        bad("l1 options must be positive", "l1.max_iter")
    if cfg.iterative.decay not in ("linear", "exponential"):
        bad("decay must be linear or exponential", "iterative.decay")
    if cfg.iterative.n_iter < 1:
        bad("n_iter must be >= 1", "iterative.n_iter")


def load_sweep_config(path=None, overrides=None):
    raw = read_config(path) if path else {}
    for k, v in (overrides or {}).items():
        raw[k] = (str(v), None)
    return sweep_config(raw)


DemoConfigKeys = {
    "demo.n_iter": "n_iter",
    "demo.decay": "decay",
    "demo.beta_start": "beta_start",
    "demo.beta_end": "beta_end",
    "demo.zoom": "zoom",
}
