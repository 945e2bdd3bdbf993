"""Experiment configuration: defaults, flat key=value files, flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from paydev.errors import SchemaError


@dataclass(frozen=True)
class Config:
    seed: int = 1
    min_commits: int = 100
    feature_mode: str = "all"  # all | no_volume
    folds: int = 10
    repeats: int = 10
    coverage: float = 0.5
    email_domains: tuple[str, ...] = ("mozilla.com",)
    products: tuple[str, ...] = ()
    logit_l2: float = 1e-8
    logit_max_iter: int = 100
    logit_tol: float = 1e-8
    tree_minsplit: int = 20
    tree_cp: float = 0.01
    tree_maxdepth: int = 30
    forest_trees: int = 500
    forest_mtry: int = 0  # 0 means floor(sqrt(p))
    jobs: int = 1

    def echo(self) -> str:
        parts = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(value)
            parts.append(f"{f.name}={value}")
        return " ".join(parts)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = list(value) if isinstance(value, tuple) else value
        return out


_TUPLE_FIELDS = {"email_domains", "products"}
_POSITIVE_FIELDS = {
    "seed",
    "min_commits",
    "folds",
    "repeats",
    "coverage",
    "logit_l2",
    "logit_max_iter",
    "logit_tol",
    "tree_minsplit",
    "tree_maxdepth",
    "forest_trees",
    "jobs",
}


def _coerce(name: str, raw: str, line=None):
    kind = Config.__dataclass_fields__[name].type
    try:
        if name in _TUPLE_FIELDS:
            return tuple(v.strip() for v in raw.split(",") if v.strip())
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise SchemaError(f"bad value for {name}: {raw!r}", line=line) from None


def validate(cfg: Config) -> Config:
    for name in _POSITIVE_FIELDS:
        if getattr(cfg, name) <= 0:
            raise SchemaError(f"config field {name} must be positive")
    if cfg.feature_mode not in ("all", "no_volume"):
        raise SchemaError(f"feature_mode must be all or no_volume, got {cfg.feature_mode!r}")
    if cfg.tree_cp < 0 or cfg.forest_mtry < 0:
        raise SchemaError("tree_cp and forest_mtry must be >= 0")
    if not 0 < cfg.coverage <= 1:
        raise SchemaError("coverage must be in (0, 1]")
    return cfg


def load_config(fileobj, base: Config | None = None) -> Config:
    """Apply `key=value` lines (# comments allowed) on top of base."""
    cfg = base or Config()
    known = {f.name for f in fields(Config)}
    for lineno, line in enumerate(fileobj, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, raw = text.partition("=")
        key = key.strip()
        if not sep:
            raise SchemaError("expected key=value", line=lineno)
        if key not in known:
            raise SchemaError(f"unknown config key {key!r}", line=lineno)
        cfg = replace(cfg, **{key: _coerce(key, raw.strip(), line=lineno)})
    return cfg


def apply_overrides(cfg: Config, **overrides) -> Config:
    """Non-None keyword overrides win over the config file."""
    updates = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in _TUPLE_FIELDS and isinstance(value, str):
            value = tuple(v.strip() for v in value.split(",") if v.strip())
        updates[key] = value
    return replace(cfg, **updates) if updates else cfg
