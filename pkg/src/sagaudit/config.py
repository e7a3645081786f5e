"""Run configuration: payoff tables, arrival statistics, solver knobs.

Ships with a seven-type default fixture; a YAML file with the same keys can
override any of it.  Validation is eager, so a bad config dies before any
simulation work starts.
"""

from dataclasses import dataclass, replace

import numpy as np
import yaml

from .datagen import ArrivalSpec, InvalidSpec, default_hourly_shape
from .records import InvalidPayoffs, PayoffStructure


class ConfigError(ValueError):
    pass


# (u_dc, u_du, u_ac, u_au, daily_mean, daily_std) for the default alert types
_DEFAULT_TYPES = [
    (100.0, -400.0, -2000.0, 400.0, 196.57, 17.30),
    (150.0, -500.0, -2250.0, 400.0, 29.02, 5.56),
    (150.0, -600.0, -2500.0, 450.0, 140.46, 23.23),
    (300.0, -800.0, -2500.0, 600.0, 10.84, 3.73),
    (400.0, -1000.0, -3000.0, 650.0, 25.43, 4.51),
    (600.0, -1500.0, -5000.0, 700.0, 15.14, 4.10),
    (700.0, -2000.0, -6000.0, 800.0, 43.27, 6.45),
]
DEFAULT_QUIT_PROB = 0.186
DEFAULT_QUIT_LOSS = -1.0
DEFAULT_AUDIT_COST = 1.0


@dataclass(frozen=True)
class RunConfig:
    payoffs: PayoffStructure
    arrival: ArrivalSpec
    budget: float = 50.0
    alpha: float = 0.01
    rollback_threshold: float = 1.0
    bucket_width: int = 3600
    grid_step: float = 0.01
    seed: int = 20170101
    interpolation: str = "constant"
    history_cycles: int = 41
    test_cycles: int = 15

    def __post_init__(self):
        if self.budget < 0:
            raise ConfigError("budget must be nonnegative")
        if not 0 <= self.alpha < 1:
            raise ConfigError("alpha must lie in [0, 1)")
        if self.bucket_width <= 0 or 86400 % self.bucket_width != 0:
            raise ConfigError("bucket_width must divide 86400")
        if self.interpolation not in ("constant", "linear"):
            raise ConfigError(f"unknown interpolation {self.interpolation!r}")
        if self.payoffs.n_types != self.arrival.n_types:
            raise ConfigError("payoff table and arrival spec disagree on "
                              "the number of types")


def default_config() -> RunConfig:
    cols = list(zip(*_DEFAULT_TYPES))
    n = len(_DEFAULT_TYPES)
    payoffs = PayoffStructure(
        u_dc=cols[0], u_du=cols[1], u_ac=cols[2], u_au=cols[3],
        audit_cost=[DEFAULT_AUDIT_COST] * n,
        quit_prob=[DEFAULT_QUIT_PROB] * n,
        quit_loss=[DEFAULT_QUIT_LOSS] * n)
    arrival = ArrivalSpec(daily_mean=cols[4], daily_std=cols[5])
    return RunConfig(payoffs=payoffs, arrival=arrival)


def load_config(path=None) -> RunConfig:
    """Load YAML config, falling back to the built-in fixture per key."""
    if path is None:
        return default_config()
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"bad YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")

    base = default_config()
    try:
        payoffs, arrival = base.payoffs, base.arrival
        if "types" in raw:
            payoffs, arrival = _parse_types(raw["types"], raw)
        kwargs = {}
        for key in ("budget", "alpha", "rollback_threshold", "grid_step"):
            if key in raw:
                kwargs[key] = float(raw[key])
        for key in ("bucket_width", "seed", "history_cycles", "test_cycles"):
            if key in raw:
                kwargs[key] = int(raw[key])
        if "interpolation" in raw:
            kwargs["interpolation"] = str(raw["interpolation"])
        return RunConfig(payoffs=payoffs, arrival=arrival, **kwargs)
    except (InvalidPayoffs, InvalidSpec, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _parse_types(entries, raw):
    if not isinstance(entries, list) or not entries:
        raise ConfigError("'types' must be a non-empty list")
    def col(key, default=None):
        out = []
        for e in entries:
            if key in e:
                out.append(float(e[key]))
            elif default is not None:
                out.append(default)
            else:
                raise ConfigError(f"type entry missing '{key}'")
        return out
    payoffs = PayoffStructure(
        u_dc=col("u_dc"), u_du=col("u_du"), u_ac=col("u_ac"), u_au=col("u_au"),
        audit_cost=col("audit_cost", DEFAULT_AUDIT_COST),
        quit_prob=col("quit_prob", DEFAULT_QUIT_PROB),
        quit_loss=col("quit_loss", DEFAULT_QUIT_LOSS))
    shape = raw.get("hourly_shape")
    arrival = ArrivalSpec(
        daily_mean=col("daily_mean", 0.0), daily_std=col("daily_std", 0.0),
        hourly_shape=np.asarray(shape, dtype=float) if shape is not None
        else default_hourly_shape())
    return payoffs, arrival


def with_overrides(cfg: RunConfig, budget=None, alpha=None, quit_loss=None,
                   quit_prob_scale=None, seed=None) -> RunConfig:
    """Apply CLI-level overrides, rebuilding the payoff table if needed."""
    payoffs = cfg.payoffs
    if quit_loss is not None or quit_prob_scale is not None:
        ql = payoffs.quit_loss if quit_loss is None \
            else np.full(payoffs.n_types, float(quit_loss))
        qp = payoffs.quit_prob if quit_prob_scale is None \
            else payoffs.quit_prob * float(quit_prob_scale)
        try:
            payoffs = PayoffStructure(
                u_dc=payoffs.u_dc, u_du=payoffs.u_du, u_ac=payoffs.u_ac,
                u_au=payoffs.u_au, audit_cost=payoffs.audit_cost,
                quit_prob=qp, quit_loss=ql)
        except InvalidPayoffs as exc:
            raise ConfigError(str(exc)) from exc
    kwargs = {"payoffs": payoffs}
    if budget is not None:
        kwargs["budget"] = float(budget)
    if alpha is not None:
        kwargs["alpha"] = float(alpha)
    if seed is not None:
        kwargs["seed"] = int(seed)
    return replace(cfg, **kwargs)
