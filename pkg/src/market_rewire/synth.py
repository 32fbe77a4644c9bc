"""Seeded synthetic multi-asset panels with controllable co-movement shocks.

Outside a shock every asset follows an independent Gaussian random walk in
log-price, with a small asset-specific drift (alternating sign, magnitudes
spread across `drift_min..drift_max`). The drifts give each asset a
persistent trend, so its standardized window shape is stable from one day
to the next: day-over-day distance changes then reflect genuine regime
change rather than re-standardization churn.

During a shock each affected asset's daily log-return mixes a common factor
(scaled up to crisis-size moves, and signed by the asset's risk-on
direction so bonds move against stocks before direction correction) with
its own baseline dynamics:

    r = loading * (factor_vol_scale * base_vol * g_t) * direction
        + (1 - loading) * (drift_i + base_vol * e_it)

Generation is deterministic for a fixed seed: the pseudorandom source is
NumPy's PCG64 via `numpy.random.default_rng`, and all noise is drawn up
front in a fixed order, so two specs that differ only in their shock list
share the identical underlying noise (loading 0 reproduces the no-shock
panel exactly).
"""

import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .ingest import ASSET_CLASSES, AssetMeta, PricePanel

DIRECTION_DEFAULTS = {"stock": 1, "bond": -1, "fx": -1, "other": 1}

_CLASS_PREFIX = {"stock": "stk", "bond": "bnd", "fx": "fx", "other": "oth"}

_START_DATE = date(2007, 1, 1)  # a Monday


@dataclass(frozen=True)
class Shock:
    """A co-movement episode on days [start_day, end_day], both inclusive.

    `affected_assets` holds column indices, or None for all assets.
    `factor_loading` in [0, 1] blends the common factor against idiosyncratic
    noise; `factor_vol_scale` inflates the factor's daily volatility relative
    to the base volatility (event days are outsized moves).
    """

    start_day: int
    end_day: int
    factor_loading: float
    affected_assets: tuple[int, ...] | None = None
    factor_vol_scale: float = 4.0


@dataclass
class SynthSpec:
    """Specification for one synthetic panel.

    `class_assignment` lists one asset class per column; None cycles through
    stock, bond, fx. Directions default to +1 for stocks and -1 for bonds
    and fx.
    """

    n_assets: int
    n_days: int
    seed: int
    shocks: list[Shock] = field(default_factory=list)
    class_assignment: tuple[str, ...] | None = None
    base_vol: float = 0.004
    drift_min: float = 0.003
    drift_max: float = 0.006
    start_price: float = 100.0


def _validate_spec(spec: SynthSpec) -> tuple[str, ...]:
    if spec.n_assets < 2:
        raise ValueError(f"need at least 2 assets, got {spec.n_assets}")
    if spec.n_days < 2:
        raise ValueError(f"need at least 2 days, got {spec.n_days}")
    if not spec.base_vol > 0:
        raise ValueError("base_vol must be > 0")
    if not 0 <= spec.drift_min <= spec.drift_max:
        raise ValueError("need 0 <= drift_min <= drift_max")
    if not spec.start_price > 0:
        raise ValueError("start_price must be > 0")
    if spec.class_assignment is None:
        cycle = ("stock", "bond", "fx")
        classes = tuple(cycle[i % 3] for i in range(spec.n_assets))
    else:
        classes = tuple(spec.class_assignment)
        if len(classes) != spec.n_assets:
            raise ValueError(
                f"class_assignment has {len(classes)} entries for {spec.n_assets} assets"
            )
        for c in classes:
            if c not in ASSET_CLASSES:
                raise ValueError(f"unknown asset class {c!r}")

    claimed = np.zeros((spec.n_days, spec.n_assets), dtype=bool)
    for s in spec.shocks:
        if not 0 <= s.start_day <= s.end_day < spec.n_days:
            raise ValueError(
                f"shock interval [{s.start_day}, {s.end_day}] outside [0, {spec.n_days})"
            )
        if not 0.0 <= s.factor_loading <= 1.0:
            raise ValueError(f"factor_loading must be in [0, 1], got {s.factor_loading}")
        if not s.factor_vol_scale > 0:
            raise ValueError("factor_vol_scale must be > 0")
        cols = range(spec.n_assets) if s.affected_assets is None else s.affected_assets
        for c in cols:
            if not 0 <= c < spec.n_assets:
                raise ValueError(f"affected asset index {c} out of range")
            if claimed[s.start_day : s.end_day + 1, c].any():
                raise ValueError("overlapping shocks on the same asset are not supported")
            claimed[s.start_day : s.end_day + 1, c] = True
    return classes


def _asset_metas(classes: tuple[str, ...]) -> list[AssetMeta]:
    width = max(2, len(str(len(classes) - 1)))
    metas = []
    for i, cls in enumerate(classes):
        metas.append(
            AssetMeta(
                asset_id=f"{_CLASS_PREFIX[cls]}{i:0{width}d}",
                name=f"Synthetic {cls} {i}",
                asset_class=cls,
                direction=DIRECTION_DEFAULTS[cls],
            )
        )
    return metas


def _weekdays(n: int) -> list[date]:
    out = []
    d = _START_DATE
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += timedelta(days=1)
    return out


def _drifts(spec: SynthSpec) -> np.ndarray:
    """Per-asset daily log-drift: magnitudes spread over [drift_min, drift_max],
    signs alternating by column."""
    mags = np.linspace(spec.drift_min, spec.drift_max, spec.n_assets)
    signs = np.where(np.arange(spec.n_assets) % 2 == 0, 1.0, -1.0)
    return signs * mags


def generate(spec: SynthSpec) -> PricePanel:
    """Generate a synthetic price panel per `spec`; deterministic for a fixed seed."""
    classes = _validate_spec(spec)
    metas = _asset_metas(classes)
    directions = np.array([m.direction for m in metas], dtype=float)

    rng = np.random.default_rng(spec.seed)
    # fixed draw order: idiosyncratic noise first, then the common factor
    idio = rng.standard_normal((spec.n_days, spec.n_assets))
    factor = rng.standard_normal(spec.n_days)

    drifts = _drifts(spec)
    returns = drifts[None, :] + spec.base_vol * idio
    for s in spec.shocks:
        cols = (
            np.arange(spec.n_assets)
            if s.affected_assets is None
            else np.asarray(s.affected_assets, dtype=int)
        )
        days = np.arange(max(s.start_day, 1), s.end_day + 1)
        if days.size == 0:
            continue
        common = s.factor_vol_scale * spec.base_vol * factor[days]
        shared = s.factor_loading * common[:, None] * directions[cols][None, :]
        own = (1.0 - s.factor_loading) * (
            drifts[cols][None, :] + spec.base_vol * idio[np.ix_(days, cols)]
        )
        returns[np.ix_(days, cols)] = shared + own

    returns[0, :] = 0.0
    log_prices = np.log(spec.start_price) + np.cumsum(returns, axis=0)
    values = np.exp(log_prices)
    return PricePanel(dates=_weekdays(spec.n_days), assets=metas, values=values)


def write_panel(panel: PricePanel, out_dir, csv_name="prices.csv", meta_name="assets.json"):
    """Write a panel as the price CSV + metadata JSON pair that `load_panel` reads.

    Values are formatted with shortest round-trip precision and a fixed
    newline convention, so identical panels always produce identical bytes.
    Returns (csv_path, meta_path).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / csv_name
    meta_path = out_dir / meta_name

    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("date," + ",".join(panel.asset_ids) + "\n")
        for r, d in enumerate(panel.dates):
            cells = [
                "" if np.isnan(v) else repr(float(v)) for v in panel.values[r, :]
            ]
            fh.write(d.isoformat() + "," + ",".join(cells) + "\n")

    records = [
        {
            "asset_id": m.asset_id,
            "name": m.name,
            "asset_class": m.asset_class,
            "direction": m.direction,
        }
        for m in panel.assets
    ]
    with open(meta_path, "w", encoding="utf-8", newline="") as fh:
        json.dump(records, fh, indent=2)
        fh.write("\n")
    return csv_path, meta_path
