"""Parameter sweeps over the estimation pipeline and table emission.

A sweep evaluates the full chain (POVM -> yields -> estimation -> key
rate) over a grid, either against transmission loss at fixed side-channel
budgets, or against system frequency with the side-channel weight tied to
frequency through a lg-linear map. Output is a deterministic CSV or
JSON-lines table: identical configs produce byte-identical files, floats
are printed with 12 significant digits, and a summary block records the
per-curve positive-rate cutoff.
"""

import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .channel import ChannelParams, build_bsm_povm, reference_yields, transmission_rates
from .estimator import (
    DEFAULT_COND_CEILING,
    EstimationError,
    SideChannelParams,
    build_estimation_inputs,
    estimate,
)
from .pauli_core import SETTINGS, ModulationErrors, build_S_matrix, make_reference_state

__all__ = [
    "LossRange",
    "FrequencyRange",
    "SweepConfig",
    "KeyRatePoint",
    "load_config",
    "run_loss_sweep",
    "run_frequency_sweep",
    "emit_table",
    "curve_summaries",
]


@dataclass(frozen=True, slots=True)
class LossRange:
    start: float = 0.0
    stop: float = 12.0
    step: float = 0.1

    def __post_init__(self):
        if self.step <= 0.0 or self.stop < self.start:
            raise ValueError("need stop >= start and step > 0")

    def values(self):
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + k * self.step for k in range(n)]


@dataclass(frozen=True, slots=True)
class FrequencyRange:
    """Frequency grid plus the lg-linear side-channel map.

    loss_db has no default: a frequency sweep is only meaningful at a
    stated fixed loss. The map anchors pin lg(eps) at two frequencies and
    interpolate linearly in f.
    """

    start_ghz: float = 0.1
    stop_ghz: float = 4.0
    step_ghz: float = 0.05
    loss_db: float = None
    anchor_low: tuple = (0.1, -9.0)   # (f in GHz, lg eps)
    anchor_high: tuple = (4.0, -6.0)

    def __post_init__(self):
        if self.step_ghz <= 0.0 or self.stop_ghz < self.start_ghz:
            raise ValueError("need stop >= start and step > 0")
        if self.start_ghz <= 0.0:
            raise ValueError("frequencies must be positive")
        if self.anchor_low[0] >= self.anchor_high[0]:
            raise ValueError("map anchors must have increasing frequency")

    def values(self):
        n = int(math.floor((self.stop_ghz - self.start_ghz) / self.step_ghz + 1e-9)) + 1
        return [self.start_ghz + k * self.step_ghz for k in range(n)]

    def eps_at(self, f_ghz):
        (f1, lg1), (f2, lg2) = self.anchor_low, self.anchor_high
        lg = lg1 + (f_ghz - f1) * (lg2 - lg1) / (f2 - f1)
        eps = 10.0**lg
        if eps > 1.0:
            raise ValueError(f"side-channel map gives eps = {eps!r} > 1")
        return eps


@dataclass(frozen=True, slots=True)
class SweepConfig:
    channel: ChannelParams = ChannelParams()
    eps_values: tuple = (1e-6,)
    delta_values: tuple = (0.0,)
    loss_range: LossRange = LossRange()
    frequency_range: FrequencyRange = FrequencyRange()
    f_ec: float = 1.16
    include_sifting: bool = False
    cond_ceiling: float = DEFAULT_COND_CEILING
    out_path: str = "sweep.csv"
    out_format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if not self.eps_values or not self.delta_values:
            raise ValueError("eps and delta lists must be non-empty")
        for e in self.eps_values:
            if not 0.0 <= e <= 1.0:
                raise ValueError("eps values must lie in [0, 1]")
        for d in self.delta_values:
            if abs(d) >= math.pi / 2:
                raise ValueError("|delta| must be < pi/2")
        if self.out_format not in ("csv", "json-lines"):
            raise ValueError("format must be csv or json-lines")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True, slots=True)
class KeyRatePoint:
    """One row of a sweep table; error is None unless estimation failed."""

    coordinate: float
    eps: float
    delta: float
    key_rate: float
    e_zz: float
    e_xx: float
    omega_ref_upper: float
    omega_upper: float
    zeta_obs: float
    cond_s: float
    key_per_second: float = None
    error: str = None


def _config_sections(raw):
    known = {"channel", "estimation", "sweep", "output", "workers"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config sections: {sorted(unknown)}")


def load_config(path=None, overrides=None):
    """Build a SweepConfig from an optional YAML file plus CLI overrides.

    File layout: channel / estimation / sweep / output sections; every
    field optional except frequency.loss_db, which must be present before
    a frequency sweep runs.
    """
    raw = {}
    if path is not None:
        import yaml

        with open(path) as fh:
            raw = yaml.safe_load(fh) or {}
        if not isinstance(raw, dict):
            raise ValueError("config root must be a mapping")
    _config_sections(raw)
    ch = dict(raw.get("channel", {}))
    est = dict(raw.get("estimation", {}))
    sw = dict(raw.get("sweep", {}))
    out = dict(raw.get("output", {}))

    loss = dict(sw.get("loss", {}))
    freq = dict(sw.get("frequency", {}))
    anchors = {}
    if "anchor_low" in freq:
        anchors["anchor_low"] = tuple(freq.pop("anchor_low"))
    if "anchor_high" in freq:
        anchors["anchor_high"] = tuple(freq.pop("anchor_high"))

    config = SweepConfig(
        channel=ChannelParams(**ch),
        # float() also rescues bare scientific notation, which YAML 1.1
        # parses as a string ("1e-7" lacks the mandated dot)
        eps_values=tuple(float(e) for e in sw.get("eps", (1e-6,))),
        delta_values=tuple(float(d) for d in sw.get("delta", (0.0,))),
        loss_range=LossRange(**loss),
        frequency_range=FrequencyRange(**freq, **anchors),
        f_ec=est.get("f_ec", 1.16),
        include_sifting=est.get("include_sifting", False),
        cond_ceiling=est.get("cond_ceiling", DEFAULT_COND_CEILING),
        out_path=out.get("path", "sweep.csv"),
        out_format=out.get("format", "csv"),
        workers=raw.get("workers", 1),
    )
    if overrides:
        config = _apply_overrides(config, overrides)
    return config


def _apply_overrides(config, overrides):
    fields = {}
    if overrides.get("eps") is not None:
        fields["eps_values"] = tuple(overrides["eps"])
    if overrides.get("delta") is not None:
        fields["delta_values"] = tuple(overrides["delta"])
    if overrides.get("out") is not None:
        fields["out_path"] = overrides["out"]
    if overrides.get("format") is not None:
        fields["out_format"] = overrides["format"]
    loss_keys = {k: overrides[k] for k in ("start", "stop", "step")
                 if overrides.get(k) is not None}
    if loss_keys:
        fields["loss_range"] = replace(config.loss_range, **loss_keys)
    return replace(config, **fields) if fields else config


def _evaluate(channel, delta, eps_value, f_ec, include_sifting, cond_ceiling):
    deltas = ModulationErrors(delta, delta, delta)
    ref = [make_reference_state(s, deltas) for s in SETTINGS]
    povm = build_bsm_povm(channel)
    yields = reference_yields(build_S_matrix(ref, ref), transmission_rates(povm))
    eps = SideChannelParams.uniform(eps_value)
    inputs = build_estimation_inputs(ref, ref, yields, eps, cond_ceiling)
    sifting = channel.p_za * channel.p_zb if include_sifting else None
    result = estimate(inputs, f_ec=f_ec, sifting_prefactor=sifting)
    return result, inputs.cond_s


def _loss_point(args):
    config, loss, eps_value, delta = args
    channel = replace(config.channel, loss_db=loss)
    try:
        result, cond = _evaluate(channel, delta, eps_value, config.f_ec,
                                 config.include_sifting, config.cond_ceiling)
    except EstimationError as exc:
        nan = float("nan")
        return KeyRatePoint(loss, eps_value, delta, nan, nan, nan, nan, nan,
                            nan, nan, error=str(exc))
    return KeyRatePoint(
        loss, eps_value, delta, result.key_rate, result.e_zz, result.e_xx,
        result.omega_ref_upper, result.omega_upper, result.zeta_obs, cond,
    )


def _frequency_point(args):
    config, f_ghz, delta = args
    fr = config.frequency_range
    eps_value = fr.eps_at(f_ghz)
    channel = replace(config.channel, loss_db=fr.loss_db)
    try:
        result, cond = _evaluate(channel, delta, eps_value, config.f_ec,
                                 config.include_sifting, config.cond_ceiling)
    except EstimationError as exc:
        nan = float("nan")
        return KeyRatePoint(f_ghz, eps_value, delta, nan, nan, nan, nan, nan,
                            nan, nan, key_per_second=nan, error=str(exc))
    per_second = result.key_rate * f_ghz * 1e9
    return KeyRatePoint(
        f_ghz, eps_value, delta, result.key_rate, result.e_zz, result.e_xx,
        result.omega_ref_upper, result.omega_upper, result.zeta_obs, cond,
        key_per_second=per_second,
    )


def _map_points(func, tasks, workers):
    if workers <= 1:
        return [func(t) for t in tasks]
    # results come back in task order regardless of completion order
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=8))


def run_loss_sweep(config):
    """Key-rate rows over the loss grid for every (eps, delta) combination."""
    tasks = [
        (config, loss, eps_value, delta)
        for eps_value in config.eps_values
        for delta in config.delta_values
        for loss in config.loss_range.values()
    ]
    return _map_points(_loss_point, tasks, config.workers)


def run_frequency_sweep(config):
    """Per-second key-rate rows over the frequency grid at fixed loss."""
    if config.frequency_range.loss_db is None:
        raise ValueError("frequency sweep requires sweep.frequency.loss_db")
    tasks = [
        (config, f_ghz, delta)
        for delta in config.delta_values
        for f_ghz in config.frequency_range.values()
    ]
    return _map_points(_frequency_point, tasks, config.workers)


def curve_summaries(points):
    """Positive-rate cutoff per curve along the scan axis.

    Loss tables carry one curve per (eps, delta) combination; frequency
    tables tie eps to the coordinate, so a curve is one delta. The cutoff
    is the largest coordinate with key_rate > 0. A curve that returns to
    positive rate after a zero would make that notion ill-defined; such
    revival is flagged (and is loudly surprising).
    """
    frequency_axis = any(p.key_per_second is not None for p in points)
    curves = {}
    for pt in points:
        key = (pt.delta,) if frequency_axis else (pt.eps, pt.delta)
        curves.setdefault(key, []).append(pt)
    summaries = []
    for key, pts in sorted(curves.items()):
        pts = sorted(pts, key=lambda p: p.coordinate)
        positives = [p.coordinate for p in pts
                     if p.error is None and p.key_rate > 0.0]
        cutoff = positives[-1] if positives else None
        revival = False
        seen_positive = seen_gap = False
        for p in pts:
            pos = p.error is None and p.key_rate > 0.0
            if pos and seen_gap:
                revival = True
            seen_gap = seen_gap or (seen_positive and not pos)
            seen_positive = seen_positive or pos
        summary = dict(zip(("delta",) if frequency_axis else ("eps", "delta"), key))
        if revival:
            label = ", ".join(f"{k}={v}" for k, v in summary.items())
            warnings.warn(
                f"rate revival on curve {label}; cutoff is not trustworthy"
            )
        summary.update(cutoff=cutoff, revival=revival)
        summaries.append(summary)
    return summaries


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, str):
        if any(ch in value for ch in ',"\n'):
            return '"' + value.replace('"', '""') + '"'
        return value
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{value:.12g}"


def _fmt_json(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return f"{value:.12g}"


def _validate_point(p):
    # emission is the last line of defense: a row that slipped past the
    # estimator with impossible diagnostics must not reach a table
    if p.error is not None:
        return
    checks = (
        p.key_rate >= 0.0,
        0.0 <= p.e_zz <= 1.0,
        0.0 <= p.e_xx <= 1.0,
        p.omega_ref_upper >= 0.0,
        0.0 <= p.omega_upper <= 1.0,
        p.zeta_obs > 0.0,
        p.cond_s >= 1.0,
    )
    if not all(checks):
        raise ValueError(f"invalid diagnostics in row at coordinate {p.coordinate!r}")


def _columns(points):
    cols = ["coordinate", "eps", "delta", "key_rate"]
    if any(p.key_per_second is not None for p in points):
        cols.append("key_per_second")
    cols += ["e_zz", "e_xx", "omega_ref_upper", "omega_upper", "zeta_obs",
             "cond_s", "error"]
    return cols


def emit_table(points, path, out_format, coordinate_name="loss_db", summary=None):
    """Write rows (and an optional summary block) deterministically.

    CSV: one header line, one line per point, then '# summary ...' comment
    lines. JSON-lines: one object per point, then one summary object.
    """
    if not points:
        raise ValueError("no points to emit")
    for p in points:
        _validate_point(p)
    cols = _columns(points)
    names = [coordinate_name if c == "coordinate" else c for c in cols]
    lines = []
    if out_format == "csv":
        lines.append(",".join(names))
        for p in points:
            lines.append(",".join(_fmt(getattr(p, c)) for c in cols))
        if summary is not None:
            for s in summary:
                payload = ", ".join(f'"{k}": {_fmt_json(v)}' for k, v in s.items())
                lines.append("# summary {" + payload + "}")
    elif out_format == "json-lines":
        for p in points:
            body = ", ".join(
                f'"{n}": {_fmt_json(getattr(p, c))}' for n, c in zip(names, cols)
            )
            lines.append("{" + body + "}")
        if summary is not None:
            for s in summary:
                payload = ", ".join(f'"{k}": {_fmt_json(v)}' for k, v in s.items())
                lines.append('{"summary": {' + payload + "}}")
    else:
        raise ValueError(f"unknown format {out_format!r}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
