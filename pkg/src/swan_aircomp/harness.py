"""Monte-Carlo experiment harness: specs, runner, aggregation, and outputs.

An ExperimentSpec fully determines every output byte: user drops are seeded
per drop from the master seed, optimizers are deterministic, and CSV/SVG
emission uses fixed number formats.  Wall-clock timings are therefore kept
out of the default CSV output and reported on stderr instead.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import svgplot
from .channel import RadioConfig, dbm_to_watts
from .geometry import Scene, ServiceRegion, build_layout, sample_users
from .metrics import mse_min  # noqa: F401  (re-exported for convenience)
from .optimizers import (
    RunRecord,
    evaluate_placement,
    midpoint_init,
    pass_baseline,
    random_init,
    sa1_ao,
    sa1_joint_exhaustive,
    sa2_ao,
    sa2_joint_exhaustive,
    ss_two_stage,
)
from .rng import derive_seed

KINDS = (
    "sweep-m-fixed-L",
    "sweep-m-fixed-span",
    "sweep-k",
    "convergence",
    "oracle-check",
)

SCHEMES = ("SS", "SA1", "SA2", "PASS")

# Seed-derivation tag separating restart streams from drop streams.
_RESTART_TAG = 7001


class ConfigError(ValueError):
    """Bad experiment configuration (unknown key, bad value, bad units)."""


@dataclass(frozen=True)
class ExperimentSpec:
    """A fully resolved experiment: what to sweep, over what scene, how often.

    Powers are stored in dBm and converted to watts only when building radio
    configs; kappa values are dB per meter.  ``delta_m`` of None resolves to
    half a carrier wavelength.
    """

    kind: str
    sweep: tuple = ()
    n_drops: int = 100
    master_seed: int = 1
    k_users: int = 10
    m_segments: int = 5
    seg_length: float = 1.0
    d_x: float = 100.0
    d_y: float = 20.0
    height: float = 3.0
    f_c_hz: float = 28e9
    n_eff: float = 1.4
    delta_m: Optional[float] = None
    p_dbm: float = 10.0
    noise_dbm: float = -90.0
    kappa_db_per_m: tuple = (0.0,)
    q_grid: int = 1000
    schemes: tuple = ("SS", "SA1", "SA2", "PASS")
    restarts: int = 0
    design_kappa: Optional[float] = None
    max_iters: int = 100
    tol: float = 1e-8
    theta_grid: int = 720

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}, expected one of {KINDS}")
        if len(self.sweep) == 0:
            raise ConfigError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
            raise ConfigError(f"sweep values must be strictly increasing, got {self.sweep}")
        if self.n_drops < 1:
            raise ConfigError(f"n_drops must be >= 1, got {self.n_drops}")
        if self.k_users < 1:
            raise ConfigError(f"k_users must be >= 1, got {self.k_users}")
        if self.m_segments < 1:
            raise ConfigError(f"m_segments must be >= 1, got {self.m_segments}")
        if self.q_grid < 2:
            raise ConfigError(f"q_grid must be >= 2, got {self.q_grid}")
        if self.restarts < 0:
            raise ConfigError(f"restarts must be >= 0, got {self.restarts}")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ConfigError(f"schemes must be a non-empty subset of {SCHEMES}, got {self.schemes}")
        if any(k < 0 for k in self.kappa_db_per_m) or not self.kappa_db_per_m:
            raise ConfigError(f"kappa list must be non-empty and non-negative, got {self.kappa_db_per_m}")
        if self.kind == "convergence" and any(s not in ("SA1", "SA2") for s in self.schemes):
            raise ConfigError("convergence experiments support only SA1 and SA2 schemes")
        if self.kind == "oracle-check":
            if self.m_segments != 2:
                raise ConfigError("oracle-check experiments require m_segments = 2")
            if any(s not in ("SA1", "SA2") for s in self.schemes):
                raise ConfigError("oracle-check experiments support only SA1 and SA2 schemes")

    @property
    def wavelength(self) -> float:
        from .channel import SPEED_OF_LIGHT

        return SPEED_OF_LIGHT / self.f_c_hz

    @property
    def delta_resolved(self) -> float:
        return self.wavelength / 2.0 if self.delta_m is None else self.delta_m

    @property
    def p_tx_w(self) -> float:
        return dbm_to_watts(self.p_dbm)

    @property
    def noise_var_w(self) -> float:
        return dbm_to_watts(self.noise_dbm)

    def radio_config(self, kappa: float) -> RadioConfig:
        return RadioConfig(
            f_c=self.f_c_hz,
            n_eff=self.n_eff,
            kappa=kappa,
            delta_min=self.delta_resolved,
            p_tx=self.p_tx_w,
            noise_var=self.noise_var_w,
        )


@dataclass(frozen=True)
class ResultRow:
    """One optimizer run (or, for convergence kinds, one trace point)."""

    experiment: str
    scheme: str
    kappa: float
    sweep_value: float
    drop: int
    final_mse: float
    iterations: int
    evaluations: int
    seed: int
    elapsed: float


@dataclass(frozen=True)
class AggregateRow:
    """Per-(scheme, kappa, sweep value) mean MSE and its standard error."""

    experiment: str
    scheme: str
    kappa: float
    sweep_value: float
    mean_mse: float
    stderr: float
    n_drops: int


_KIND_DEFAULTS: dict[str, dict] = {
    "sweep-m-fixed-L": {"sweep": tuple(range(1, 11))},
    "sweep-m-fixed-span": {"sweep": (1, 2, 5, 10, 20)},
    "sweep-k": {"sweep": (2, 4, 6, 8, 10, 12, 14, 16, 18, 20), "d_x": 50.0},
    "convergence": {"sweep": (0,), "d_x": 50.0, "schemes": ("SA1", "SA2")},
    "oracle-check": {
        "sweep": (0,),
        "m_segments": 2,
        "q_grid": 20,
        "k_users": 3,
        "n_drops": 20,
        "schemes": ("SA1", "SA2"),
        "seg_length": 1.0,
    },
}

_FIELD_NAMES = tuple(f.name for f in dataclasses.fields(ExperimentSpec))


def _parse_frequency(value) -> float:
    if isinstance(value, str):
        text = value.strip().lower()
        for suffix, mult in (("ghz", 1e9), ("mhz", 1e6), ("khz", 1e3), ("hz", 1.0)):
            if text.endswith(suffix):
                return float(text[: -len(suffix)].strip()) * mult
        return float(text)
    return float(value)


def _parse_dbm(value) -> float:
    if isinstance(value, str):
        text = value.strip().lower()
        if text.endswith("dbm"):
            return float(text[:-3].strip())
        return float(text)
    return float(value)


def _parse_number_list(value) -> tuple:
    if isinstance(value, str):
        parts = [p for p in value.replace(",", " ").split() if p]
        return tuple(float(p) for p in parts)
    if isinstance(value, (int, float)):
        return (float(value),)
    return tuple(float(v) for v in value)


def _parse_schemes(value) -> tuple:
    if isinstance(value, str):
        items = [p for p in value.replace(",", " ").split() if p]
    else:
        items = list(value)
    out = []
    for item in items:
        name = str(item).strip()
        if name.upper() in ("PASS-BASELINE", "PASS"):
            name = "PASS"
        else:
            name = name.upper()
        out.append(name)
    return tuple(out)


_VALUE_PARSERS = {
    "kind": str,
    "sweep": _parse_number_list,
    "n_drops": int,
    "master_seed": int,
    "k_users": int,
    "m_segments": int,
    "seg_length": float,
    "d_x": float,
    "d_y": float,
    "height": float,
    "f_c_hz": _parse_frequency,
    "n_eff": float,
    "delta_m": lambda v: None if v is None else float(v),
    "p_dbm": _parse_dbm,
    "noise_dbm": _parse_dbm,
    "kappa_db_per_m": _parse_number_list,
    "q_grid": int,
    "schemes": _parse_schemes,
    "restarts": int,
    "design_kappa": lambda v: None if v is None else float(v),
    "max_iters": int,
    "tol": float,
    "theta_grid": int,
}


def _parse_values(values: dict, origin: str) -> dict:
    out = {}
    for key, value in values.items():
        if key not in _FIELD_NAMES:
            raise ConfigError(f"unknown {origin} key: {key!r}")
        try:
            out[key] = _VALUE_PARSERS[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})") from exc
    return out


def parse_config(
    path: Optional[Union[str, Path]] = None,
    kind: Optional[str] = None,
    overrides: Optional[dict] = None,
) -> ExperimentSpec:
    """Build an ExperimentSpec from a flat JSON file and/or override values.

    Precedence, lowest to highest: built-in defaults, per-kind defaults, the
    JSON file, then ``overrides`` (the CLI flags).  Keys must match
    ExperimentSpec field names exactly; unknown keys are rejected.  Unit
    conveniences: f_c_hz accepts strings like "28 GHz"; p_dbm and noise_dbm
    accept "10 dBm"; kappa_db_per_m and sweep accept scalars, lists, or
    comma-separated strings.
    """
    file_values: dict = {}
    if path is not None:
        try:
            raw = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        try:
            loaded = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a flat JSON object")
        file_values = _parse_values(loaded, "config")
    override_values = _parse_values(overrides or {}, "override")

    resolved_kind = override_values.get("kind") or file_values.get("kind") or kind
    if resolved_kind is None:
        raise ConfigError("no experiment kind given")
    if resolved_kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {resolved_kind!r}, expected one of {KINDS}")

    values: dict = dict(_KIND_DEFAULTS.get(resolved_kind, {}))
    values.update(file_values)
    values.update(override_values)
    values["kind"] = resolved_kind
    return ExperimentSpec(**values)


def _sweep_scene_params(spec: ExperimentSpec, sweep_value: float) -> tuple[int, float, int]:
    """Resolve (m_segments, seg_length, k_users) for one sweep value."""
    if spec.kind == "sweep-m-fixed-L":
        m = int(sweep_value)
        return m, spec.seg_length, spec.k_users
    if spec.kind == "sweep-m-fixed-span":
        m = int(sweep_value)
        return m, spec.d_x / m, spec.k_users
    if spec.kind == "sweep-k":
        return spec.m_segments, spec.seg_length, int(sweep_value)
    return spec.m_segments, spec.seg_length, spec.k_users


def _run_scheme(
    scheme: str, cfg: RadioConfig, scene: Scene, spec: ExperimentSpec, drop: int
) -> RunRecord:
    drop_seed = derive_seed(spec.master_seed, drop)
    if scheme == "SS":
        return ss_two_stage(cfg, scene, spec.q_grid, seed=drop_seed)
    if scheme == "PASS":
        return pass_baseline(cfg, scene, spec.q_grid, seed=drop_seed)
    runner = sa1_ao if scheme == "SA1" else sa2_ao
    best = runner(
        cfg, scene, spec.q_grid, init=None,
        max_iters=spec.max_iters, tol=spec.tol, seed=drop_seed,
    )
    for r in range(spec.restarts):
        r_seed = derive_seed(spec.master_seed, drop, _RESTART_TAG + r)
        init = random_init(scene, scheme, r_seed, cfg.delta_min)
        rec = runner(
            cfg, scene, spec.q_grid, init=init,
            max_iters=spec.max_iters, tol=spec.tol, seed=r_seed,
        )
        if rec.final_mse < best.final_mse:
            best = rec
    return best


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """Run every (sweep value, drop, scheme, kappa) cell of the experiment.

    Rows come back in exactly that nesting order.  Per-drop user positions
    depend only on (master_seed, drop), so every sweep value, scheme, and
    kappa sees the same drops.  With ``design_kappa`` set, optimizers run
    with that attenuation and the reported MSE is re-evaluated under the
    scenario kappa.
    """
    if spec.kind == "convergence":
        return _run_convergence(spec)
    if spec.kind == "oracle-check":
        return _run_oracle_check(spec)

    rows: list[ResultRow] = []
    for sweep_value in spec.sweep:
        m, seg_len, k = _sweep_scene_params(spec, sweep_value)
        region = ServiceRegion(spec.d_x, spec.d_y)
        layout = build_layout(m, seg_len, region, spec.height)
        for drop in range(spec.n_drops):
            users = sample_users(region, k, derive_seed(spec.master_seed, drop))
            scene = Scene(region, layout, users)
            for scheme in spec.schemes:
                for kappa in spec.kappa_db_per_m:
                    cfg = spec.radio_config(kappa)
                    design_cfg = (
                        cfg if spec.design_kappa is None
                        else spec.radio_config(spec.design_kappa)
                    )
                    t0 = time.perf_counter()
                    rec = _run_scheme(scheme, design_cfg, scene, spec, drop)
                    elapsed = time.perf_counter() - t0
                    final = (
                        rec.final_mse if spec.design_kappa is None
                        else evaluate_placement(cfg, scene, rec.placement)
                    )
                    rows.append(
                        ResultRow(
                            experiment=spec.kind,
                            scheme=scheme,
                            kappa=kappa,
                            sweep_value=float(sweep_value),
                            drop=drop,
                            final_mse=final,
                            iterations=rec.iterations,
                            evaluations=rec.evaluations,
                            seed=rec.seed,
                            elapsed=elapsed,
                        )
                    )
    return rows


def _run_convergence(spec: ExperimentSpec) -> list[ResultRow]:
    """Per-iteration MSE traces; sweep_value carries the iteration index.

    Traces shorter than the longest one are padded with their final value
    (the optimizer would hold that MSE if swept further), keeping every
    iteration's aggregate over the same number of drops.
    """
    region = ServiceRegion(spec.d_x, spec.d_y)
    layout = build_layout(spec.m_segments, spec.seg_length, region, spec.height)
    runs: dict[tuple, tuple[RunRecord, float]] = {}
    for drop in range(spec.n_drops):
        users = sample_users(region, spec.k_users, derive_seed(spec.master_seed, drop))
        scene = Scene(region, layout, users)
        for scheme in spec.schemes:
            for kappa in spec.kappa_db_per_m:
                cfg = spec.radio_config(kappa)
                runner = sa1_ao if scheme == "SA1" else sa2_ao
                t0 = time.perf_counter()
                rec = runner(
                    cfg, scene, spec.q_grid,
                    max_iters=spec.max_iters, tol=spec.tol,
                    seed=derive_seed(spec.master_seed, drop),
                )
                runs[(drop, scheme, kappa)] = (rec, time.perf_counter() - t0)
    max_len = max(len(rec.mse_trace) for rec, _ in runs.values())
    rows: list[ResultRow] = []
    for it in range(max_len):
        for drop in range(spec.n_drops):
            for scheme in spec.schemes:
                for kappa in spec.kappa_db_per_m:
                    rec, elapsed = runs[(drop, scheme, kappa)]
                    trace = rec.mse_trace
                    value = trace[min(it, len(trace) - 1)]
                    rows.append(
                        ResultRow(
                            experiment=spec.kind,
                            scheme=scheme,
                            kappa=kappa,
                            sweep_value=float(it),
                            drop=drop,
                            final_mse=value,
                            iterations=rec.iterations,
                            evaluations=rec.evaluations,
                            seed=rec.seed,
                            elapsed=elapsed,
                        )
                    )
    return rows


def _run_oracle_check(spec: ExperimentSpec) -> list[ResultRow]:
    """Tiny-instance AO runs paired with joint brute-force oracle runs.

    Every AO row is followed by a row for the matching oracle (scheme name
    suffixed "-oracle") so relative gaps can be read off per drop.  The
    oracle candidate grids are extended by the AO midpoint inits, which AO
    may legitimately retain.
    """
    region = ServiceRegion(spec.d_x, spec.d_y)
    layout = build_layout(spec.m_segments, spec.seg_length, region, spec.height)
    rows: list[ResultRow] = []
    mids = layout.feed_x + layout.seg_length / 2.0
    extra = [[float(x)] for x in mids]
    for drop in range(spec.n_drops):
        drop_seed = derive_seed(spec.master_seed, drop)
        users = sample_users(region, spec.k_users, drop_seed)
        scene = Scene(region, layout, users)
        for scheme in spec.schemes:
            for kappa in spec.kappa_db_per_m:
                cfg = spec.radio_config(kappa)
                runner = sa1_ao if scheme == "SA1" else sa2_ao
                t0 = time.perf_counter()
                rec = runner(
                    cfg, scene, spec.q_grid,
                    max_iters=spec.max_iters, tol=spec.tol, seed=drop_seed,
                )
                elapsed = time.perf_counter() - t0
                t0 = time.perf_counter()
                if scheme == "SA1":
                    oracle = sa1_joint_exhaustive(
                        cfg, scene, spec.q_grid, extra_candidates=extra, seed=drop_seed
                    )
                else:
                    oracle = sa2_joint_exhaustive(
                        cfg, scene, spec.q_grid, theta_grid=spec.theta_grid,
                        extra_candidates=extra, seed=drop_seed,
                    )
                oracle_elapsed = time.perf_counter() - t0
                for tag, r, el in ((scheme, rec, elapsed), (scheme + "-oracle", oracle, oracle_elapsed)):
                    rows.append(
                        ResultRow(
                            experiment=spec.kind,
                            scheme=tag,
                            kappa=kappa,
                            sweep_value=0.0,
                            drop=drop,
                            final_mse=r.final_mse,
                            iterations=r.iterations,
                            evaluations=r.evaluations,
                            seed=r.seed,
                            elapsed=el,
                        )
                    )
    return rows


def aggregate(rows: Sequence[ResultRow]) -> list[AggregateRow]:
    """Mean and standard error of final_mse per (scheme, kappa, sweep value).

    Groups appear in first-appearance order; the standard error uses the
    sample standard deviation (ddof = 1) over drops, 0 for a single drop.
    """
    if not rows:
        raise ValueError("no rows to aggregate")
    groups: dict[tuple, list[float]] = {}
    experiments: dict[tuple, str] = {}
    for row in rows:
        key = (row.scheme, row.kappa, row.sweep_value)
        groups.setdefault(key, []).append(row.final_mse)
        experiments.setdefault(key, row.experiment)
    out = []
    for key, values in groups.items():
        scheme, kappa, sweep_value = key
        n = len(values)
        arr = np.asarray(values)
        mean = float(arr.mean())
        stderr = float(arr.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        out.append(
            AggregateRow(
                experiment=experiments[key],
                scheme=scheme,
                kappa=kappa,
                sweep_value=sweep_value,
                mean_mse=mean,
                stderr=stderr,
                n_drops=n,
            )
        )
    return out


def _csv_number(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


_RESULT_FIELDS = (
    "experiment", "scheme", "kappa", "sweep_value", "drop",
    "final_mse", "iterations", "evaluations", "seed",
)
_AGG_FIELDS = (
    "experiment", "scheme", "kappa", "sweep_value", "mean_mse", "stderr", "n_drops",
)


def emit_csv(
    rows: Sequence[Union[ResultRow, AggregateRow]],
    path: Union[str, Path],
    include_elapsed: bool = False,
) -> None:
    """Write result or aggregate rows as RFC-4180-style CSV with LF endings.

    Floats are printed with 17 significant digits so they round-trip exactly.
    The wall-clock ``elapsed`` column is only written on request because it
    would break byte-for-byte reproducibility of repeated runs.
    """
    import csv as _csv

    path = Path(path)
    if rows and isinstance(rows[0], AggregateRow):
        fields = _AGG_FIELDS
    else:
        fields = _RESULT_FIELDS + (("elapsed",) if include_elapsed else ())
    with open(path, "w", newline="") as f:
        writer = _csv.writer(f, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow(_csv_number(getattr(row, name)) for name in fields)


_X_LABELS = {
    "sweep-m-fixed-L": "number of segments M",
    "sweep-m-fixed-span": "number of segments M (span fixed)",
    "sweep-k": "number of users K",
    "convergence": "iteration",
    "oracle-check": "instance",
}


def emit_plot(
    aggregates: Sequence[AggregateRow],
    path: Union[str, Path],
    log_y: bool = False,
    x_label: Optional[str] = None,
    y_label: str = "mean MSE",
    title: Optional[str] = None,
) -> None:
    """Plot mean MSE per (scheme, kappa) series against the sweep axis.

    Raises on an empty aggregate list before touching the filesystem.
    """
    if not aggregates:
        raise ValueError("no aggregates to plot")
    kappas = sorted({a.kappa for a in aggregates})
    series_map: dict[tuple, tuple[list, list]] = {}
    for agg in aggregates:
        key = (agg.scheme, agg.kappa)
        xs, ys = series_map.setdefault(key, ([], []))
        xs.append(agg.sweep_value)
        ys.append(agg.mean_mse)
    series = []
    for (scheme, kappa), (xs, ys) in series_map.items():
        label = scheme if len(kappas) == 1 else f"{scheme} kappa={kappa:g}"
        series.append((label, xs, ys))
    if x_label is None:
        x_label = _X_LABELS.get(aggregates[0].experiment, "sweep value")
    text = svgplot.render_line_chart(
        series, x_label=x_label, y_label=y_label, title=title, log_y=log_y
    )
    Path(path).write_text(text)


def write_metadata(spec: ExperimentSpec, out_dir: Union[str, Path], files: Sequence[str]) -> Path:
    """Write the fully resolved run parameters and seeds as deterministic JSON."""
    from . import __version__

    meta = {
        "spec": {k: (list(v) if isinstance(v, tuple) else v)
                 for k, v in dataclasses.asdict(spec).items()},
        "derived": {
            "wavelength_m": spec.wavelength,
            "delta_min_m": spec.delta_resolved,
            "p_tx_w": spec.p_tx_w,
            "noise_var_w": spec.noise_var_w,
        },
        "drop_seeds": [derive_seed(spec.master_seed, d) for d in range(spec.n_drops)],
        "outputs": list(files),
        "version": __version__,
    }
    path = Path(out_dir) / "metadata.json"
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def execute(
    spec: ExperimentSpec,
    out_dir: Union[str, Path],
    quiet: bool = False,
    log_y: bool = False,
    include_elapsed: bool = False,
) -> dict[str, Path]:
    """Run the experiment and write results.csv, aggregates.csv, plot.svg."""
    t0 = time.perf_counter()
    rows = run_experiment(spec)
    aggs = aggregate(rows)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "results": out / "results.csv",
        "aggregates": out / "aggregates.csv",
        "plot": out / "plot.svg",
    }
    emit_csv(rows, paths["results"], include_elapsed=include_elapsed)
    emit_csv(aggs, paths["aggregates"])
    emit_plot(aggs, paths["plot"], log_y=log_y)
    paths["metadata"] = write_metadata(
        spec, out, [p.name for p in paths.values()]
    )
    elapsed = time.perf_counter() - t0
    if not quiet:
        for agg in aggs:
            print(
                f"{agg.scheme:12s} kappa={agg.kappa:<6g} sweep={agg.sweep_value:<8g} "
                f"mean_mse={agg.mean_mse:.6g} stderr={agg.stderr:.3g} n={agg.n_drops}"
            )
        print(f"wrote {', '.join(str(p) for p in paths.values())}", file=sys.stderr)
        print(f"total wall time: {elapsed:.2f} s", file=sys.stderr)
    return paths
