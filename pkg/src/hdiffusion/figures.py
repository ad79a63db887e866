"""Data behind the figures and tables: CSV rows plus a renderer-neutral plot spec."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diffusion import PRESETS, preset, shd
from .hfunc import DEFAULT_CONFIG, EvalConfig
from .link import LinkConfig, high_snr_expansion, link_noise, sep_upper_bound, ts_for_snr
from .noise import noise_model, noise_preset_table, shd_log_moment, survival_asymptote
from .params import ParamSeq, OrderSeq

__all__ = [
    "SCENARIOS",
    "FIGURES",
    "TABLES",
    "FigureData",
    "run_figure",
    "export_table",
    "write_figure",
    "read_table_csv",
]

SCENARIOS = ((2.0, 1.0), (2.0, 0.5), (1.8, 1.0))
DEFAULT_A = 1e-5
DEFAULT_K = 1e-10


@dataclass
class FigureData:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    plot: dict = field(default_factory=dict)

    def column(self, col: str, **where) -> np.ndarray:
        i = self.columns.index(col)
        idx = {self.columns.index(k): v for k, v in where.items()}
        return np.array([r[i] for r in self.rows if all(r[j] == v for j, v in idx.items())], dtype=float)


def _label(a1: float, a2: float) -> str:
    return f"({a1:g},{a2:g})"


def _fig_cdf(a: float, K: float, points: int, cfg: EvalConfig) -> FigureData:
    out = FigureData("fig2-cdf", ["scenario", "t", "cdf", "asymptote"])
    ts = np.logspace(-2, 4, points)
    for a1, a2 in SCENARIOS:
        nm = noise_model(shd(a1, a2, K), a, cfg)
        tail = survival_asymptote(nm, anchor=ts[-1])
        for t, F, T in zip(ts, nm.fpt.cdf(ts), tail(ts)):
            out.rows.append([_label(a1, a2), float(t), float(F), float(1 - T)])
    out.plot = {"x": "t", "y": ["cdf"], "overlay": ["asymptote"], "group_by": "scenario", "xscale": "log", "yscale": "linear"}
    return out


def _fig_survival(a: float, K: float, points: int, cfg: EvalConfig) -> FigureData:
    out = FigureData("fig3-survival", ["scenario", "t", "survival", "asymptote", "kappa"])
    ts = np.logspace(-2, 6, points)
    for a1, a2 in SCENARIOS:
        nm = noise_model(shd(a1, a2, K), a, cfg)
        tail = survival_asymptote(nm, anchor=ts[-1])
        for t, S, T in zip(ts, nm.fpt.sf(ts), tail(ts)):
            out.rows.append([_label(a1, a2), float(t), float(S), float(T), nm.kappa])
    out.plot = {"x": "t", "y": ["survival"], "overlay": ["asymptote"], "group_by": "scenario", "xscale": "log", "yscale": "log"}
    return out


def _fig_noise_power(a: float, K: float, points: int, cfg: EvalConfig) -> FigureData:
    out = FigureData("fig4-noisepower", ["a", "alpha1", "alpha2", "noise_power_db"])
    n = max(2, points // 3)
    for dist in (1e-5, 1e-8, 1e-10):
        for a1 in np.linspace(1.1, 2.0, n):
            for a2 in np.linspace(0.1, 1.0, n):
                S = math.exp(shd_log_moment(shd(float(a1), float(a2), K), dist))
                out.rows.append([dist, float(a1), float(a2), 20 * math.log10(S)])
    out.plot = {"x": "alpha1", "y": ["alpha2"], "z": "noise_power_db", "kind": "heatmap", "facet": "a"}
    return out


def _sep_rows(out: FigureData, label: str, spec, a: float, M: int, N: int, snr_db: np.ndarray, cfg: EvalConfig):
    base = LinkConfig(M, N, 1.0, a, spec)
    nm = link_noise(base, cfg)
    try:
        asym = high_snr_expansion(base).asymptote(10 ** (snr_db / 10))
    except ValueError:
        asym = np.full(snr_db.shape, np.nan)
    for db, y in zip(snr_db, asym):
        ts = ts_for_snr(10 ** (db / 10), nm)
        out.rows.append([label, M, N, float(db), sep_upper_bound(base.with_ts(ts), eval_cfg=cfg), float(y)])


def _sep_figure(name: str, cases, a: float, K: float, points: int, cfg: EvalConfig) -> FigureData:
    out = FigureData(name, ["scenario", "M", "N", "snr_db", "sep_bound", "asymptote"])
    snr_db = np.linspace(0.0, 120.0, points)
    for (a1, a2), M, N in cases:
        _sep_rows(out, _label(a1, a2), shd(a1, a2, K), a, M, N, snr_db, cfg)
    out.plot = {"x": "snr_db", "y": ["sep_bound"], "overlay": ["asymptote"], "group_by": ["scenario", "M", "N"], "yscale": "log"}
    return out


def _fig_sep(a, K, points, cfg):
    return _sep_figure("fig5-sep", [(s, 2, 1) for s in SCENARIOS], a, K, points, cfg)


def _fig_sep_m(a, K, points, cfg):
    return _sep_figure("fig6-sep-M", [((1.8, 1.0), M, 2) for M in (2, 4, 8, 16)], a, K, points, cfg)


def _fig_sep_n(a, K, points, cfg):
    return _sep_figure("fig7-sep-N", [((2.0, 0.5), 4, N) for N in (1, 2, 3, 4)], a, K, points, cfg)


def _fig_slope(a, K, points, cfg):
    # per-molecule slope is alpha2/2 * min(1, 1/alpha1)
    out = FigureData("fig8-slope", ["level", "alpha1", "alpha2"])
    for level in (0.45, 0.40, 0.35, 0.30, 0.25):
        for a1 in np.linspace(0.1, 2.0, points):
            a2 = float(2 * level * max(1.0, a1))
            if a2 <= 1.0:
                out.rows.append([level, float(a1), a2])
    out.plot = {"x": "alpha1", "y": ["alpha2"], "group_by": "level", "kind": "line"}
    return out


FIGURES = {
    "fig2-cdf": _fig_cdf,
    "fig3-survival": _fig_survival,
    "fig4-noisepower": _fig_noise_power,
    "fig5-sep": _fig_sep,
    "fig6-sep-M": _fig_sep_m,
    "fig7-sep-N": _fig_sep_n,
    "fig8-slope": _fig_slope,
}


def run_figure(name: str, a: float = DEFAULT_A, K: float = DEFAULT_K, points: int = 49, cfg: EvalConfig = DEFAULT_CONFIG) -> FigureData:
    try:
        fn = FIGURES[name]
    except KeyError:
        raise ValueError(f"unknown figure {name!r}; choose from {sorted(FIGURES)}") from None
    data = fn(a, K, points, cfg)
    data.plot = {"figure": name, "data": f"{name}.csv", **data.plot}
    return data


# -- tables -------------------------------------------------------------------

_SEQ_COLUMNS = ["m", "n", "p", "q", "k", "c", "a", "b", "A", "B"]


def _seq_cells(O: OrderSeq, P: ParamSeq) -> list:
    # json writes floats with repr, so every value round-trips exactly
    return [O.m, O.n, O.p, O.q, repr(P.k), repr(P.c)] + [json.dumps(list(x)) for x in (P.a, P.b, P.A, P.B)]


def _table_presets(alpha: float, beta: float, a: float) -> FigureData:
    out = FigureData("table3-presets", ["preset", "role", "omega", "null"] + _SEQ_COLUMNS)
    for name, (_, names) in PRESETS.items():
        sp = preset(name, **{k: {"alpha": alpha, "beta": beta}[k] for k in names})
        for role, proc in (("parent", sp.parent), ("directing", sp.directing)):
            law = proc.law_at_1
            out.rows.append([name, role, repr(proc.omega), proc.is_null] + _seq_cells(law.order, law.params))
    return out


def _table_noise(alpha: float, beta: float, a: float) -> FigureData:
    out = FigureData("table4-noise", ["preset", "omega", "c", "geometric_power"] + _SEQ_COLUMNS)
    for name, (_, names) in PRESETS.items():
        row = noise_preset_table(name, {k: {"alpha": alpha, "beta": beta}[k] for k in names}, a)
        out.rows.append([name, repr(row.omega), repr(row.c), repr(row.geometric_power)] + _seq_cells(row.order, row.params))
    return out


TABLES = {"table3-presets": _table_presets, "table4-noise": _table_noise}


def export_table(name: str, alpha: float = 1.5, beta: float = 0.5, a: float = 1.0) -> FigureData:
    try:
        fn = TABLES[name]
    except KeyError:
        raise ValueError(f"unknown table {name!r}; choose from {sorted(TABLES)}") from None
    return fn(alpha, beta, a)


def read_table_csv(path) -> list[tuple[dict, OrderSeq, ParamSeq]]:
    """Parse an exported table back into (row, order, params) triples."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            O = OrderSeq(int(row["m"]), int(row["n"]), int(row["p"]), int(row["q"]))
            P = ParamSeq(float(row["k"]), float(row["c"]), *(json.loads(row[x]) for x in ("a", "b", "A", "B")))
            out.append((row, O, P))
    return out


def write_figure(data: FigureData, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{data.name}.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(data.columns)
        w.writerows(data.rows)
    paths = [csv_path]
    if data.plot:
        plot_path = out_dir / f"{data.name}.plot.json"
        plot_path.write_text(json.dumps(data.plot, indent=2, sort_keys=True) + "\n")
        paths.append(plot_path)
    return paths
