"""Command-line entry point: ``hdiff <command> [flags]``.

Every command writes CSV files and a ``manifest.json`` into ``--out``.
Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .diffusion import PRESETS, DiffusionSpec, position_variate, preset, shd
from .figures import FIGURES, TABLES, FigureData, export_table, run_figure, write_figure
from .hfunc import DEFAULT_CONFIG, EvalConfig, HFunctionError
from .link import LinkConfig, high_snr_expansion, link_noise, sep_upper_bound, ts_for_snr
from .montecarlo import CtrwConfig, RngStream, sample_fpt, simulate_fpt_ctrw, simulate_sep
from .noise import noise_model, shd_log_moment, survival_asymptote
from .params import SequenceError

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


@dataclass
class RunManifest:
    command: str
    flags: dict
    seed: int | None
    version: str
    outputs: list[str] = field(default_factory=list)
    wall_clock_s: float = 0.0

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path


# -- helpers ------------------------------------------------------------------


def _spec(args) -> DiffusionSpec:
    if args.preset:
        names = PRESETS[args.preset][1] if args.preset in PRESETS else ()
        params = {n: getattr(args, n) for n in names}
        missing = [n for n, v in params.items() if v is None]
        if missing:
            raise ValueError(f"preset {args.preset} needs --{' --'.join(missing)}")
        return preset(args.preset, **params)
    return shd(args.alpha1, args.alpha2, args.K)


def _eval_cfg(args) -> EvalConfig:
    if args.tolerance is None:
        return DEFAULT_CONFIG
    return EvalConfig(rel_tolerance=args.tolerance)


def _grid(lo: float, hi: float, n: int, log: bool) -> np.ndarray:
    return np.logspace(np.log10(lo), np.log10(hi), n) if log else np.linspace(lo, hi, n)


def _snr_db(args) -> np.ndarray:
    return np.linspace(args.snr_min, args.snr_max, args.snr_points)


# -- commands -----------------------------------------------------------------


def _cmd_density(args, cfg: EvalConfig) -> list[FigureData]:
    spec = _spec(args)
    kind = args.command
    if args.fpt:
        v = noise_model(spec, args.a, cfg).fpt
        xs = _grid(args.x_min or 1e-2, args.x_max or 1e4, args.points, log=True)
    else:
        v = position_variate(spec, args.t).with_config(cfg)
        xs = _grid(args.x_min if args.x_min is not None else -10.0, args.x_max or 10.0, args.points, log=False)
    fn = {"pdf": v.pdf, "cdf": v.cdf, "survival": v.sf}[kind]
    out = FigureData(kind, ["x", kind])
    out.rows = [[float(x), float(y)] for x, y in zip(xs, fn(xs))]
    if kind == "survival" and args.fpt:
        tail = survival_asymptote(noise_model(spec, args.a, cfg), anchor=float(xs[-1]))
        out.columns.append("asymptote")
        for row, y in zip(out.rows, tail(xs)):
            row.append(float(y))
    return [out]


def _cmd_noise_power(args, cfg) -> list[FigureData]:
    out = FigureData("noise-power", ["a", "alpha1", "alpha2", "noise_power_db"])
    for a in args.a_values:
        for a1 in np.linspace(args.alpha1_min, args.alpha1_max, args.grid):
            for a2 in np.linspace(args.alpha2_min, args.alpha2_max, args.grid):
                lm = shd_log_moment(shd(float(a1), float(a2), args.K), a)
                out.rows.append([a, float(a1), float(a2), 20 * lm / np.log(10)])
    return [out]


def _cmd_sep(args, cfg) -> list[FigureData]:
    spec = _spec(args)
    base = LinkConfig(args.M, args.N, 1.0, args.a, spec)
    nm = link_noise(base, cfg)
    db = _snr_db(args)
    try:
        asym = high_snr_expansion(base).asymptote(10 ** (db / 10))
    except ValueError:
        asym = np.full(db.shape, np.nan)
    out = FigureData("sep", ["snr_db", "sep_bound", "asymptote"])
    for x, y in zip(db, asym):
        cfg_x = base.with_ts(ts_for_snr(10 ** (x / 10), nm))
        out.rows.append([float(x), sep_upper_bound(cfg_x, eval_cfg=cfg), float(y)])
    return [out]


def _cmd_highsnr(args, cfg) -> list[FigureData]:
    e = high_snr_expansion(LinkConfig(args.M, args.N, 1.0, args.a, _spec(args)))
    out = FigureData("highsnr", ["s_inf", "p_inf", "p_inf_db", "g", "branch"])
    out.rows.append([e.s_inf, e.p_inf, 10 * np.log10(e.p_inf), e.g, e.branch])
    print(json.dumps({c: v for c, v in zip(out.columns, out.rows[0])}))
    return [out]


def _cmd_simulate_fpt(args, cfg) -> list[FigureData]:
    spec = _spec(args)
    rng = RngStream(args.seed, 0).generator()
    if args.method == "exact":
        times = sample_fpt(spec, args.a, rng, args.samples)
        censored = 0.0
    else:
        extra = {} if args.max_steps is None else {"max_steps": args.max_steps}
        ctrw = CtrwConfig.matched(spec, args.a, args.resolution, **extra)
        res = simulate_fpt_ctrw(spec, args.a, ctrw, rng, args.samples)
        times, censored = res.times, res.censored_fraction
    out = FigureData("simulate-fpt", ["t"])
    out.rows = [[float(t)] for t in times]
    summary = FigureData("simulate-fpt-summary", ["method", "samples", "censored_fraction", "geometric_mean"])
    finite = times[np.isfinite(times)]
    summary.rows.append([args.method, args.samples, censored, float(np.exp(np.mean(np.log(finite))))])
    return [out, summary]


def _cmd_simulate_sep(args, cfg) -> list[FigureData]:
    spec = _spec(args)
    base = LinkConfig(args.M, args.N, 1.0, args.a, spec)
    nm = link_noise(base, cfg)
    out = FigureData("simulate-sep", ["snr_db", "sep_hat", "ci_lo", "ci_hi", "sep_bound"])
    for i, db in enumerate(_snr_db(args)):
        c = base.with_ts(ts_for_snr(10 ** (db / 10), nm))
        est = simulate_sep(c, args.trials, RngStream(args.seed, i).generator())
        out.rows.append([float(db), est.p_hat, est.ci_low, est.ci_high, sep_upper_bound(c, eval_cfg=cfg)])
    return [out]


def _cmd_figure(args, cfg) -> list[FigureData]:
    return [run_figure(args.id, args.a, args.K, args.points, cfg)]


def _cmd_table(args, cfg) -> list[FigureData]:
    return [export_table(args.id, args.alpha, args.beta, args.a)]


COMMANDS = {
    "pdf": _cmd_density,
    "cdf": _cmd_density,
    "survival": _cmd_density,
    "noise-power": _cmd_noise_power,
    "sep": _cmd_sep,
    "highsnr": _cmd_highsnr,
    "simulate-fpt": _cmd_simulate_fpt,
    "simulate-sep": _cmd_simulate_sep,
    "figure": _cmd_figure,
    "table": _cmd_table,
}


# -- parser -------------------------------------------------------------------


def _add_model(p: argparse.ArgumentParser, a_default: float = 1e-5) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--preset", choices=sorted(PRESETS), help="named diffusion model instead of an (alpha1, alpha2) SHD")
    g.add_argument("--alpha", type=float, help="preset spatial index")
    g.add_argument("--beta", type=float, help="preset temporal index")
    g.add_argument("--alpha1", type=float, default=2.0)
    g.add_argument("--alpha2", type=float, default=1.0)
    g.add_argument("--K", type=float, default=1e-10, help="diffusion coefficient")
    g.add_argument("--a", type=float, default=a_default, help="receiver distance")


def _add_link(p: argparse.ArgumentParser) -> None:
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--snr-min", type=float, default=0.0, help="dB")
    p.add_argument("--snr-max", type=float, default=120.0, help="dB")
    p.add_argument("--snr-points", type=int, default=25)


def build_parser() -> argparse.ArgumentParser:
    def globals_(defaults: bool) -> argparse.ArgumentParser:
        # subcommands accept the global flags too, without clobbering values given before them
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--out", type=Path, default=d(Path("out")))
        p.add_argument("--seed", type=int, default=d(0))
        p.add_argument("--tolerance", type=float, default=d(None), help="relative tolerance for H-function evaluation")
        return p

    common = globals_(False)
    ap = argparse.ArgumentParser(prog="hdiff", description=__doc__.splitlines()[0], parents=[globals_(True)])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    for name in ("pdf", "cdf", "survival"):
        p = sub.add_parser(name, parents=[common], help=f"{name} of the position law, or of the FPT with --fpt")
        _add_model(p)
        p.add_argument("--fpt", action="store_true", help="use the first-passage time to distance --a")
        p.add_argument("--t", type=float, default=1.0, help="time of the position law")
        p.add_argument("--x-min", type=float)
        p.add_argument("--x-max", type=float)
        p.add_argument("--points", type=int, default=101)

    p = sub.add_parser("noise-power", parents=[common], help="(alpha1, alpha2) grid of noise power in dB")
    p.add_argument("--a", dest="a_values", type=float, nargs="+", default=[1e-5, 1e-8, 1e-10])
    p.add_argument("--K", type=float, default=1e-10)
    p.add_argument("--alpha1-min", type=float, default=1.1)
    p.add_argument("--alpha1-max", type=float, default=2.0)
    p.add_argument("--alpha2-min", type=float, default=0.1)
    p.add_argument("--alpha2-max", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=19)

    for name, helptext in (("sep", "SEP upper bound over an SNR sweep"), ("highsnr", "high-SNR slope and offset")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _add_model(p)
        _add_link(p)

    p = sub.add_parser("simulate-fpt", parents=[common], help="Monte Carlo first-passage times")
    _add_model(p)
    p.add_argument("--method", choices=("ctrw", "exact"), default="ctrw")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--resolution", type=float, default=1000.0, help="distance in units of the jump scale")
    p.add_argument("--max-steps", type=float, help="censor walks still short of the level after this many jumps")

    p = sub.add_parser("simulate-sep", parents=[common], help="Monte Carlo SEP over an SNR sweep")
    _add_model(p)
    _add_link(p)
    p.add_argument("--trials", type=int, default=100_000)

    p = sub.add_parser("figure", parents=[common], help="data behind a figure")
    p.add_argument("id", choices=sorted(FIGURES))
    p.add_argument("--a", type=float, default=1e-5)
    p.add_argument("--K", type=float, default=1e-10)
    p.add_argument("--points", type=int, default=49)

    p = sub.add_parser("table", parents=[common], help="export a table of sequences")
    p.add_argument("id", choices=sorted(TABLES))
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--a", type=float, default=1.0)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = _eval_cfg(args)
        results = COMMANDS[args.command](args, cfg)
    except (ValueError, SequenceError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (HFunctionError, ArithmeticError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    outputs = []
    for data in results:
        outputs += [str(p) for p in write_figure(data, args.out)]
    flags = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    manifest = RunManifest(args.command, flags, args.seed, __version__, outputs, time.perf_counter() - start)
    manifest.write(args.out)
    for p in outputs:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
