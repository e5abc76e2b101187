"""Batch experiment runner and report emitter.

Each subcommand runs one seeded suite, writes a JSON summary plus CSV data
into the output directory, and optionally renders SVG plots.  Summaries are
deterministic: identical (config, seed) produce byte-identical JSON, so runs
can be diffed.  Exit codes: 0 all checks passed, 1 an invariant check failed
(the summary carries the failure records), 2 the configuration was invalid.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .core_signals import GapSpec, Grid, TrigPoly, random_highpass, spectrum_of, synth_trig
from .errors import GapwaveError, InvalidInputError
from .hardy import (
    Lattice,
    decay_check,
    decompose,
    lattice_crossings,
    nevanlinna_exponent,
    phase_curve,
)
from .heat_flow import monotonicity_check, temperature_field
from .limit_sets_examples import example1_build, example2_build
from .oscillation import density_profile, s_count, sign_change_places
from .sturm_hurwitz import check_sturm_bound

SCHEMA = "gapwave/1"
KINDS = ("sturm", "density", "heat", "decompose", "example1", "example2")


@dataclass(frozen=True)
class ExperimentConfig:
    """One reproducible experiment: (kind, parameters, seed) fix every output."""

    kind: str
    parameters: dict
    seed: int = 0
    output_dir: str = "gapwave_out"

    @classmethod
    def parse(
        cls,
        kind: str,
        parameters: Mapping | None = None,
        seed: int = 0,
        output_dir: str = "gapwave_out",
    ) -> "ExperimentConfig":
        if kind not in KINDS and kind != "all":
            raise InvalidInputError(f"unknown experiment kind {kind!r}")
        return cls(str(kind), dict(parameters or {}), int(seed), str(output_dir))


def _coerce(text: str):
    low = text.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    for caster in (int, float):
        try:
            return caster(text)
        except ValueError:
            pass
    return text


def load_config_file(path: str) -> dict:
    """KEY=VALUE lines, '#' comments; values parsed as bool/int/float/str."""
    out: dict = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InvalidInputError(f"cannot read config file {path}: {e}") from e
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidInputError(f"{path}:{ln}: expected KEY=VALUE, got {line!r}")
        key, _, val = line.partition("=")
        out[key.strip()] = _coerce(val.strip())
    return out


def _parse_range(text) -> tuple[int, int]:
    s = str(text)
    sep = ".." if ".." in s else ("-" if "-" in s else None)
    if sep is None:
        v = int(s)
        return v, v
    lo, _, hi = s.partition(sep)
    try:
        return int(lo), int(hi)
    except ValueError as e:
        raise InvalidInputError(f"bad range {text!r}; expected LO..HI") from e


def _parse_schedule(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as e:
        raise InvalidInputError(f"bad schedule {text!r}; expected R1,R2,...") from e


def _parse_intervals(text) -> list[tuple[int, int]]:
    if isinstance(text, (list, tuple)):
        return [(int(a), int(b)) for a, b in text]
    try:
        pairs = [tok.split(":") for tok in str(text).split(",") if tok.strip()]
        return [(int(a), int(b)) for a, b in pairs]
    except (ValueError, IndexError) as e:
        raise InvalidInputError(f"bad intervals {text!r}; expected A:B,C:D,...") from e


# ---------------------------------------------------------------------------
# artifact writers


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _save_svg(path: Path, draw: Callable) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    draw(ax)
    fig.tight_layout()
    # fixed metadata keeps repeated runs diffable
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _trial_seed(seed: int, i: int) -> int:
    return int(np.random.default_rng([seed, i]).integers(0, 2**31))


# ---------------------------------------------------------------------------
# suites


def _run_sturm(p: dict, seed: int, outdir: Path, svg: bool) -> dict:
    m_lo, m_hi = _parse_range(p.get("m_range", "1..8"))
    trials = int(p.get("trials", 50))
    degree = int(p.get("degree", 16))
    if trials <= 0 or m_lo < 1 or m_hi < m_lo or degree < m_hi:
        raise InvalidInputError("need trials >= 1 and 1 <= m_lo <= m_hi <= degree")
    failures = []
    rows = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        m = int(rng.integers(m_lo, m_hi + 1))
        poly = random_highpass(GapSpec(float(m)), (m, degree), _trial_seed(seed, i))
        rep = check_sturm_bound(poly)
        rows.append([i, m, poly.degree, rep.count, 2 * m, int(rep.passed)])
        if not rep.passed:
            failures.append(
                {"check": "sign-change-floor", "trial": i, "m": m, "count": rep.count}
            )
    pure = []
    for m in range(m_lo, m_hi + 1):
        rep = check_sturm_bound(TrigPoly({m: 0.5}))
        pure.append({"count": rep.count, "m": m})
        if rep.count != 2 * m:
            failures.append({"check": "pure-cosine-exact", "count": rep.count, "m": m})
    _write_csv(
        outdir / "sturm_data.csv",
        ["trial", "m", "degree", "count", "floor", "pass"],
        rows,
    )
    if svg:

        def draw(ax):
            data = np.array([[r[1], r[3]] for r in rows], dtype=float)
            ax.scatter(data[:, 0], data[:, 1], s=12, label="measured count")
            ms = np.arange(m_lo, m_hi + 1)
            ax.plot(ms, 2 * ms, "k--", label="floor 2m")
            ax.set_xlabel("gap order m")
            ax.set_ylabel("sign changes per period")
            ax.legend()

        _save_svg(outdir / "sturm_plot.svg", draw)
    return {
        "results": {
            "m_range": [m_lo, m_hi],
            "pure_cosine": pure,
            "trials": trials,
            "violations": len(failures),
        },
        "failures": failures,
    }


def _run_density(p: dict, seed: int, outdir: Path, svg: bool) -> dict:
    a = float(p.get("gap", 3.0))
    b = float(p.get("band", 8.0))
    window = float(p.get("window", 628.0))
    dx = float(p.get("dx", 0.01))
    if a <= 0 or b < a or window < 4 * np.pi / a or dx <= 0:
        raise InvalidInputError("need 0 < gap <= band and a window of several periods")
    poly = random_highpass(GapSpec(a, b), (1, int(b)), _trial_seed(seed, 0))
    n = int(round((window + 2.0) / dx))
    s = synth_trig(poly, Grid(-1.0, dx, n))
    rep = sign_change_places(s)
    r_grid = np.linspace(window / 100.0, window, 400)
    prof = density_profile(rep, r_grid)
    bound = a / np.pi * 0.95
    failures = []
    if not prof.tail_min >= bound:
        failures.append(
            {"bound": bound, "check": "density-tail-min", "tail_min": prof.tail_min}
        )
    _write_csv(
        outdir / "density_data.csv",
        ["r", "s", "ratio"],
        zip(prof.r, prof.s.astype(int), prof.ratio),
    )
    if svg:

        def draw(ax):
            ax.plot(prof.r, prof.ratio, lw=1.0, label="s(r)/r")
            ax.axhline(bound, color="k", ls="--", label="0.95 a/pi")
            ax.axvline(prof.tail_start, color="gray", lw=0.7)
            ax.set_xlabel("r")
            ax.set_ylabel("sign-change density")
            ax.legend()

        _save_svg(outdir / "density_plot.svg", draw)
    return {
        "results": {
            "bound": bound,
            "gap": a,
            "gap_order": poly.gap_order,
            "tail_min": prof.tail_min,
            "tail_start": prof.tail_start,
            "window": window,
        },
        "failures": failures,
    }


def _run_heat(p: dict, seed: int, outdir: Path, svg: bool) -> dict:
    trials = int(p.get("trials", 3))
    t_max = float(p.get("t_max", 1.0))
    if trials <= 0 or t_max <= 0:
        raise InvalidInputError("need trials >= 1 and t_max > 0")
    n = 4096
    # two full 2 pi periods so every harmonic sits on a DFT bin
    g = Grid(-np.pi / 2, 4 * np.pi / n, n)
    t_grid = np.linspace(0.0, t_max, 21)
    r = 2 * np.pi
    failures = []
    rows = []
    first = None
    for i in range(trials):
        poly = random_highpass(GapSpec(1.0, 12.0), (1, 12), _trial_seed(seed, i))
        s = synth_trig(poly, g)
        if first is None:
            first = s
        rep = monotonicity_check(s, t_grid, r)
        for t, c in zip(rep.times, rep.counts):
            rows.append([i, t, int(c)])
        if not rep.nonincreasing:
            failures.append(
                {
                    "check": "heat-monotonicity",
                    "counts": [int(c) for c in rep.counts],
                    "trial": i,
                }
            )
    _write_csv(outdir / "heat_data.csv", ["trial", "t", "count"], rows)
    field = temperature_field(first, t_grid)
    field.zero_trajectories_csv(str(outdir / "heat_trajectories.csv"))
    if svg:

        def draw(ax):
            for i, t in enumerate(field.times):
                zs = sign_change_places(field.row(i)).change_positions
                ax.plot(zs, np.full(zs.size, t), "k.", ms=2.5)
            ax.set_xlabel("x")
            ax.set_ylabel("t")
            ax.set_title("zero trajectories under heating")

        _save_svg(outdir / "heat_plot.svg", draw)
    return {
        "results": {
            "r": r,
            "t_grid": [float(t) for t in t_grid],
            "trials": trials,
            "violations": len(failures),
        },
        "failures": failures,
    }


def _run_decompose(p: dict, seed: int, outdir: Path, svg: bool) -> dict:
    a = float(p.get("gap", 2.0))
    b = float(p.get("band", 8.0))
    if a < 1 or b < a:
        raise InvalidInputError("need 1 <= gap <= band")
    n = 8192
    g = Grid(-16 * np.pi, 32 * np.pi / n, n)
    poly = random_highpass(GapSpec(a, b), (1, int(b)), _trial_seed(seed, 0))
    s = synth_trig(poly, g)
    d = decompose(s, band=GapSpec(a, b))
    sp = spectrum_of(s)
    f_hat_sup = g.length * float(np.max(np.abs(sp.amplitudes)))
    probes = [(0.0, y) for y in (0.5, 1.0, 2.0, 4.0)]
    dec = decay_check(d, a, f_hat_sup, probes)
    failures = []
    if not dec.passed:
        failures.append({"check": "half-plane-decay", "max_ratio": dec.max_ratio})
    a_true = float(poly.gap_order)
    slope = nevanlinna_exponent(d)
    if abs(slope - a_true) > 0.01 * a_true:
        failures.append({"check": "decay-slope", "expected": a_true, "slope": slope})
    curve = phase_curve(d)
    rep = sign_change_places(s)
    x_hi = float(g.x_last)
    r_probes = np.linspace(x_hi / 20.0, x_hi, 20)
    mismatches = []
    for r in r_probes:
        lc = lattice_crossings(curve, float(r), Lattice())
        sc = s_count(rep, float(r))
        if lc != sc:
            mismatches.append({"crossings": lc, "r": float(r), "sign_changes": sc})
    if mismatches:
        failures.append({"check": "phase-crossing-identity", "probes": mismatches})
    xs = np.concatenate([seg.x for seg in curve.segments])
    phis = np.concatenate([seg.phi for seg in curve.segments])
    _write_csv(outdir / "decompose_data.csv", ["x", "phi"], zip(xs, phis))
    if svg:

        def draw(ax):
            for seg in curve.segments:
                ax.plot(seg.x, seg.phi, "C0", lw=0.9)
            lo = np.floor((phis.min() - np.pi / 2) / np.pi)
            hi = np.ceil((phis.max() - np.pi / 2) / np.pi)
            for k in np.arange(lo, hi + 1):
                ax.axhline(np.pi / 2 + k * np.pi, color="gray", lw=0.4)
            ax.plot(curve.jump_positions, [j.phi_before for j in curve.jumps], "rv", ms=4)
            ax.set_xlabel("x")
            ax.set_ylabel("phase of h")

        _save_svg(outdir / "decompose_plot.svg", draw)
    return {
        "results": {
            "decay_max_ratio": dec.max_ratio,
            "gap": a,
            "gap_order": poly.gap_order,
            "probe_count": len(r_probes),
            "slope": slope,
        },
        "failures": failures,
    }


def _run_example1(p: dict, seed: int, outdir: Path, svg: bool) -> dict:
    intervals = _parse_intervals(p.get("intervals", "10:13,40:46"))
    alpha = float(p.get("alpha", 0.75))
    epsilon = float(p.get("epsilon", 0.05 * np.pi))
    window = float(p.get("window", 1000.0))
    res = example1_build(intervals, alpha, epsilon, (-window / 2, window / 2))
    r = res.report
    failures = []
    if any(c != 0 for c in r.sign_changes):
        failures.append(
            {"check": "interval-sign-changes", "counts": list(r.sign_changes)}
        )
    if not r.gap_energy_ratio < 1e-2:
        failures.append({"check": "spectral-gap", "ratio": r.gap_energy_ratio})
    _write_csv(outdir / "example1_data.csv", ["x", "f"], zip(res.f.x, res.f.values))
    if svg:

        def draw(ax):
            ax.plot(res.f.x, res.f.values, lw=0.5)
            for lo, hi in intervals:
                ax.axvspan(lo, hi, color="orange", alpha=0.25)
            ax.set_xlabel("x")
            ax.set_ylabel("f")

        _save_svg(outdir / "example1_plot.svg", draw)
    return {"results": r.to_json(), "failures": failures}


def _run_example2(p: dict, seed: int, outdir: Path, svg: bool) -> dict:
    k = float(p.get("k", 0.1))
    schedule = _parse_schedule(p.get("schedule", "5,20,80,320,1280"))
    r_max = p.get("r_max")
    res = example2_build(k, schedule, R=None if r_max is None else float(r_max))
    r = res.report
    failures = []
    if not abs(r.peak_ratio - 1.0) <= 0.10:
        failures.append({"check": "peak-density", "ratio": r.peak_ratio})
    if not (
        r.sign_change_density <= r.sign_density_bound
        and r.sign_change_density < r.one_minus_m
    ):
        failures.append(
            {
                "bound": r.sign_density_bound,
                "check": "sign-change-density",
                "density": r.sign_change_density,
            }
        )
    res.zeros.to_csv(str(outdir / "example2_data.csv"))
    if svg:

        def draw(ax):
            zs = np.asarray(res.zeros.positions, dtype=float)
            ax.step(zs, np.arange(1, zs.size + 1), where="post", label="zero count")
            lo, hi = r.peak_block
            ax.axvspan(lo, hi, color="orange", alpha=0.2, label="peak block")
            ax.set_xlabel("x")
            ax.set_ylabel("zeros up to x")
            ax.legend()

        _save_svg(outdir / "example2_plot.svg", draw)
    return {"results": r.to_json(), "failures": failures}


_SUITES: dict[str, Callable[[dict, int, Path, bool], dict]] = {
    "sturm": _run_sturm,
    "density": _run_density,
    "heat": _run_heat,
    "decompose": _run_decompose,
    "example1": _run_example1,
    "example2": _run_example2,
}


# ---------------------------------------------------------------------------
# runner


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def run(config: ExperimentConfig, echo_json: bool = False, svg: bool = False) -> int:
    """Execute one experiment (or the whole battery for kind 'all')."""
    if config.kind == "all":
        codes = {}
        for kind in KINDS:
            sub = ExperimentConfig(kind, config.parameters, config.seed, config.output_dir)
            codes[kind] = run(sub, echo_json=False, svg=svg)
        if 2 in codes.values():
            return 2
        ok = all(c == 0 for c in codes.values())
        summary = {
            "kind": "all",
            "pass": ok,
            "schema": SCHEMA,
            "seed": config.seed,
            "suites": {k: c == 0 for k, c in codes.items()},
        }
        outdir = Path(config.output_dir)
        _write_json(outdir / "all_summary.json", summary)
        if echo_json:
            print(json.dumps(summary, sort_keys=True, indent=2))
        return 0 if ok else 1
    if config.kind not in _SUITES:
        print(f"error: unknown experiment kind {config.kind!r}", file=sys.stderr)
        return 2
    outdir = Path(config.output_dir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        print(f"error: cannot create output dir: {e}", file=sys.stderr)
        return 2
    try:
        body = _SUITES[config.kind](dict(config.parameters), config.seed, outdir, svg)
    except InvalidInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except GapwaveError as e:
        body = {
            "results": {},
            "failures": [{"check": "run-aborted", "detail": str(e)}],
        }
    summary = {
        "failures": _json_safe(body["failures"]),
        "kind": config.kind,
        "parameters": _json_safe(config.parameters),
        "pass": not body["failures"],
        "results": _json_safe(body["results"]),
        "schema": SCHEMA,
        "seed": config.seed,
    }
    _write_json(outdir / f"{config.kind}_summary.json", summary)
    if echo_json:
        print(json.dumps(summary, sort_keys=True, indent=2))
    return 0 if summary["pass"] else 1


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master RNG seed")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--window", type=float, default=None, help="window length")
    common.add_argument("--dx", type=float, default=None, help="sample spacing")
    common.add_argument(
        "--json", action="store_true", help="echo the JSON summary to stdout"
    )
    common.add_argument("--svg", action="store_true", help="write SVG plots")
    common.add_argument(
        "--config", default=None, help="KEY=VALUE config file; explicit flags win"
    )
    parser = argparse.ArgumentParser(
        prog="gapwave", description="seeded numerical experiments on gapped signals"
    )
    sub = parser.add_subparsers(dest="command")
    sp = sub.add_parser("sturm", parents=[common], help="sign-change floor suite")
    sp.add_argument("--m-range", default=None, help="gap orders, e.g. 1..8")
    sp.add_argument("--trials", type=int, default=None)
    sp = sub.add_parser("density", parents=[common], help="tail density of s(r)/r")
    sp.add_argument("--gap", type=float, default=None)
    sp.add_argument("--band", type=float, default=None)
    sp = sub.add_parser("heat", parents=[common], help="zero counts under heating")
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--t-max", type=float, default=None)
    sp = sub.add_parser(
        "decompose", parents=[common], help="half-plane decay and phase counting"
    )
    sp.add_argument("--gap", type=float, default=None)
    sp.add_argument("--band", type=float, default=None)
    sp = sub.add_parser("example1", parents=[common], help="gapped signal, no sign changes")
    sp.add_argument("--intervals", default=None, help="e.g. 10:13,40:46")
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--epsilon", type=float, default=None)
    sp = sub.add_parser("example2", parents=[common], help="scheduled zero-density peaks")
    sp.add_argument("--k", type=float, default=None)
    sp.add_argument("--schedule", default=None, help="e.g. 5,20,80,320")
    sp.add_argument("--r-max", type=float, default=None)
    sub.add_parser("all", parents=[common], help="run every suite")
    return parser


_PARAM_KEYS = (
    "m_range",
    "trials",
    "degree",
    "gap",
    "band",
    "window",
    "dx",
    "t_max",
    "intervals",
    "alpha",
    "epsilon",
    "k",
    "schedule",
    "r_max",
)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        file_vals = load_config_file(args.config) if args.config else {}
        params = {k: v for k, v in file_vals.items() if k in _PARAM_KEYS}
        for key in _PARAM_KEYS:
            flag = getattr(args, key, None)
            if flag is not None:
                params[key] = flag
        seed = args.seed if args.seed is not None else int(file_vals.get("seed", 0))
        out = args.out if args.out is not None else str(file_vals.get("out", "gapwave_out"))
        kind = str(file_vals.get("kind", args.command))
        config = ExperimentConfig.parse(kind, params, seed, out)
    except InvalidInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    svg = bool(args.svg or file_vals.get("svg", False))
    echo = bool(args.json or file_vals.get("json", False))
    return run(config, echo_json=echo, svg=svg)


if __name__ == "__main__":
    sys.exit(main())
