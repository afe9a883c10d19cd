"""Reporting harness: reference-table reconstruction and rendering.

Rebuilds the published toy-case tables from first principles (metric
panel over perturbed sine fixtures, gradient-norm tables, alpha sweep),
carries a pass/fail verdict against the embedded reference values, and
renders every report as CSV, Markdown, or NDJSON. Reports are pure
functions of their RunConfig, so equal configs give byte-identical CSV.

Fixture reconstruction notes, fixed here and checked by the test suite:
the base signal is one period of a sine, s_i = A*sin(2*pi*i/N) with
N = 1000 and A = 1; the metric table's inverted row uses A = 0.1; the
metric table's noise row uses additive sigma = 0.7115 (targets the
reference MSE of about 0.506, other columns match only loosely); the
gradient tables use additive noise sigma = 0.31 and jitter sigma = 0.05.
The gradient tables' sdsc column is the exact-mode subgradient norm.
"""

from __future__ import annotations

import dataclasses
import io
import json
import os
from dataclasses import dataclass, field

from . import signals
from .errors import ConfigError
from .gradients import grad_mae, grad_mse, grad_sdsc_loss, sensitivity_table
from .metrics import HeavisideMode, LossConfig, PanelConfig, metric_panel
from .signals import BaseSignalSpec, generate, perturb
from .stats import band_stats, load_pairs, pearson, sdsc_histogram, synthetic_pairs

OUT_DIR_ENV = "SIGDICE_OUT_DIR"

# fixture defaults (see module docstring)
INVERTED_AMPLITUDE_FACTOR = 0.1
TABLE1_NOISE_SIGMA = 0.7115
SENSITIVITY_NOISE_SIGMA = 0.31
JITTER_SIGMA = 0.05


@dataclass(frozen=True)
class RunConfig:
    """Everything a command run depends on; fully serializable."""

    command: str
    n_samples: int = 1000
    amplitude: float = 1.0
    periods: float = 1.0
    alphas: tuple = (1.0, 10.0, 100.0)
    lambda_sdsc: float = 0.5
    lambda_mse: float = 0.5
    epsilon: float = 1e-8
    gamma: float = 1.0
    seed: int = 0
    fmt: str = "csv"
    out: str | None = None
    # stats command
    samples_path: str | None = None
    synthetic_n: int = 0
    band_center: float = 1.5
    band_eps: float = 0.05
    # compare command
    file_e: str | None = None
    file_r: str | None = None
    with_grads: bool = False

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["alphas"] = list(self.alphas)
        return d


@dataclass
class Report:
    title: str
    columns: list
    rows: list  # dicts keyed by column name, plus "verdict"
    config: RunConfig
    notes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)  # non-tabular payload (histogram)

    @property
    def failed(self) -> bool:
        return any(row.get("verdict") == "fail" for row in self.rows)


# Embedded reference values: (row label, column) -> (expected, abs tolerance).
# Tolerance 0.0 means exact equality. Draw-dependent cells carry no entry.

TABLE1_EXPECTED = {
    ("Inverted", "mse"): (0.0200, 1e-3),
    ("Inverted", "mae"): (0.1272, 1e-3),
    ("Inverted", "sdsc"): (0.0, 0.0),
    ("0.5x Scaled", "mse"): (0.1249, 1e-3),
    ("0.5x Scaled", "mae"): (0.3180, 1e-3),
    ("0.5x Scaled", "sdsc"): (0.6667, 1e-4),
    ("2x Scaled", "mse"): (0.4995, 1e-3),
    ("2x Scaled", "mae"): (0.6360, 1e-3),
    ("2x Scaled", "sdsc"): (0.6667, 1e-4),
    ("Zero", "mse"): (0.4995, 1e-3),
    ("Zero", "mae"): (0.6360, 1e-3),
    ("Zero", "sdsc"): (0.0, 0.0),
    ("Positive Shifted", "mse"): (1.0000, 1e-3),
    ("Positive Shifted", "mae"): (1.0000, 1e-3),
    ("Positive Shifted", "sdsc"): (0.3887, 2e-3),
    ("Negative Shifted", "mse"): (1.0000, 1e-3),
    ("Negative Shifted", "mae"): (1.0000, 1e-3),
    ("Negative Shifted", "sdsc"): (0.3887, 2e-3),
}

SENSITIVITY_ROWS = (
    "Inverted",
    "0.5x Scaled",
    "2x Scaled",
    "Zero",
    "Noise Sample",
    "Shifted",
    "Jittered",
)

SENSITIVITY_EXPECTED = {
    ("Inverted", "mse"): (0.0894, 5e-4),
    ("0.5x Scaled", "mse"): (0.0223, 5e-4),
    ("2x Scaled", "mse"): (0.0447, 5e-4),
    ("Zero", "mse"): (0.0447, 5e-4),
    ("Shifted", "mse"): (0.0632, 5e-4),
}
# the mae norm is 1/sqrt(N) whenever every coordinate differs, so it is
# draw-independent and checked on every row
SENSITIVITY_EXPECTED.update({(row, "mae"): (0.0316, 5e-4) for row in SENSITIVITY_ROWS})

ALPHA_EXPECTED = {
    ("Inverted", 1.0): (0.0091, 2e-3),
    ("Inverted", 10.0): (0.0082, 2e-3),
    ("Inverted", 100.0): (0.0047, 2e-3),
    ("0.5x Scaled", 1.0): (0.0289, 2e-3),
    ("0.5x Scaled", 10.0): (0.0437, 2e-3),
    ("0.5x Scaled", 100.0): (0.0436, 2e-3),
    ("Zero", 1.0): (0.0, 0.0),
    ("Zero", 10.0): (0.0, 0.0),
    ("Zero", 100.0): (0.0, 0.0),
}

# reference values reported alongside but not checked (draw-dependent or
# produced by an unstated configuration upstream): metric-table noise row
# mse 0.5062 / mae 0.6361 / sdsc 0.1137; gradient-table sdsc column
# 0.0 / 0.0442 / 0.0110 / 0.0 / 0.0237 / 0.0075 / 0.0248


def _verdict(value, expected) -> str:
    if expected is None:
        return "-"
    target, tol = expected
    if tol == 0.0:
        return "pass" if value == target else "fail"
    return "pass" if abs(value - target) <= tol else "fail"


def _row_verdict(cells: dict, expected_map, label) -> str:
    verdicts = []
    for col, value in cells.items():
        exp = expected_map.get((label, col))
        if exp is not None:
            verdicts.append(_verdict(value, exp))
    if not verdicts:
        return "-"
    return "fail" if "fail" in verdicts else "pass"


def _base_spec(cfg: RunConfig, amplitude=None) -> BaseSignalSpec:
    return BaseSignalSpec(
        amplitude=cfg.amplitude if amplitude is None else amplitude,
        periods=cfg.periods,
        n_samples=cfg.n_samples,
    )


def table1_fixtures(cfg: RunConfig):
    """The seven metric-table cases as (label, reference, candidate)."""
    base = generate(_base_spec(cfg))
    small = generate(_base_spec(cfg, amplitude=cfg.amplitude * INVERTED_AMPLITUDE_FACTOR))
    return [
        ("Inverted", small, perturb(small, signals.invert())),
        ("0.5x Scaled", base, perturb(base, signals.scale(0.5))),
        ("2x Scaled", base, perturb(base, signals.scale(2.0))),
        ("Zero", base, perturb(base, signals.zero())),
        ("Noise Sample", base, perturb(base, signals.add_noise(TABLE1_NOISE_SIGMA, cfg.seed))),
        ("Positive Shifted", base, perturb(base, signals.shift(1.0))),
        ("Negative Shifted", base, perturb(base, signals.shift(-1.0))),
    ]


def sensitivity_cases(cfg: RunConfig):
    """The seven gradient-table perturbations as (label, PerturbationSpec)."""
    return [
        ("Inverted", signals.invert()),
        ("0.5x Scaled", signals.scale(0.5)),
        ("2x Scaled", signals.scale(2.0)),
        ("Zero", signals.zero()),
        ("Noise Sample", signals.add_noise(SENSITIVITY_NOISE_SIGMA, cfg.seed)),
        ("Shifted", signals.shift(1.0)),
        ("Jittered", signals.jitter(JITTER_SIGMA, cfg.seed + 1)),
    ]


def cmd_table1(cfg: RunConfig) -> Report:
    """Metric panel over the seven reconstructed toy cases."""
    panel_cfg = PanelConfig(alpha=10.0, gamma=cfg.gamma, eps=cfg.epsilon)
    columns = ["case", "mse", "mae", "dtw", "soft_dtw", "sdsc", "sdsc_smooth", "verdict"]
    rows = []
    for label, e, r in table1_fixtures(cfg):
        rep = metric_panel(e, r, panel_cfg)
        cells = {
            "mse": rep.mse,
            "mae": rep.mae,
            "dtw": rep.dtw,
            "soft_dtw": rep.soft_dtw,
            "sdsc": rep.sdsc,
            "sdsc_smooth": rep.sdsc_smooth,
        }
        rows.append({"case": label, **cells, "verdict": _row_verdict(cells, TABLE1_EXPECTED, label)})
    notes = [
        f"sine base: N={cfg.n_samples}, A={cfg.amplitude}; inverted row A={cfg.amplitude * INVERTED_AMPLITUDE_FACTOR}",
        f"noise row: additive sigma={TABLE1_NOISE_SIGMA}, seed={cfg.seed} (statistical reproduction only)",
        "dtw: abs local cost, normalized by optimal path length",
        "verdict compares against the embedded reference values (default config reproduces them)",
    ]
    return Report("metric panel", columns, rows, cfg, notes)


def _grad_columns_sensitivity(cfg: RunConfig):
    exact = LossConfig(heaviside=HeavisideMode.exact(), denom_epsilon=cfg.epsilon)
    return [
        ("mse", lambda e, r: grad_mse(e, r)),
        ("mae", lambda e, r: grad_mae(e, r)),
        ("sdsc", lambda e, r, c=exact: grad_sdsc_loss(e, r, c)),
    ]


def cmd_sensitivity(cfg: RunConfig) -> Report:
    """Gradient-norm table: mse / mae / exact-subgradient sdsc columns."""
    table = sensitivity_table(_base_spec(cfg), sensitivity_cases(cfg), _grad_columns_sensitivity(cfg))
    columns = ["case", "mse", "mae", "sdsc", "verdict"]
    rows = []
    for raw in table:
        label = raw["case"]
        cells = {k: v for k, v in raw.items() if k != "case"}
        rows.append({"case": label, **cells, "verdict": _row_verdict(cells, SENSITIVITY_EXPECTED, label)})
    notes = [
        f"noise sigma={SENSITIVITY_NOISE_SIGMA}, jitter sigma={JITTER_SIGMA}, seed={cfg.seed}",
        "sdsc column: L2 norm of the exact-mode subgradient (reported, not checked)",
    ]
    return Report("gradient sensitivity", columns, rows, cfg, notes)


def cmd_alpha_sweep(cfg: RunConfig) -> Report:
    """Sigmoid sdsc-loss gradient norms across the alpha ladder."""
    if not cfg.alphas:
        raise ConfigError("alpha ladder must be non-empty")
    configs = []
    for alpha in cfg.alphas:
        lc = LossConfig(heaviside=HeavisideMode.sigmoid(alpha), denom_epsilon=cfg.epsilon)
        configs.append((f"alpha={alpha:g}", lambda e, r, c=lc: grad_sdsc_loss(e, r, c)))
    table = sensitivity_table(_base_spec(cfg), sensitivity_cases(cfg), configs)
    columns = ["case"] + [c for c, _ in configs] + ["verdict"]
    rows = []
    for raw in table:
        label = raw["case"]
        verdicts = []
        for alpha in cfg.alphas:
            exp = ALPHA_EXPECTED.get((label, float(alpha)))
            if exp is not None:
                verdicts.append(_verdict(raw[f"alpha={alpha:g}"], exp))
        verdict = "-" if not verdicts else ("fail" if "fail" in verdicts else "pass")
        rows.append({**raw, "verdict": verdict})
    notes = [
        f"noise sigma={SENSITIVITY_NOISE_SIGMA}, jitter sigma={JITTER_SIGMA}, seed={cfg.seed}",
        "cells are L2 norms of the sigmoid sdsc-loss gradient",
    ]
    return Report("alpha sweep", columns, rows, cfg, notes)


def cmd_stats(cfg: RunConfig) -> Report:
    """Pearson correlation plus sdsc dispersion in a fixed-mse band."""
    if cfg.samples_path:
        samples = load_pairs(cfg.samples_path)
        source = cfg.samples_path
    elif cfg.synthetic_n > 0:
        samples = synthetic_pairs(cfg.synthetic_n, seed=cfg.seed)
        source = f"synthetic(n={cfg.synthetic_n}, r=-0.3, seed={cfg.seed})"
    else:
        raise ConfigError("stats needs a samples file or a synthetic sample count")
    r = pearson([s.mse_value for s in samples], [s.sdsc_value for s in samples])
    band = band_stats(samples, cfg.band_center, cfg.band_eps)
    in_band = [s.sdsc_value for s in samples if abs(s.mse_value - cfg.band_center) <= cfg.band_eps]
    hist = sdsc_histogram(in_band)
    columns = ["n", "pearson_r", "band_center", "band_eps", "band_count", "band_std", "band_iqr", "verdict"]
    row = {
        "n": len(samples),
        "pearson_r": r,
        "band_center": cfg.band_center,
        "band_eps": cfg.band_eps,
        "band_count": band["band_count"],
        "band_std": band["band_std"],
        "band_iqr": band["band_iqr"],
        "verdict": "-",
    }
    notes = [f"samples: {source}", "histogram: 20 bins over [0, 1] of in-band sdsc values"]
    return Report("paired-sample stats", columns, [row], cfg, notes, extra={"histogram": hist})


def cmd_compare(cfg: RunConfig) -> Report:
    """Metric panel over two user-supplied signal files."""
    if not cfg.file_e or not cfg.file_r:
        raise ConfigError("compare needs two signal files")
    e = signals.load_csv(cfg.file_e)
    r = signals.load_csv(cfg.file_r)
    columns = ["mse", "mae", "dtw", "soft_dtw", "sdsc", "sdsc_smooth", "verdict"]
    notes = [f"e: {cfg.file_e} (n={len(e)})", f"r: {cfg.file_r} (n={len(r)})"]
    if len(e) == len(r):
        panel_cfg = PanelConfig(alpha=10.0, gamma=cfg.gamma, eps=cfg.epsilon)
        rep = metric_panel(e, r, panel_cfg)
        row = {
            "mse": rep.mse,
            "mae": rep.mae,
            "dtw": rep.dtw,
            "soft_dtw": rep.soft_dtw,
            "sdsc": rep.sdsc,
            "sdsc_smooth": rep.sdsc_smooth,
            "verdict": "-",
        }
        if cfg.with_grads:
            lc = LossConfig(heaviside=HeavisideMode.sigmoid(10.0), denom_epsilon=cfg.epsilon)
            row["grad_mse_norm"] = grad_mse(e, r).l2_norm
            row["grad_sdsc_norm"] = grad_sdsc_loss(e, r, lc).l2_norm
            columns = columns[:-1] + ["grad_mse_norm", "grad_sdsc_norm", "verdict"]
    else:
        # unequal lengths: only the alignment distances are defined
        from .metrics import dtw as dtw_fn, soft_dtw as soft_dtw_fn

        row = {
            "mse": "",
            "mae": "",
            "dtw": dtw_fn(e, r, "abs", "path_length"),
            "soft_dtw": soft_dtw_fn(e, r, cfg.gamma),
            "sdsc": "",
            "sdsc_smooth": "",
            "verdict": "-",
        }
        notes.append("lengths differ: only dtw/soft_dtw are defined")
    return Report("compare", columns, [row], cfg, notes)


COMMANDS = {
    "table1": cmd_table1,
    "sensitivity": cmd_sensitivity,
    "alpha-sweep": cmd_alpha_sweep,
    "stats": cmd_stats,
    "compare": cmd_compare,
}


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    buf.write(",".join(report.columns) + "\n")
    for row in report.rows:
        buf.write(",".join(_fmt_cell(row.get(c, "")) for c in report.columns) + "\n")
    return buf.getvalue()


def render_markdown(report: Report) -> str:
    def cell(v):
        if isinstance(v, float):
            return f"{v:.4f}"
        return str(v)

    lines = [f"## {report.title}", ""]
    lines.append("| " + " | ".join(report.columns) + " |")
    lines.append("|" + "|".join("---" for _ in report.columns) + "|")
    for row in report.rows:
        lines.append("| " + " | ".join(cell(row.get(c, "")) for c in report.columns) + " |")
    if "histogram" in report.extra:
        hist = report.extra["histogram"]
        lines.append("")
        lines.append("| bin | count |")
        lines.append("|---|---|")
        for i, count in enumerate(hist["counts"]):
            lines.append(f"| [{hist['edges'][i]:.2f}, {hist['edges'][i + 1]:.2f}) | {count} |")
    for note in report.notes:
        lines.append("")
        lines.append(f"_{note}_")
    return "\n".join(lines) + "\n"


def render_ndjson(report: Report) -> str:
    lines = [
        json.dumps(
            {"kind": "meta", "title": report.title, "config": report.config.to_dict(), "notes": report.notes},
            separators=(",", ":"),
        )
    ]
    for row in report.rows:
        lines.append(json.dumps({"kind": "row", **row}, separators=(",", ":")))
    for key, payload in report.extra.items():
        lines.append(json.dumps({"kind": key, **payload}, separators=(",", ":")))
    return "\n".join(lines) + "\n"


RENDERERS = {"csv": render_csv, "markdown": render_markdown, "ndjson": render_ndjson}


def render(report: Report, fmt: str) -> str:
    try:
        return RENDERERS[fmt](report)
    except KeyError:
        raise ConfigError(f"unknown format {fmt!r}") from None


def resolve_out_path(cfg: RunConfig) -> str | None:
    """--out wins; otherwise $SIGDICE_OUT_DIR/<command>.<ext>; else stdout."""
    if cfg.out:
        return cfg.out
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir:
        ext = {"csv": "csv", "markdown": "md", "ndjson": "ndjson"}[cfg.fmt]
        return os.path.join(out_dir, f"{cfg.command}.{ext}")
    return None


def run(cfg: RunConfig) -> tuple[Report, str]:
    """Execute a command and render it; returns (report, rendered text)."""
    try:
        command = COMMANDS[cfg.command]
    except KeyError:
        raise ConfigError(f"unknown command {cfg.command!r}") from None
    report = command(cfg)
    return report, render(report, cfg.fmt)
