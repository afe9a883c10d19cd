"""Signal representation, synthetic generators, and the perturbation suite.

A Signal is an immutable sequence of finite float64 amplitudes with an
optional sample period. Base signals are generated from a closed-form
sine description; perturbations are small declarative transformations
(inversion, scaling, shifting, zeroing, additive noise) used to build
the toy cases that the metric and gradient tables are computed over.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NonFiniteError, ParseError


@dataclass(frozen=True)
class Signal:
    """Immutable single-channel signal.

    samples: finite float64 amplitudes, length >= 1
    sample_period: seconds per sample, > 0, default 1.0
    """

    samples: np.ndarray
    sample_period: float = 1.0

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ConfigError("signal must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("signal contains non-finite samples")
        if not (self.sample_period > 0 and math.isfinite(self.sample_period)):
            raise ConfigError("sample_period must be finite and > 0")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    def __len__(self):
        return int(self.samples.size)

    def to_ndjson(self) -> str:
        """One-line JSON: {"n": N, "dt": sample_period, "samples": [...]}."""
        return json.dumps(
            {"n": len(self), "dt": self.sample_period, "samples": self.samples.tolist()},
            separators=(",", ":"),
        )


@dataclass(frozen=True)
class BaseSignalSpec:
    """Closed-form base signal: s_i = A * sin(2*pi*P*i/N) for i in [0, N)."""

    waveform: str = "sine"
    amplitude: float = 1.0
    periods: float = 1.0
    n_samples: int = 1000

    def __post_init__(self):
        if self.waveform != "sine":
            raise ConfigError(f"unknown waveform {self.waveform!r}")
        if not (self.amplitude > 0 and math.isfinite(self.amplitude)):
            raise ConfigError("amplitude must be finite and > 0")
        if not (self.periods > 0 and math.isfinite(self.periods)):
            raise ConfigError("periods must be finite and > 0")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise ConfigError("n_samples must be an integer >= 2")


def generate(spec: BaseSignalSpec) -> Signal:
    """Generate the deterministic base signal described by spec."""
    n = int(spec.n_samples)
    i = np.arange(n, dtype=np.float64)
    return Signal(spec.amplitude * np.sin(2.0 * np.pi * spec.periods * i / n))


@dataclass(frozen=True)
class PerturbationSpec:
    """Declarative toy-case transformation.

    kind: invert | scale | shift | zero | add_noise | jitter
    scale uses factor c; shift uses offset b; add_noise/jitter draw
    N(0, sigma^2) i.i.d. from a seeded generator (PCG64), so equal
    (seed, N) give bit-identical noise across runs.
    """

    kind: str
    c: float = 1.0
    b: float = 0.0
    sigma: float = 0.0
    seed: int = 0

    _KINDS = ("invert", "scale", "shift", "zero", "add_noise", "jitter")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ConfigError(f"unknown perturbation kind {self.kind!r}")
        if not math.isfinite(self.c):
            raise ConfigError("scale factor must be finite")
        if not math.isfinite(self.b):
            raise ConfigError("shift offset must be finite")
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ConfigError("sigma must be finite and >= 0")


def invert() -> PerturbationSpec:
    return PerturbationSpec("invert")


def scale(c: float) -> PerturbationSpec:
    return PerturbationSpec("scale", c=c)


def shift(b: float) -> PerturbationSpec:
    return PerturbationSpec("shift", b=b)


def zero() -> PerturbationSpec:
    return PerturbationSpec("zero")


def add_noise(sigma: float, seed: int = 0) -> PerturbationSpec:
    return PerturbationSpec("add_noise", sigma=sigma, seed=seed)


def jitter(sigma: float, seed: int = 0) -> PerturbationSpec:
    # same construction as add_noise, kept a distinct kind for reporting
    return PerturbationSpec("jitter", sigma=sigma, seed=seed)


def perturb(x: Signal, spec: PerturbationSpec) -> Signal:
    """Apply a perturbation to a signal, returning a new Signal."""
    s = x.samples
    if spec.kind == "invert":
        out = -s
    elif spec.kind == "scale":
        out = spec.c * s
    elif spec.kind == "shift":
        out = s + spec.b
    elif spec.kind == "zero":
        out = np.zeros_like(s)
    elif spec.kind in ("add_noise", "jitter"):
        rng = np.random.default_rng(spec.seed)
        out = s + spec.sigma * rng.standard_normal(s.size)
    else:  # unreachable, __post_init__ validates
        raise ConfigError(f"unknown perturbation kind {spec.kind!r}")
    return Signal(out, sample_period=x.sample_period)


def save_csv(x: Signal, path, header: str = "signal") -> None:
    """Write one sample per row, shortest round-trip decimal form."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        if header:
            f.write(header + "\n")
        for v in x.samples.tolist():
            f.write(repr(v) + "\n")


def load_csv(path, column=None) -> Signal:
    """Load a single-channel signal from a CSV file.

    column selects among named columns: None or an int gives a positional
    column (default 0) with header auto-detection; a str requires a header
    row containing that name. Values must parse as finite reals; the row
    index (1-based, counting the header) is reported on failure.
    """
    with open(path, "r", encoding="utf-8") as f:
        lines = [ln.rstrip("\n").rstrip("\r") for ln in f]
    rows = [ln for ln in lines if ln.strip() != ""]
    if not rows:
        raise ParseError(f"{path}: empty file")

    first = [c.strip() for c in rows[0].split(",")]
    idx = 0
    has_header = False
    if isinstance(column, str):
        if column not in first:
            raise ParseError(f"{path}: no column named {column!r} in header")
        idx = first.index(column)
        has_header = True
    else:
        if column is not None:
            idx = int(column)
        try:
            float(first[min(idx, len(first) - 1)])
        except ValueError:
            has_header = True

    data_rows = rows[1:] if has_header else rows
    if not data_rows:
        raise ParseError(f"{path}: no data rows")
    values = []
    for rownum, ln in enumerate(data_rows, start=2 if has_header else 1):
        cells = [c.strip() for c in ln.split(",")]
        if idx >= len(cells):
            raise ParseError(f"{path}: row {rownum} has no column {idx}")
        try:
            v = float(cells[idx])
        except ValueError:
            raise ParseError(f"{path}: row {rownum}: cannot parse {cells[idx]!r}") from None
        if not math.isfinite(v):
            raise NonFiniteError(f"{path}: row {rownum}: non-finite value {cells[idx]!r}")
        values.append(v)
    return Signal(np.array(values, dtype=np.float64))
