"""Dispersion and correlation statistics over paired metric samples.

One PairedSample holds a model output's (mse, sdsc) score pair. The
operations here quantify how concentrated sdsc is at a fixed mse level
(std and interquartile range inside an mse band) and how the two scores
correlate overall. A seeded synthetic generator with a known population
correlation provides an oracle for testing the estimators without any
model-training pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NonFiniteError, ParseError


@dataclass(frozen=True)
class PairedSample:
    mse_value: float
    sdsc_value: float

    def __post_init__(self):
        if not (math.isfinite(self.mse_value) and math.isfinite(self.sdsc_value)):
            raise NonFiniteError("paired sample values must be finite")
        if not 0.0 <= self.sdsc_value <= 1.0:
            raise ConfigError(f"sdsc_value {self.sdsc_value} outside [0, 1]")


def pearson(x, y) -> float:
    """Pearson correlation coefficient of two equal-length samples."""
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.size != b.size:
        raise ConfigError("samples must have equal length")
    if a.size < 2:
        raise ConfigError("need at least 2 samples for a correlation")
    da = a - a.mean()
    db = b - b.mean()
    denom = math.sqrt(float(np.sum(da * da)) * float(np.sum(db * db)))
    if denom == 0.0:
        raise ConfigError("zero variance: correlation undefined")
    return float(np.sum(da * db)) / denom


def quantile(values, q: float) -> float:
    """Linear-interpolation (inclusive) quantile of a sample.

    Position q*(n-1) in the sorted sample; fractional positions
    interpolate between the two neighbouring order statistics.
    """
    if not 0.0 <= q <= 1.0:
        raise ConfigError("q must be in [0, 1]")
    s = np.sort(np.asarray(values, dtype=np.float64))
    if s.size == 0:
        raise ConfigError("quantile of an empty sample")
    pos = q * (s.size - 1)
    lo = int(math.floor(pos))
    hi = int(math.ceil(pos))
    frac = pos - lo
    return float(s[lo] + frac * (s[hi] - s[lo]))


def iqr(values) -> float:
    return quantile(values, 0.75) - quantile(values, 0.25)


def band_stats(samples: list[PairedSample], center: float, eps: float) -> dict:
    """Std (ddof=1) and IQR of sdsc restricted to |mse - center| <= eps."""
    if len(samples) < 2:
        raise ConfigError(f"need at least 2 samples overall, got {len(samples)}")
    in_band = [s.sdsc_value for s in samples if abs(s.mse_value - center) <= eps]
    if len(in_band) < 2:
        raise ConfigError(
            f"need at least 2 samples in the band {center}+-{eps}, got {len(in_band)}"
        )
    arr = np.asarray(in_band, dtype=np.float64)
    return {
        "band_count": int(arr.size),
        "band_std": float(np.std(arr, ddof=1)),
        "band_iqr": iqr(arr),
    }


def sdsc_histogram(values, bins: int = 20) -> dict:
    """Fixed-width histogram of sdsc values over [0, 1]."""
    counts, edges = np.histogram(np.asarray(values, dtype=np.float64), bins=bins, range=(0.0, 1.0))
    return {"edges": edges.tolist(), "counts": counts.tolist()}


def synthetic_pairs(
    n: int,
    r: float = -0.3,
    seed: int = 0,
    mse_center: float = 1.5,
    mse_spread: float = 0.25,
    sdsc_center: float = 0.5,
    sdsc_spread: float = 0.08,
) -> list[PairedSample]:
    """Seeded generator with known population correlation r.

    Draws u, v ~ N(0,1) and sets mse = mse_center + mse_spread*u,
    sdsc = sdsc_center + sdsc_spread*(r*u + sqrt(1-r^2)*v); rows falling
    outside the valid ranges (mse <= 0 or sdsc outside [0,1]) are redrawn.
    With the defaults the rejection probability is negligible, so the
    sample correlation converges to r as n grows.
    """
    if not -1.0 <= r <= 1.0:
        raise ConfigError("r must be in [-1, 1]")
    if n < 1:
        raise ConfigError("n must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    tail = math.sqrt(1.0 - r * r)
    while len(out) < n:
        u = rng.standard_normal()
        v = rng.standard_normal()
        m = mse_center + mse_spread * u
        s = sdsc_center + sdsc_spread * (r * u + tail * v)
        if m <= 0.0 or not 0.0 <= s <= 1.0:
            continue
        out.append(PairedSample(m, s))
    return out


def save_pairs(samples: list[PairedSample], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("mse,sdsc\n")
        for s in samples:
            f.write(f"{s.mse_value!r},{s.sdsc_value!r}\n")


def load_pairs(path) -> list[PairedSample]:
    """Read a PairedSample CSV (header `mse,sdsc`)."""
    with open(path, "r", encoding="utf-8") as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    if not lines:
        raise ParseError(f"{path}: empty file")
    header = [c.strip().lower() for c in lines[0].split(",")]
    if header[:2] != ["mse", "sdsc"]:
        raise ParseError(f"{path}: expected header 'mse,sdsc', got {lines[0]!r}")
    out = []
    for rownum, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) < 2:
            raise ParseError(f"{path}: row {rownum}: expected two columns")
        try:
            m, s = float(cells[0]), float(cells[1])
        except ValueError:
            raise ParseError(f"{path}: row {rownum}: cannot parse values") from None
        out.append(PairedSample(m, s))
    if not out:
        raise ParseError(f"{path}: no data rows")
    return out
