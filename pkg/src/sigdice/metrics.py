"""Similarity and distance metrics over sampled signals.

Implements the Signal Dice similarity coefficient (sdsc) in exact and
smooth (sigmoid-gated) forms, its loss form, a hybrid loss combining it
with MSE, the set Dice coefficient it generalizes, and the baseline
distances MSE, MAE, DTW and soft-DTW.

The exact coefficient for two equal-length signals e, r is

    sdsc(e, r) = 2 * sum_s H(e_s * r_s) * min(|e_s|, |r_s|)
                 / (sum_s (|e_s| + |r_s|) + eps)

with H the Heaviside step (H(x) = 1 iff x > 0, so H(0) = 0). The
numerator is the sign-matched overlapped amplitude; the denominator the
total absolute amplitude. The smooth form replaces H by the sigmoid
1 / (1 + exp(-alpha * x)) so the quantity is differentiable everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, LengthMismatchError, NonFiniteError
from .signals import Signal


def _as_samples(x) -> np.ndarray:
    """Accept a Signal or any 1-D array-like of finite reals."""
    if isinstance(x, Signal):
        return x.samples
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ConfigError("expected a 1-D sequence of samples")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("input contains non-finite samples")
    return arr


def _pair(e, r) -> tuple[np.ndarray, np.ndarray]:
    a, b = _as_samples(e), _as_samples(r)
    if a.size != b.size:
        raise LengthMismatchError(f"signal lengths differ: {a.size} != {b.size}")
    if a.size == 0:
        raise ConfigError("signals must be non-empty")
    return a, b


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # two-branch form, stable for large |x|
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass(frozen=True)
class HeavisideMode:
    """Numerator gate: exact step or sigmoid(alpha) surrogate."""

    variant: str = "exact"
    alpha: float = 0.0

    def __post_init__(self):
        if self.variant not in ("exact", "sigmoid"):
            raise ConfigError(f"unknown Heaviside variant {self.variant!r}")
        if self.variant == "sigmoid" and not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ConfigError("sigmoid mode requires finite alpha > 0")

    @classmethod
    def exact(cls) -> "HeavisideMode":
        return cls("exact")

    @classmethod
    def sigmoid(cls, alpha: float) -> "HeavisideMode":
        return cls("sigmoid", alpha=float(alpha))


@dataclass(frozen=True)
class FixedWeights:
    lambda_sdsc: float = 0.5
    lambda_mse: float = 0.5

    def __post_init__(self):
        ok = (
            self.lambda_sdsc >= 0
            and self.lambda_mse >= 0
            and math.isfinite(self.lambda_sdsc)
            and math.isfinite(self.lambda_mse)
        )
        if not ok:
            raise ConfigError("fixed weights must be finite and >= 0")
        if self.lambda_sdsc == 0 and self.lambda_mse == 0:
            raise ConfigError("fixed weights must not both be zero")


@dataclass(frozen=True)
class AdaptiveWeights:
    """Uncertainty-based weighting; sigmas are caller-owned learnable scalars.

    total = sum_i [ L_i / (2 sigma_i^2) + log(1 + sigma_i^2) ]

    The regularized log(1 + sigma^2) term keeps the objective bounded
    below as sigma grows, unlike the plain log sigma form.
    """

    sigma_sdsc: float = 1.0
    sigma_mse: float = 1.0

    def __post_init__(self):
        ok = (
            self.sigma_sdsc > 0
            and self.sigma_mse > 0
            and math.isfinite(self.sigma_sdsc)
            and math.isfinite(self.sigma_mse)
        )
        if not ok:
            raise ConfigError("adaptive sigmas must be finite and > 0")


@dataclass(frozen=True)
class LossConfig:
    heaviside: HeavisideMode = field(default_factory=HeavisideMode.exact)
    denom_epsilon: float = 1e-8
    weighting: FixedWeights | AdaptiveWeights = field(default_factory=FixedWeights)

    def __post_init__(self):
        if not (self.denom_epsilon >= 0 and math.isfinite(self.denom_epsilon)):
            raise ConfigError("denom_epsilon must be finite and >= 0")


@dataclass(frozen=True)
class MetricReport:
    """Full metric panel for one signal pair plus the config that produced it."""

    mse: float
    mae: float
    dtw: float
    soft_dtw: float
    sdsc: float
    sdsc_smooth: float
    n: int
    config: dict


def dice(mask_a, mask_b) -> float:
    """Set Dice coefficient 2|A and B| / (|A| + |B|) over boolean masks.

    Defined as 1.0 when both masks are empty (all false).
    """
    a = np.asarray(mask_a, dtype=bool)
    b = np.asarray(mask_b, dtype=bool)
    if a.size != b.size:
        raise LengthMismatchError(f"mask lengths differ: {a.size} != {b.size}")
    total = int(a.sum()) + int(b.sum())
    if total == 0:
        return 1.0
    return 2.0 * int((a & b).sum()) / total


def mse(e, r) -> float:
    a, b = _pair(e, r)
    d = b - a
    return float(np.mean(d * d))


def mae(e, r) -> float:
    a, b = _pair(e, r)
    return float(np.mean(np.abs(b - a)))


def sdsc(e, r, mode: HeavisideMode | None = None, eps: float = 1e-8) -> float:
    """Signal Dice similarity coefficient.

    Exact mode is clamped to [0, 1]; sigmoid mode is reported unclamped
    (it may exceed the bounds negligibly near sign changes). Two all-zero
    signals are identical, so the coefficient is 1.0 by convention.
    """
    if mode is None:
        mode = HeavisideMode.exact()
    if not (eps >= 0 and math.isfinite(eps)):
        raise ConfigError("eps must be finite and >= 0")
    a, b = _pair(e, r)
    if not np.any(a) and not np.any(b):
        return 1.0
    s = a * b
    m = np.minimum(np.abs(a), np.abs(b))
    denom = float(np.sum(np.abs(a) + np.abs(b))) + eps
    if mode.variant == "exact":
        num = 2.0 * float(np.sum(np.where(s > 0, m, 0.0)))
        return min(1.0, max(0.0, num / denom))
    num = 2.0 * float(np.sum(_sigmoid(mode.alpha * s) * m))
    return num / denom


def sdsc_loss(e, r, cfg: LossConfig | None = None) -> float:
    """1 - sdsc under the config's Heaviside mode and epsilon."""
    if cfg is None:
        cfg = LossConfig()
    return 1.0 - sdsc(e, r, cfg.heaviside, cfg.denom_epsilon)


def hybrid_loss(e, r, cfg: LossConfig) -> tuple[float, dict]:
    """Weighted combination of the sdsc loss and MSE.

    Fixed weighting returns lambda_sdsc * L_sdsc + lambda_mse * L_mse.
    Adaptive weighting returns sum_i [L_i / (2 sigma_i^2) + log(1 + sigma_i^2)]
    together with d(total)/d(sigma_i) in parts["d_sigma"], so a training
    loop can update the caller-owned sigmas; this library never owns the
    optimization loop.
    """
    l_sdsc = sdsc_loss(e, r, cfg)
    l_mse = mse(e, r)
    w = cfg.weighting
    if isinstance(w, FixedWeights):
        total = w.lambda_sdsc * l_sdsc + w.lambda_mse * l_mse
        parts = {
            "l_sdsc": l_sdsc,
            "l_mse": l_mse,
            "effective_weights": (w.lambda_sdsc, w.lambda_mse),
        }
        return total, parts
    ws = 1.0 / (2.0 * w.sigma_sdsc**2)
    wm = 1.0 / (2.0 * w.sigma_mse**2)
    total = (
        l_sdsc * ws
        + math.log(1.0 + w.sigma_sdsc**2)
        + l_mse * wm
        + math.log(1.0 + w.sigma_mse**2)
    )
    d_sigma = (
        -l_sdsc / w.sigma_sdsc**3 + 2.0 * w.sigma_sdsc / (1.0 + w.sigma_sdsc**2),
        -l_mse / w.sigma_mse**3 + 2.0 * w.sigma_mse / (1.0 + w.sigma_mse**2),
    )
    parts = {
        "l_sdsc": l_sdsc,
        "l_mse": l_mse,
        "effective_weights": (ws, wm),
        "d_sigma": d_sigma,
    }
    return total, parts


# DTW cells below this size run a plain-Python DP, which beats the
# vectorized anti-diagonal path on tiny inputs by a wide margin.
_SMALL_DP_CELLS = 1024


def _local_cost(a, b, local_cost):
    if local_cost == "abs":
        return np.abs(a[:, None] - b[None, :])
    if local_cost == "squared":
        d = a[:, None] - b[None, :]
        return d * d
    raise ConfigError(f"unknown local cost {local_cost!r}")


def _dtw_matrix_small(cost):
    n, m = cost.shape
    inf = math.inf
    rows = cost.tolist()
    prev = [0.0] + [inf] * m
    full = [prev]
    for i in range(n):
        ci = rows[i]
        cur = [inf] * (m + 1)
        for j in range(1, m + 1):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = ci[j - 1] + best
        full.append(cur)
        prev = cur
    return np.array(full)


def _dtw_matrix_diag(cost):
    # anti-diagonal sweep: every cell on diagonal k depends only on
    # diagonals k-1 and k-2, so each diagonal updates as one vector op
    n, m = cost.shape
    D = np.full((n + 1, m + 1), np.inf)
    D[0, 0] = 0.0
    for k in range(2, n + m + 1):
        lo = max(1, k - m)
        hi = min(n, k - 1)
        ii = np.arange(lo, hi + 1)
        jj = k - ii
        step = np.minimum(np.minimum(D[ii - 1, jj], D[ii, jj - 1]), D[ii - 1, jj - 1])
        D[ii, jj] = cost[ii - 1, jj - 1] + step
    return D


def _dtw_matrix(cost):
    if cost.size <= _SMALL_DP_CELLS:
        return _dtw_matrix_small(cost)
    return _dtw_matrix_diag(cost)


def _path_length(D):
    # walk back from (n, m); ties prefer diagonal, then the row step
    n, m = D.shape[0] - 1, D.shape[1] - 1
    i, j = n, m
    length = 1
    while (i, j) != (1, 1):
        moves = ((D[i - 1, j - 1], i - 1, j - 1), (D[i - 1, j], i - 1, j), (D[i, j - 1], i, j - 1))
        _, i, j = min(moves, key=lambda t: t[0])
        length += 1
    return length


def dtw(e, r, local_cost: str = "abs", normalize: str = "none") -> float:
    """Classic dynamic time warping distance with steps {(1,0),(0,1),(1,1)}.

    normalize: "none" for the raw cumulative cost, "path_length" to divide
    by the optimal warping path length, "mean" to divide by max(len(e), len(r)).
    """
    a, b = _as_samples(e), _as_samples(r)
    if a.size == 0 or b.size == 0:
        raise ConfigError("signals must be non-empty")
    D = _dtw_matrix(_local_cost(a, b, local_cost))
    total = float(D[-1, -1])
    if normalize == "none":
        return total
    if normalize == "path_length":
        return total / _path_length(D)
    if normalize == "mean":
        return total / max(a.size, b.size)
    raise ConfigError(f"unknown normalization {normalize!r}")


def soft_dtw(e, r, gamma: float, local_cost: str = "squared") -> float:
    """Soft-DTW: the DTW program with min replaced by soft-min.

    softmin_g(a, b, c) = -g * log(exp(-a/g) + exp(-b/g) + exp(-c/g))

    Converges to dtw(e, r, squared) as gamma -> 0+ and never exceeds it
    (the soft-min is a lower bound of the min). May be negative.
    """
    if not (gamma > 0 and math.isfinite(gamma)):
        raise ConfigError("gamma must be finite and > 0")
    a, b = _as_samples(e), _as_samples(r)
    if a.size == 0 or b.size == 0:
        raise ConfigError("signals must be non-empty")
    cost = _local_cost(a, b, local_cost)
    n, m = cost.shape
    D = np.full((n + 1, m + 1), np.inf)
    D[0, 0] = 0.0
    for k in range(2, n + m + 1):
        lo = max(1, k - m)
        hi = min(n, k - 1)
        ii = np.arange(lo, hi + 1)
        jj = k - ii
        x1 = D[ii - 1, jj]
        x2 = D[ii, jj - 1]
        x3 = D[ii - 1, jj - 1]
        mn = np.minimum(np.minimum(x1, x2), x3)
        # shift by the min before exponentiating; exp(-(inf - mn)) -> 0
        z = (
            np.exp(-(x1 - mn) / gamma)
            + np.exp(-(x2 - mn) / gamma)
            + np.exp(-(x3 - mn) / gamma)
        )
        D[ii, jj] = cost[ii - 1, jj - 1] + mn - gamma * np.log(z)
    return float(D[n, m])


@dataclass(frozen=True)
class PanelConfig:
    """Settings for the full metric panel."""

    alpha: float = 10.0
    gamma: float = 1.0
    eps: float = 1e-8
    dtw_cost: str = "abs"
    dtw_normalize: str = "path_length"


def metric_panel(e, r, cfg: PanelConfig | None = None) -> MetricReport:
    """Evaluate every metric on one pair and return the combined report."""
    if cfg is None:
        cfg = PanelConfig()
    a, b = _pair(e, r)
    return MetricReport(
        mse=mse(a, b),
        mae=mae(a, b),
        dtw=dtw(a, b, cfg.dtw_cost, cfg.dtw_normalize),
        soft_dtw=soft_dtw(a, b, cfg.gamma),
        sdsc=sdsc(a, b, HeavisideMode.exact(), cfg.eps),
        sdsc_smooth=sdsc(a, b, HeavisideMode.sigmoid(cfg.alpha), cfg.eps),
        n=int(a.size),
        config={
            "alpha": cfg.alpha,
            "gamma": cfg.gamma,
            "eps": cfg.eps,
            "dtw_cost": cfg.dtw_cost,
            "dtw_normalize": cfg.dtw_normalize,
        },
    )
