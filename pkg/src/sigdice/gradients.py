"""Analytic gradients of the losses w.r.t. the candidate signal.

Each grad_* operation differentiates its loss with respect to the second
(candidate / reconstruction) argument r, never the reference e. A central
finite-difference oracle and the perturbation sensitivity table used for
the gradient-norm reports live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NonFiniteError
from .metrics import (
    AdaptiveWeights,
    FixedWeights,
    HeavisideMode,
    LossConfig,
    _pair,
    _sigmoid,
)
from .signals import BaseSignalSpec, PerturbationSpec, generate, perturb


@dataclass(frozen=True)
class GradientReport:
    """Gradient vector d(loss)/dr plus its L2 norm and config snapshot."""

    metric: str
    grad: np.ndarray
    l2_norm: float
    config: dict
    d_sigma: tuple | None = None  # adaptive-weighting extras, else None


def _report(metric, grad, config, d_sigma=None) -> GradientReport:
    norm = float(np.sqrt(np.sum(grad * grad)))
    return GradientReport(metric=metric, grad=grad, l2_norm=norm, config=config, d_sigma=d_sigma)


def grad_mse(e, r) -> GradientReport:
    """d/dr_i mean((r - e)^2) = 2 (r_i - e_i) / N."""
    a, b = _pair(e, r)
    g = 2.0 * (b - a) / b.size
    return _report("mse", g, {})


def grad_mae(e, r) -> GradientReport:
    """d/dr_i mean(|r - e|) = sign(r_i - e_i) / N, with sign(0) = 0."""
    a, b = _pair(e, r)
    g = np.sign(b - a) / b.size
    return _report("mae", g, {})


def _grad_sdsc_core(a, b, mode: HeavisideMode, eps: float) -> np.ndarray:
    s = a * b
    abs_a = np.abs(a)
    abs_b = np.abs(b)
    m = np.minimum(abs_a, abs_b)
    if mode.variant == "sigmoid":
        H = _sigmoid(mode.alpha * s)
        Hp = mode.alpha * H * (1.0 - H)
    else:
        # exact-mode subgradient: the step is treated as locally constant
        H = (s > 0).astype(np.float64)
        Hp = np.zeros_like(s)
    # min'(|r|) w.r.t. r: ties route the derivative to the candidate
    # branch (|r| <= |e|), which also keeps a zero candidate at zero
    # gradient since sign(0) = 0
    dm = np.sign(b) * (abs_b <= abs_a)
    P = 2.0 * float(np.sum(H * m))
    Q = float(np.sum(abs_a + abs_b)) + eps
    dP = 2.0 * (Hp * a * m + H * dm)
    dQ = np.sign(b)
    # loss = 1 - P/Q, so d(loss)/dr = -(dP*Q - P*dQ)/Q^2
    return -(dP * Q - P * dQ) / (Q * Q)


def grad_sdsc_loss(e, r, cfg: LossConfig | None = None) -> GradientReport:
    """Analytic gradient of the sdsc loss 1 - sdsc(e, r).

    Sigmoid mode is differentiable everywhere. Exact mode returns the
    documented subgradient in which the step function contributes no
    derivative (only the min term and the denominator do).
    """
    if cfg is None:
        cfg = LossConfig(heaviside=HeavisideMode.sigmoid(10.0))
    a, b = _pair(e, r)
    if not np.any(a) and not np.any(b):
        g = np.zeros_like(b)  # both-zero pair sits at the conventional constant 1.0
    else:
        g = _grad_sdsc_core(a, b, cfg.heaviside, cfg.denom_epsilon)
    config = {
        "heaviside": cfg.heaviside.variant,
        "alpha": cfg.heaviside.alpha,
        "eps": cfg.denom_epsilon,
    }
    return _report("sdsc_loss", g, config)


def grad_hybrid(e, r, cfg: LossConfig) -> GradientReport:
    """Gradient of the hybrid loss; adaptive mode also fills d_sigma."""
    from .metrics import mse, sdsc_loss  # loss values needed for d_sigma

    gs = grad_sdsc_loss(e, r, cfg).grad
    gm = grad_mse(e, r).grad
    w = cfg.weighting
    config = {
        "heaviside": cfg.heaviside.variant,
        "alpha": cfg.heaviside.alpha,
        "eps": cfg.denom_epsilon,
    }
    if isinstance(w, FixedWeights):
        g = w.lambda_sdsc * gs + w.lambda_mse * gm
        config["weights"] = (w.lambda_sdsc, w.lambda_mse)
        return _report("hybrid", g, config)
    ws = 1.0 / (2.0 * w.sigma_sdsc**2)
    wm = 1.0 / (2.0 * w.sigma_mse**2)
    g = ws * gs + wm * gm
    l_s = sdsc_loss(e, r, cfg)
    l_m = mse(e, r)
    d_sigma = (
        -l_s / w.sigma_sdsc**3 + 2.0 * w.sigma_sdsc / (1.0 + w.sigma_sdsc**2),
        -l_m / w.sigma_mse**3 + 2.0 * w.sigma_mse / (1.0 + w.sigma_mse**2),
    )
    config["weights"] = (ws, wm)
    return _report("hybrid", g, config, d_sigma=d_sigma)


def finite_difference(loss_fn, e, r, h_rel: float = 1e-6) -> np.ndarray:
    """Central finite differences of loss_fn(e, r) w.r.t. each r_i.

    Step per coordinate is h_i = h_rel * (1 + |r_i|), mixing an absolute
    floor with relative scaling so truncation and round-off stay balanced
    for unit-scale signals.
    """
    if not (h_rel > 0 and math.isfinite(h_rel)):
        raise ConfigError("h_rel must be finite and > 0")
    a, b = _pair(e, r)
    g = np.empty_like(b)
    for i in range(b.size):
        h = h_rel * (1.0 + abs(b[i]))
        rp = b.copy()
        rm = b.copy()
        rp[i] += h
        rm[i] -= h
        fp = float(loss_fn(a, rp))
        fm = float(loss_fn(a, rm))
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise NonFiniteError(f"loss evaluated non-finite at coordinate {i}")
        g[i] = (fp - fm) / (2.0 * h)
    return g


def sensitivity_table(base: BaseSignalSpec, cases, configs) -> list[dict]:
    """Gradient-norm table: one row per perturbation, one column per loss.

    cases: list of (label, PerturbationSpec)
    configs: list of (column_label, fn) where fn(e, r) -> GradientReport
    """
    e = generate(base)
    rows = []
    for label, pspec in cases:
        r = perturb(e, pspec)
        row = {"case": label}
        for col, fn in configs:
            row[col] = fn(e, r).l2_norm
        rows.append(row)
    return rows
