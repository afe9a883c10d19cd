"""Emit reference cases for the bindings' differential tests.

Writes NDJSON to stdout. Every case carries its inputs plus the value
the core library computes in-process; the TypeScript suite replays the
inputs through the bindings and requires bit-identical results. JSON
floats are shortest round-trip decimals, so both directions preserve
the exact f64 bits.

Case kinds:
  meta      {"kind":"meta","version":1,"count":N}
  sdsc      {"kind":"sdsc","alpha":f|null,"eps":f,"e":[...],"r":[...],"value":f}
  loss_grad {"kind":"loss_grad","alpha":f|null,"eps":f,
             "weighting":"fixed"|"adaptive","w":[f,f],"e":[...],"r":[...],
             "loss":f,"grad":[...],"d_sigma":[f,f]|null,"mse_grad":[...]?}
  fixture   sdsc case with a "label" for the named waveform checks

alpha null means the exact gate; a number means the sigmoid gate.
"""

import json
import sys

import numpy as np

from sigdice.gradients import grad_hybrid, grad_mse
from sigdice.metrics import (
    AdaptiveWeights,
    FixedWeights,
    HeavisideMode,
    LossConfig,
    hybrid_loss,
    sdsc,
)
from sigdice.signals import BaseSignalSpec, generate, invert, perturb, scale, shift

PAIR_LENGTHS = (3, 8, 33, 128)
PAIRS_PER_CONFIG = 100

SDSC_CONFIGS = [
    # (alpha, eps); alpha None selects the exact gate
    (None, 1e-8),
    (None, 0.0),
    (1.0, 1e-8),
    (10.0, 1e-8),
    (100.0, 0.0),
]

LOSS_CONFIGS = [
    # (alpha, eps, weighting kind, (w1, w2))
    (10.0, 1e-8, "fixed", (0.5, 0.5)),
    (10.0, 1e-8, "fixed", (1.0, 0.0)),
    (None, 1e-8, "fixed", (0.0, 1.0)),
    (100.0, 0.0, "fixed", (0.25, 0.75)),
    (10.0, 1e-8, "adaptive", (0.8, 1.3)),
]


def heaviside(alpha):
    return HeavisideMode.exact() if alpha is None else HeavisideMode.sigmoid(alpha)


def draw_pair(rng, n):
    e = rng.uniform(-2.0, 2.0, n)
    r = rng.uniform(-2.0, 2.0, n)
    # exact zeros exercise the gate's both-zero and one-zero branches
    e[rng.random(n) < 0.1] = 0.0
    r[rng.random(n) < 0.1] = 0.0
    return e, r


def sdsc_case(alpha, eps, e, r):
    return {
        "kind": "sdsc",
        "alpha": alpha,
        "eps": eps,
        "e": e.tolist(),
        "r": r.tolist(),
        "value": sdsc(e, r, heaviside(alpha), eps),
    }


def loss_case(alpha, eps, weighting, w, e, r):
    if weighting == "fixed":
        cfg_w = FixedWeights(w[0], w[1])
    else:
        cfg_w = AdaptiveWeights(w[0], w[1])
    cfg = LossConfig(heaviside=heaviside(alpha), denom_epsilon=eps, weighting=cfg_w)
    total, _ = hybrid_loss(e, r, cfg)
    report = grad_hybrid(e, r, cfg)
    case = {
        "kind": "loss_grad",
        "alpha": alpha,
        "eps": eps,
        "weighting": weighting,
        "w": list(w),
        "e": e.tolist(),
        "r": r.tolist(),
        "loss": total,
        "grad": report.grad.tolist(),
        "d_sigma": list(report.d_sigma) if report.d_sigma is not None else None,
    }
    if weighting == "fixed" and w == (0.0, 1.0):
        case["mse_grad"] = grad_mse(e, r).grad.tolist()
    return case


def fixture_cases():
    base = generate(BaseSignalSpec(n_samples=1000)).samples
    variants = [
        ("identity_eps0", base, 0.0),
        ("half_scale", perturb(generate(BaseSignalSpec(n_samples=1000)), scale(0.5)).samples, 1e-8),
        ("inverted", perturb(generate(BaseSignalSpec(n_samples=1000)), invert()).samples, 1e-8),
        ("shift_plus1", perturb(generate(BaseSignalSpec(n_samples=1000)), shift(1.0)).samples, 1e-8),
    ]
    for label, r, eps in variants:
        case = sdsc_case(None, eps, base, r)
        case["kind"] = "fixture"
        case["label"] = label
        yield case
    # one large loss pair keeps the gradient path covered at n=1000
    yield loss_case(10.0, 1e-8, "fixed", (0.5, 0.5), base, variants[1][1])


def main():
    rng = np.random.default_rng(20260814)
    cases = []
    for alpha, eps in SDSC_CONFIGS:
        for i in range(PAIRS_PER_CONFIG):
            e, r = draw_pair(rng, PAIR_LENGTHS[i % len(PAIR_LENGTHS)])
            cases.append(sdsc_case(alpha, eps, e, r))
    for alpha, eps, weighting, w in LOSS_CONFIGS:
        for i in range(PAIRS_PER_CONFIG):
            e, r = draw_pair(rng, PAIR_LENGTHS[i % len(PAIR_LENGTHS)])
            cases.append(loss_case(alpha, eps, weighting, w, e, r))
    cases.extend(fixture_cases())

    out = sys.stdout
    out.write(json.dumps({"kind": "meta", "version": 1, "count": len(cases)}) + "\n")
    for case in cases:
        out.write(json.dumps(case, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
