"""Acceptance gate: one test per shipped guarantee, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
pass/fail lines as they execute.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from sigdice import (
    BaseSignalSpec,
    HeavisideMode,
    FixedWeights,
    LossConfig,
    dice,
    dtw,
    generate,
    grad_hybrid,
    grad_mae,
    grad_mse,
    grad_sdsc_loss,
    mae,
    mse,
    perturb,
    quantile,
    iqr,
    save_pairs,
    scale,
    sdsc,
    soft_dtw,
    synthetic_pairs,
    PairedSample,
)
from sigdice.harness import RunConfig, run, sensitivity_cases, table1_fixtures


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


# --- finite-difference oracle -------------------------------------------
# Central differences with per-coordinate step h_i = h_rel * (1 + |r_i|).
# Only coordinate i changes between the two evaluations, so the loss sums
# are updated incrementally; this keeps the full sweep O(N) in vector ops
# per pair instead of O(N^2).


def _sig(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _mse_plus_minus(e, r, h):
    sq = (r - e) ** 2
    s = np.sum(sq)
    n = r.size
    return (s - sq + (r + h - e) ** 2) / n, (s - sq + (r - h - e) ** 2) / n


def _sdsc_loss_plus_minus(e, r, alpha, eps, h):
    ae = np.abs(e)
    c = 2.0 * _sig(alpha * e * r) * np.minimum(ae, np.abs(r))
    d = ae + np.abs(r)
    num, den = np.sum(c), np.sum(d) + eps
    out = []
    for shifted in (r + h, r - h):
        cs = 2.0 * _sig(alpha * e * shifted) * np.minimum(ae, np.abs(shifted))
        ds = ae + np.abs(shifted)
        out.append(1.0 - (num - c + cs) / (den - d + ds))
    return out[0], out[1]


def _sample_smooth_pair(rng, n, gap=0.05):
    """Pair with every coordinate away from the |.| and min crossover kinks."""
    e = rng.uniform(0.1, 2.0, n) * rng.choice([-1.0, 1.0], n)
    r = rng.uniform(0.1, 2.0, n) * rng.choice([-1.0, 1.0], n)
    bad = np.abs(np.abs(e) - np.abs(r)) < gap
    while bad.any():
        k = int(bad.sum())
        r[bad] = rng.uniform(0.1, 2.0, k) * rng.choice([-1.0, 1.0], k)
        bad = np.abs(np.abs(e) - np.abs(r)) < gap
    return e, r


def _rel_err(analytic, fd):
    return float(np.max(np.abs(analytic - fd)) / max(float(np.max(np.abs(fd))), 1e-9))


# --- exhaustive alignment oracle ----------------------------------------


def _all_paths(n, m):
    paths = []

    def walk(i, j, cells):
        cells.append(i * m + j)
        if i == n - 1 and j == m - 1:
            paths.append(np.array(cells, dtype=np.intp))
        else:
            if i + 1 < n and j + 1 < m:
                walk(i + 1, j + 1, cells)
            if i + 1 < n:
                walk(i + 1, j, cells)
            if j + 1 < m:
                walk(i, j + 1, cells)
        cells.pop()

    walk(0, 0, [])
    return paths


def _all_seqs(n, alphabet):
    grids = np.meshgrid(*([np.asarray(alphabet)] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


class TestAcceptance:
    def test_metric_table_reconstruction(self):
        with criterion("metric table: mse/mae/sdsc columns within stated bounds, < 1 s"):
            t0 = time.perf_counter()
            cfg = RunConfig(command="table1")
            values = {}
            for label, e, r in table1_fixtures(cfg):
                values[label] = (mse(e, r), mae(e, r), sdsc(e, r))
            elapsed = time.perf_counter() - t0

            expect = {
                "Inverted": (0.0200, 0.1272),
                "0.5x Scaled": (0.1249, 0.3180),
                "2x Scaled": (0.4995, 0.6360),
                "Zero": (0.4995, 0.6360),
                "Positive Shifted": (1.0000, 1.0000),
                "Negative Shifted": (1.0000, 1.0000),
            }
            for label, (em, ea) in expect.items():
                assert values[label][0] == pytest.approx(em, abs=1e-3), label
                assert values[label][1] == pytest.approx(ea, abs=1e-3), label
            assert values["0.5x Scaled"][2] == pytest.approx(0.6667, abs=1e-4)
            assert values["2x Scaled"][2] == pytest.approx(0.6667, abs=1e-4)
            assert values["Inverted"][2] == 0.0
            assert values["Zero"][2] == 0.0
            analytic = 4.0 / (4.0 + 2.0 * math.pi)
            for label in ("Positive Shifted", "Negative Shifted"):
                assert values[label][2] == pytest.approx(0.3887, abs=2e-3)
                assert values[label][2] == pytest.approx(analytic, abs=1e-4)
            assert elapsed < 1.0, f"took {elapsed:.2f}s"

    def test_gradient_norm_table_reconstruction(self):
        with criterion("gradient-norm table: mae and mse norms within 5e-4"):
            cfg = RunConfig(command="sensitivity")
            e = generate(BaseSignalSpec(n_samples=1000))
            norms = {}
            for label, pspec in sensitivity_cases(cfg):
                r = perturb(e, pspec)
                norms[label] = (grad_mse(e, r).l2_norm, grad_mae(e, r).l2_norm)
            for label, (got_mse, got_mae) in norms.items():
                assert got_mae == pytest.approx(0.0316, abs=5e-4), label
            expect_mse = {
                "Inverted": 0.0894,
                "0.5x Scaled": 0.0223,
                "2x Scaled": 0.0447,
                "Zero": 0.0447,
                "Shifted": 0.0632,
            }
            for label, target in expect_mse.items():
                assert norms[label][0] == pytest.approx(target, abs=5e-4), label

    def test_alpha_ladder_reconstruction(self):
        with criterion("alpha ladder: norms within 2e-3 and alpha=10 sufficiency"):
            cfg = RunConfig(command="alpha-sweep")
            e = generate(BaseSignalSpec(n_samples=1000))
            cases = dict(sensitivity_cases(cfg))

            def norm(label, alpha):
                lc = LossConfig(heaviside=HeavisideMode.sigmoid(alpha), denom_epsilon=1e-8)
                return grad_sdsc_loss(e, perturb(e, cases[label]), lc).l2_norm

            for alpha in (1.0, 10.0, 100.0):
                assert norm("Zero", alpha) == 0.0
            expect = {
                "0.5x Scaled": (0.0289, 0.0437, 0.0436),
                "Inverted": (0.0091, 0.0082, 0.0047),
            }
            for label, targets in expect.items():
                for alpha, target in zip((1.0, 10.0, 100.0), targets):
                    assert norm(label, alpha) == pytest.approx(target, abs=2e-3), (label, alpha)
            for label in ("0.5x Scaled", "2x Scaled"):
                n1, n10, n100 = (norm(label, a) for a in (1.0, 10.0, 100.0))
                assert abs(n10 - n100) < abs(n1 - n100), label

    def test_gradcheck_suite(self):
        with criterion("gradcheck: analytic vs central differences, rel err < 1e-5, < 30 s"):
            t0 = time.perf_counter()
            h_rel = 1e-6
            worst = 0.0
            for n in (8, 64, 1000):
                rng = np.random.default_rng(1000 + n)
                for _ in range(100):
                    e, r = _sample_smooth_pair(rng, n)
                    h = h_rel * (1.0 + np.abs(r))

                    fd = (np.subtract(*_mse_plus_minus(e, r, h))) / (2.0 * h)
                    worst = max(worst, _rel_err(grad_mse(e, r).grad, fd))

                    for alpha in (1.0, 10.0, 100.0):
                        lc = LossConfig(heaviside=HeavisideMode.sigmoid(alpha), denom_epsilon=1e-8)
                        lp, lm = _sdsc_loss_plus_minus(e, r, alpha, 1e-8, h)
                        fd = (lp - lm) / (2.0 * h)
                        worst = max(worst, _rel_err(grad_sdsc_loss(e, r, lc).grad, fd))

                    lc = LossConfig(
                        heaviside=HeavisideMode.sigmoid(10.0),
                        denom_epsilon=1e-8,
                        weighting=FixedWeights(0.5, 0.5),
                    )
                    sp, sm = _sdsc_loss_plus_minus(e, r, 10.0, 1e-8, h)
                    mp, mm = _mse_plus_minus(e, r, h)
                    fd = (0.5 * sp + 0.5 * mp - 0.5 * sm - 0.5 * mm) / (2.0 * h)
                    worst = max(worst, _rel_err(grad_hybrid(e, r, lc).grad, fd))
            elapsed = time.perf_counter() - t0
            assert worst < 1e-5, f"max relative error {worst:.3g}"
            assert elapsed < 30.0, f"took {elapsed:.1f}s"

    def test_property_suite(self):
        with criterion("properties: bounds, symmetry, scale law, mask duality, alignment bounds, exhaustive dtw"):
            rng = np.random.default_rng(77)

            for _ in range(10_000):
                n = int(rng.integers(1, 24))
                a = rng.standard_normal(n) * rng.choice([0.0, 0.5, 1.0, 100.0])
                b = rng.standard_normal(n) * rng.choice([0.0, 0.5, 1.0, 100.0])
                v = sdsc(a, b)
                assert 0.0 <= v <= 1.0

            for _ in range(1000):
                a = rng.standard_normal(16)
                b = rng.standard_normal(16)
                assert abs(sdsc(a, b) - sdsc(b, a)) <= 1e-12

            for _ in range(50):
                n = int(rng.integers(2, 40))
                x = rng.uniform(0.05, 3.0, n) * rng.choice([-1.0, 1.0], n)
                c = float(np.exp(rng.uniform(np.log(0.02), np.log(50.0))))
                expect = 2.0 * min(1.0, c) / (1.0 + c)
                assert sdsc(x, c * x, HeavisideMode.exact(), eps=0.0) == pytest.approx(expect, abs=1e-9)

            for _ in range(200):
                n = int(rng.integers(1, 25))
                ma = rng.integers(0, 2, n).astype(bool)
                mb = rng.integers(0, 2, n).astype(bool)
                assert sdsc(ma.astype(float), mb.astype(float), HeavisideMode.exact(), eps=0.0) == dice(ma, mb)

            for _ in range(200):
                na, nb = (int(v) for v in rng.integers(2, 11, 2))
                a = rng.standard_normal(na)
                b = rng.standard_normal(nb)
                hard = dtw(a, b, local_cost="squared")
                assert soft_dtw(a, b, gamma=1.0) <= hard + 1e-12
                assert abs(soft_dtw(a, b, gamma=1e-3) - hard) < 1e-2

            alphabet = (0.0, 0.5, 1.0)
            checked = 0
            for n in range(1, 6):
                seqs_a = _all_seqs(n, alphabet)
                for m in range(1, 6):
                    seqs_b = _all_seqs(m, alphabet)
                    cost = np.abs(
                        seqs_a[:, None, :, None] - seqs_b[None, :, None, :]
                    ).reshape(len(seqs_a) * len(seqs_b), n * m)
                    best = None
                    for p in _all_paths(n, m):
                        pc = cost[:, p].sum(axis=1)
                        best = pc if best is None else np.minimum(best, pc)
                    lib = np.array([dtw(a, b) for a in seqs_a for b in seqs_b])
                    assert np.array_equal(lib, best), (n, m)
                    checked += lib.size
            assert checked == 363**2

    def test_stats_oracle(self, tmp_path):
        with criterion("stats: exact-linear pearson, quantile oracle, synthetic r recovery"):
            ms = np.linspace(1.45, 1.55, 21)
            samples = [PairedSample(float(m), float(0.9 - 0.3 * m)) for m in ms]
            p = tmp_path / "linear.csv"
            save_pairs(samples, p)
            report, _ = run(RunConfig(command="stats", samples_path=str(p)))
            assert report.rows[0]["pearson_r"] == pytest.approx(-1.0, abs=1e-12)

            rng = np.random.default_rng(55)
            for _ in range(100):
                v = rng.standard_normal(int(rng.integers(1, 1001)))
                q = float(rng.uniform(0.0, 1.0))
                s = np.sort(v)
                pos = q * (s.size - 1)
                lo, hi = int(math.floor(pos)), int(math.ceil(pos))
                assert quantile(v, q) == s[lo] + (pos - lo) * (s[hi] - s[lo])
            assert iqr([1.0, 2.0, 3.0, 4.0]) == 1.5

            report, _ = run(RunConfig(command="stats", synthetic_n=10_000))
            assert report.rows[0]["pearson_r"] == pytest.approx(-0.3, abs=0.03)

    def test_determinism(self, tmp_path):
        with criterion("determinism: byte-identical CSV for every command"):
            from sigdice import save_csv

            fe, fr = tmp_path / "e.csv", tmp_path / "r.csv"
            e = generate(BaseSignalSpec(n_samples=128))
            save_csv(e, fe)
            save_csv(perturb(e, scale(0.5)), fr)
            configs = [
                RunConfig(command="table1"),
                RunConfig(command="sensitivity"),
                RunConfig(command="alpha-sweep"),
                RunConfig(command="stats", synthetic_n=2000),
                RunConfig(command="compare", file_e=str(fe), file_r=str(fr), with_grads=True),
            ]
            for cfg in configs:
                first = run(cfg)[1]
                second = run(cfg)[1]
                assert first.encode() == second.encode(), cfg.command
