import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carpetdim import dimension, gallery
from carpetdim.errors import DegenerateInput, NoBracket, NonFinite, OptimizerFailure
from carpetdim.numerics import (
    RootConfig,
    SimplexOptConfig,
    _ascend,
    _logits,
    fit_line,
    grad_check,
    maximize_simplex,
    solve_monotone,
)


def test_solve_monotone_examples():
    assert solve_monotone(lambda s: 3 * (1 / 3) ** s - 1, 0, 2) == pytest.approx(1, abs=1e-12)
    golden = -math.log2((math.sqrt(5) - 1) / 2)
    assert solve_monotone(lambda s: 2 ** -s + 4 ** -s - 1, 0, 2) == pytest.approx(golden, abs=1e-12)
    assert golden == pytest.approx(0.6942419, abs=1e-7)
    smiley = solve_monotone(lambda s: 0.2 * (5 * 0.1 ** (s - 1) + 3 * 0.13 ** (s - 1)) - 1, 0, 2)
    assert round(smiley, 5) == 1.21340


def test_solve_monotone_errors():
    with pytest.raises(NoBracket):
        solve_monotone(lambda x: x + 1, 0, 1)
    with pytest.raises(NonFinite):
        solve_monotone(lambda x: math.nan, 0, 1)
    with pytest.raises(ValueError):
        RootConfig(abs_tol=0)
    with pytest.raises(ValueError):
        SimplexOptConfig(starts=0)


@settings(max_examples=50, deadline=None)
@given(root=st.floats(0.05, 1.95), lo=st.floats(0, 0.04), hi=st.floats(1.96, 10))
def test_bracket_widening(root, lo, hi):
    def f(x):
        return x ** 3 - root ** 3

    assert solve_monotone(f, lo, hi) == pytest.approx(solve_monotone(f, 0.0, 2.0), abs=2e-12)


def test_maximize_entropy():
    def h(p):
        return -float(np.sum(p * np.log(p)))

    p, v = maximize_simplex(h, 4, grad=lambda p: -np.log(p) - 1)
    assert p == pytest.approx(np.full(4, 0.25), abs=1e-8)
    assert v == pytest.approx(math.log(4), abs=1e-12)
    assert np.all(p > 0)


def test_maximize_d_fm_carpet():
    s = gallery.build("fm_carpet", [0.3]).system()
    p, v = maximize_simplex(lambda p: dimension.dim_formula_D(s, p), 6,
                            grad=lambda p: dimension.dim_formula_D_grad(s, p))
    assert v == pytest.approx(1 - math.log(2) / math.log(0.3), abs=1e-10)
    assert p == pytest.approx(np.full(6, 1 / 6), abs=1e-6)


def test_maximize_d_mcmullen_against_grid():
    s = gallery.build("mcmullen").system()
    p, v = maximize_simplex(lambda p: dimension.dim_formula_D(s, p), 3)
    # coarse grid scan oracle, about 10^4 interior points
    grid = np.linspace(0.005, 0.995, 141)
    best = -math.inf
    for p1 in grid:
        for p2 in grid:
            if p1 + p2 < 0.999:
                best = max(best, dimension.dim_formula_D(s, [p1, p2, 1 - p1 - p2]))
    closed = math.log(1 + math.sqrt(2)) / math.log(2)
    assert v == pytest.approx(closed, abs=1e-10)
    assert v >= best - 1e-12
    assert best == pytest.approx(closed, abs=1e-3)


def test_monotone_improvement():
    s = gallery.build("smiley").system()

    def g(p):
        return dimension.dim_formula_D(s, p)

    cfg = SimplexOptConfig(starts=8, seed=5)
    _, v = maximize_simplex(g, 8, cfg)
    rng = np.random.default_rng(cfg.seed)
    starts = [np.zeros(8)] + list(rng.normal(scale=1.5, size=(cfg.starts, 8)))
    for z in starts:
        p = np.exp(z - z.max())
        assert v >= g(p / p.sum()) - 1e-15


def test_ascent_never_decreases():
    s = gallery.build("smiley").system()
    z0 = _logits(np.arange(1, 9, dtype=float))
    p0 = np.exp(z0) / np.exp(z0).sum()
    _, _, val = _ascend(lambda p: dimension.dim_formula_D(s, p),
                        lambda p: dimension.dim_formula_D_grad(s, p), z0, SimplexOptConfig())
    assert val >= dimension.dim_formula_D(s, p0)


def test_optimizer_failure():
    with pytest.raises(OptimizerFailure):
        maximize_simplex(lambda p: math.nan, 3, SimplexOptConfig(starts=2))


def test_tie_break_is_deterministic():
    def flat(p):
        return 1.0

    p1, _ = maximize_simplex(flat, 3, grad=lambda p: np.zeros(3))
    p2, _ = maximize_simplex(flat, 3, grad=lambda p: np.zeros(3))
    assert np.array_equal(p1, p2)


def test_fit_line_exact_and_perturbed():
    xs = np.arange(6.0)
    slope, intercept, r2 = fit_line(xs, 2 * xs + 1)
    assert (slope, intercept, r2) == pytest.approx((2, 1, 1.0))
    ys = xs.copy()
    ys[3] += 0.1
    slope, _, r2 = fit_line(xs, ys)
    assert abs(slope - 1) < 0.1 and r2 < 1
    with pytest.raises(DegenerateInput):
        fit_line([1, 1, 1], [1, 2, 3])


def test_fit_line_cantor_counts():
    depth = 10
    # integer left ends (in units of 3^-depth) of the middle-thirds construction
    ends = np.zeros(1, dtype=np.int64)
    for level in range(depth):
        step = 3 ** (depth - level - 1)
        ends = np.concatenate([ends, ends + 2 * step])
    ks = np.arange(3, 9)
    counts = [np.unique(ends // 3 ** (depth - k)).size for k in ks]
    slope, _, _ = fit_line(ks * math.log(3), np.log(counts))
    assert slope == pytest.approx(math.log(2) / math.log(3), abs=0.02)


def test_grad_check_cases():
    w = np.array([1.0, -2.0, 0.5])
    assert grad_check(lambda p: float(w @ p), lambda p: w, [0.2, 0.3, 0.5], h=1e-5) <= 1e-9
    s = gallery.build("smiley").system()
    u = np.full(8, 1 / 8)
    assert grad_check(lambda p: dimension.dim_formula_D(s, p),
                      lambda p: dimension.dim_formula_D_grad(s, p), u, h=1e-6) <= 1e-5
    dev = grad_check(lambda p: float(w @ p), lambda p: -w, [0.2, 0.3, 0.5])
    assert dev == pytest.approx(2, abs=1e-6)
