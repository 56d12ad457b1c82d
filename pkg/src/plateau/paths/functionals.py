"""Running supremum, time shift, idleness and plateau functionals on step paths."""

from __future__ import annotations

import numpy as np

from plateau.paths.step import StepPath, merge_grids


def running_sup(p: StepPath) -> StepPath:
    """t -> sup_{0<=s<=t} p(s), exact on the breakpoint grid."""
    acc = np.maximum.accumulate(np.concatenate(([p.value_at_zero], p.values)))
    return StepPath(p.breakpoints, acc[1:], float(acc[0]))


def translate_G(x: StepPath, c: float) -> StepPath:
    """t -> x([t - c]^+). Negative `c` shifts the path left."""
    shifted = x.breakpoints + c
    keep = shifted > 0
    value_at_zero = x.evaluate(max(-c, 0.0)) if c < 0 else x.value_at_zero
    return StepPath(shifted[keep], x.values[keep], value_at_zero)


def idle_H(x: StepPath, y: StepPath, c: float) -> StepPath:
    """(x - G(y, c))^up; with x=U, y=V, c=1 this is the first-server idleness at arrivals."""
    return running_sup(x - translate_G(y, c))


def plateau_F(x: StepPath, y: StepPath, c: float) -> StepPath:
    """
    F(x, y, c) = (y - y^- + H)^up - H with H = H(x, y, c).

    H is nondecreasing, so the supremum over s <= t only has to compare H(t) with the values
    Delta y(s) + H(s) at the upward jumps of y; everything is a finite max over the merged grid.
    """

    h = idle_H(x, y, c)
    grid = merge_grids(h, y)
    if grid.size == 0:
        return StepPath.constant(0.0)
    h_grid = h.evaluate(grid)
    dy = y.evaluate(grid) - y.evaluate_left(grid)
    candidates = h_grid + np.maximum(dy, 0.0)
    acc = np.maximum.accumulate(np.concatenate(([h.value_at_zero], candidates)))
    return StepPath(grid, acc[1:] - h_grid, 0.0)


def plateau_F_bruteforce(x: StepPath, y: StepPath, c: float) -> StepPath:
    """Direct double supremum of the plateau functional over the merged grid (quadratic)."""
    g = translate_G(y, c)
    grid = np.concatenate(([0.0], merge_grids(x, g, y)))
    diff = x.evaluate(grid) - g.evaluate(grid)
    dy = y.evaluate(grid) - y.evaluate_left(grid)

    inner = np.array([diff[: s + 1].max() for s in range(grid.size)])
    out = np.empty(grid.size)
    for t in range(grid.size):
        first = max(dy[s] + inner[s] for s in range(t + 1))
        second = max(diff[s] for s in range(t + 1))
        out[t] = first - second
    return StepPath(grid[1:], out[1:], float(out[0]))


def scale_path(p: StepPath, a: float, n: float) -> StepPath:
    """t -> p(n t) / a."""
    if a <= 0 or n <= 0:
        raise ValueError(f"scale_path requires a > 0 and n > 0 (got a={a}, n={n})")
    return StepPath(p.breakpoints / n, p.values / a, p.value_at_zero / a)
