"""Energy-augmentation factors and approximation-ratio bounds of the alpha-point scheduler.

Three guarantee variants exist:

``general``
    Map/Reduce precedence and release dates.
``no_prec``
    no precedence between tasks.
``no_prec_no_release``
    no precedence and every job released at time 0.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ParameterError

VARIANTS = ("general", "no_prec", "no_prec_no_release")
TABLE_BETAS = (2.0, 2.2, 2.4, 2.6, 2.8, 3.0)
FIGURE_BETAS = (2.0, 2.5, 3.0)


def _check(alpha: float, gamma: float, beta: float | None = None):
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    if beta is not None and not beta > 1:
        raise ParameterError(f"beta must exceed 1, got {beta}")


def energy_augmentation_factor(alpha: float, gamma: float, beta: float) -> float:
    """Factor by which the schedule may exceed the LP energy."""
    _check(alpha, gamma, beta)
    return 1.0 / (gamma ** (beta - 1) * alpha**beta)


def no_augmentation_gamma(alpha: float, beta: float) -> float:
    """The stretch ``gamma`` at which the augmentation factor is exactly 1."""
    return alpha ** (-beta / (beta - 1))


def augmented_gamma(alpha: float, beta: float, augmentation: float) -> float:
    """Smallest stretch whose energy factor stays within ``1 + augmentation``."""
    return ((1 + augmentation) * alpha**beta) ** (-1.0 / (beta - 1))


def ratio_bound(alpha: float, gamma: float, delta: float, variant: str = "general") -> float:
    _check(alpha, gamma)
    if delta < 0:
        raise ParameterError(f"delta must be nonnegative, got {delta}")
    if variant == "general":
        num = gamma * gamma + 3 * gamma + 1
    elif variant == "no_prec":
        num = gamma + 1
    elif variant == "no_prec_no_release":
        num = gamma
    else:
        raise ParameterError(f"unknown variant {variant!r}")
    return num / (1 - alpha) * (1 + delta)


def _minimize_over_alpha(f, probes: int = 64, xtol: float = 1e-6) -> tuple[float, float]:
    grid = (np.arange(probes) + 0.5) / probes
    vals = np.array([f(a) for a in grid])
    i = int(np.argmin(vals))
    lo = grid[i - 1] if i > 0 else grid[0] / 2
    hi = grid[i + 1] if i < probes - 1 else (1 + grid[-1]) / 2
    res = minimize_scalar(f, bracket=(lo, grid[i], hi), method="golden", tol=xtol)
    a, val = float(res.x), float(res.fun)
    if not lo <= a <= hi or val > vals[i] + 1e-3:
        raise ArithmeticError(
            f"golden-section refinement disagrees with grid probe: {val} vs {vals[i]}"
        )
    return a, val


def optimal_ratio(beta: float, variant: str = "general") -> tuple[float, float]:
    """``(alpha*, ratio)`` minimising the no-augmentation bound for ``beta``."""
    if beta < 2:
        raise ParameterError("ratios are certified for beta >= 2 only")
    return _minimize_over_alpha(
        lambda a: ratio_bound(a, no_augmentation_gamma(a, beta), 0.0, variant)
    )


def tradeoff_curve(beta: float, augmentation_levels=None) -> list[tuple[float, float]]:
    """``(ratio, augmentation %)`` pairs for the general variant.

    ``augmentation_levels`` are percentages; the default is 0, 10, ..., 100.
    """
    if beta < 2:
        raise ParameterError("tradeoffs are certified for beta >= 2 only")
    levels = list(range(0, 101, 10)) if augmentation_levels is None else list(augmentation_levels)
    out = []
    for pct in levels:
        aug = pct / 100.0
        _, ratio = _minimize_over_alpha(
            lambda a: ratio_bound(a, augmented_gamma(a, beta, aug), 0.0, "general")
        )
        out.append((ratio, float(pct)))
    return out


def table1(betas=TABLE_BETAS) -> list[dict]:
    rows = []
    for beta in betas:
        for variant in VARIANTS:
            a, r = optimal_ratio(beta, variant)
            rows.append({"beta": beta, "variant": variant, "alpha_star": a, "ratio": r})
    return rows
