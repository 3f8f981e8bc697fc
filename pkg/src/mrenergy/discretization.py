"""Horizon bound, speed bounds, and the geometric speed/time grids."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .errors import ParameterError
from .model import Instance


def compute_t_max(inst: Instance) -> float:
    """Upper bound on the makespan of an optimal schedule.

    Built from a schedule that runs every task at one common speed, one job
    at a time, after the last release date; loose but always sound.
    """
    E, beta = inst.energy_budget, inst.beta
    if not E > 0:
        raise ParameterError(f"energy budget must be positive, got {E}")
    if not beta > 1:
        raise ParameterError(f"beta must exceed 1, got {beta}")
    weights = [j.weight for j in inst.jobs]
    n = inst.n
    r_max = max(j.release for j in inst.jobs)
    per_slot = (inst.num_tasks * inst.v_max**beta / E) ** (1.0 / (beta - 1))
    return max(weights) / min(weights) * (n * r_max + n * (n + 1) * per_slot)


def speed_bounds(volume: float, t_max: float, E: float, beta: float) -> tuple[float, float]:
    """Range a task of ``volume`` can run at in some optimal schedule."""
    if not volume > 0:
        raise ParameterError("zero-volume tasks take no speed")
    return volume / t_max, (E / volume) ** (1.0 / (beta - 1))


def _smallest_power(base: float, ratio: float) -> int:
    """Smallest integer ``k >= 0`` with ``base**k >= ratio``."""
    if ratio <= 1:
        return 0
    k = max(0, math.ceil(math.log(ratio) / math.log(base)))
    while k > 0 and base ** (k - 1) >= ratio:
        k -= 1
    while base**k < ratio:
        k += 1
    return k


@dataclass(frozen=True)
class SpeedGrid:
    s_L: float
    s_U: float
    epsilon: float
    speeds: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.speeds) - 1

    @property
    def s_max(self) -> float:
        return self.speeds[-1]

    def __len__(self):
        return len(self.speeds)

    def round_down(self, s: float) -> float:
        """Largest grid speed not above ``s``."""
        i = bisect.bisect_right(self.speeds, s * (1 + 1e-12))
        if i == 0:
            raise ParameterError(f"speed {s} below the grid minimum {self.s_L}")
        return self.speeds[i - 1]

    def to_csv(self) -> str:
        return "index,value\n" + "".join(f"{i},{v!r}\n" for i, v in enumerate(self.speeds))


def build_speed_grid(s_L: float, s_U: float, epsilon: float) -> SpeedGrid:
    if not (s_L > 0 and s_U > 0 and epsilon > 0):
        raise ParameterError("speed grid needs positive s_L, s_U, epsilon")
    if s_L > s_U:
        raise ParameterError(f"s_L={s_L} exceeds s_U={s_U}")
    k = _smallest_power(1 + epsilon, s_U / s_L)
    speeds = tuple(float(s_L * (1 + epsilon) ** ell) for ell in range(k + 1))
    return SpeedGrid(s_L, s_U, epsilon, speeds)


def instance_speed_grid(inst: Instance, epsilon: float, t_max: float | None = None) -> SpeedGrid:
    """Grid over ``[v_min / t_max, (E / v_min)**(1/(beta-1))]``."""
    t_max = compute_t_max(inst) if t_max is None else t_max
    v_min = inst.v_min
    s_L = v_min / t_max
    s_U = (inst.energy_budget / v_min) ** (1.0 / (inst.beta - 1))
    return build_speed_grid(s_L, s_U, epsilon)


@dataclass(frozen=True)
class TimeGrid:
    """Intervals ``I_t = (tau[t], tau[t+1]]`` for ``t = 0..u``."""

    lam: float
    delta: float
    u: int
    tau: tuple[float, ...]

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.tau, self.tau[1:]))

    @property
    def num_intervals(self) -> int:
        return self.u + 1

    @property
    def horizon(self) -> float:
        return self.tau[-1]

    def to_csv(self) -> str:
        return "index,value\n" + "".join(f"{i},{v!r}\n" for i, v in enumerate(self.tau))


def build_time_grid(lam: float, delta: float, t_max: float) -> TimeGrid:
    if not (lam > 0 and delta > 0):
        raise ParameterError("time grid needs positive lambda and delta")
    if t_max < lam:
        raise ParameterError(f"t_max={t_max} is below lambda={lam}")
    u = 1 + _smallest_power(1 + delta, t_max / lam)
    tau = (0.0,) + tuple(float(lam * (1 + delta) ** (t - 1)) for t in range(1, u + 2))
    return TimeGrid(lam, delta, u, tau)


def default_lambda(alpha: float, v_min: float, s_max: float) -> float:
    """Half the largest first-interval length that keeps every alpha-point out of it."""
    return 0.5 * alpha * v_min / s_max
