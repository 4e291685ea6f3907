"""Fixed-step simulation of delayed mass-action dynamics.

    x'(t) = sum_i k_i [ x(t - tau_i)^{y_i} y'_i - x(t)^{y_i} y_i ]

Classical RK4 on a uniform grid; delayed states at stage times come from a
cubic Hermite interpolant over stored states and derivatives (or from the
history on [-tau_max, 0]).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .network import Network
from .structure import linkage_classes

NEGATIVITY_TOL = 1e-9


class SimulationError(RuntimeError):
    pass


def _hermite(theta, h, y0, f0, y1, f1):
    t2 = theta * theta
    t3 = t2 * theta
    return (
        (2 * t3 - 3 * t2 + 1) * y0
        + (t3 - 2 * t2 + theta) * h * f0
        + (-2 * t3 + 3 * t2) * y1
        + (t3 - t2) * h * f1
    )


@dataclass(frozen=True)
class HistoryFunction:
    """Initial data on [-tau_max, 0]: a constant vector or a sampled table."""

    kind: str
    constant_value: Optional[np.ndarray] = None
    times: Optional[np.ndarray] = None
    samples: Optional[np.ndarray] = None
    slopes: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def constant(cls, value: Sequence[float]) -> "HistoryFunction":
        v = np.asarray(value, dtype=float)
        if v.ndim != 1 or not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError(f"constant history must be a finite non-negative vector, got {value}")
        return cls("constant", constant_value=v)

    @classmethod
    def sampled(cls, times: Sequence[float], samples) -> "HistoryFunction":
        t = np.asarray(times, dtype=float)
        x = np.asarray(samples, dtype=float)
        if t.ndim != 1 or x.ndim != 2 or x.shape[0] != t.size:
            raise ValueError("sampled history needs one row of states per time")
        if t.size < 2 or np.any(np.diff(t) <= 0):
            raise ValueError("sample times must be strictly increasing with at least two points")
        if not np.isclose(t[-1], 0.0, atol=1e-12):
            raise ValueError("sampled history must end at t = 0")
        if np.any(x < 0) or not np.all(np.isfinite(x)):
            raise ValueError("history values must be finite and non-negative")
        slopes = np.gradient(x, t, axis=0)
        return cls("sampled", times=t, samples=x, slopes=slopes)

    @property
    def dim(self) -> int:
        return self.constant_value.size if self.kind == "constant" else self.samples.shape[1]

    @property
    def start(self) -> float:
        return -math.inf if self.kind == "constant" else float(self.times[0])

    def __call__(self, t: float) -> np.ndarray:
        if self.kind == "constant":
            return self.constant_value
        if t < self.times[0] - 1e-12 or t > 1e-12:
            raise SimulationError(f"history queried at t={t}, outside [{self.times[0]}, 0]")
        k = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2))
        h = self.times[k + 1] - self.times[k]
        return _hermite((t - self.times[k]) / h, h, self.samples[k], self.slopes[k], self.samples[k + 1], self.slopes[k + 1])

    def derivative(self, t: float) -> np.ndarray:
        if self.kind == "constant":
            return np.zeros_like(self.constant_value)
        k = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 1))
        return self.slopes[k]


@dataclass(frozen=True)
class SimConfig:
    step_h: float = 0.01
    t_end: float = 50.0
    convergence_eps: float = 1e-6
    convergence_window: float = 5.0

    def __post_init__(self):
        for name in ("step_h", "t_end", "convergence_eps", "convergence_window"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive, got {val}")

    @classmethod
    def for_network(cls, net: Network, **overrides) -> "SimConfig":
        """Default config whose step respects the ``h <= min positive tau / 10`` cap."""
        if "step_h" not in overrides:
            overrides["step_h"] = min(0.01, max_step(net))
        return cls(**overrides)

    def validate_for(self, net: Network) -> None:
        cap = max_step(net)
        if self.step_h > cap * (1 + 1e-12):
            raise ValueError(f"step {self.step_h} exceeds the cap {cap} (min positive delay / 10)")


def max_step(net: Network) -> float:
    positive = [rxn.delay_tau for rxn in net.reactions if rxn.delay_tau > 0]
    return min(positive) / 10 if positive else math.inf


class _Kinetics:
    """Vectorised mass-action pieces of a network."""

    def __init__(self, net: Network):
        self.k = np.array([rxn.rate_k for rxn in net.reactions])
        self.tau = np.array([rxn.delay_tau for rxn in net.reactions])
        self.Y = np.array([rxn.reactant.coeffs for rxn in net.reactions], dtype=float).T
        self.Yp = np.array([rxn.product.coeffs for rxn in net.reactions], dtype=float).T
        self.instant = np.flatnonzero(self.tau == 0)
        groups: Dict[float, List[int]] = {}
        for i, t in enumerate(self.tau):
            if t > 0:
                groups.setdefault(float(t), []).append(i)
        self.delay_groups = [(d, np.array(idx)) for d, idx in sorted(groups.items())]

    def rates(self, x: np.ndarray, idx=None) -> np.ndarray:
        if idx is None:
            return self.k * np.prod(x[:, None] ** self.Y, axis=0)
        return self.k[idx] * np.prod(x[:, None] ** self.Y[:, idx], axis=0)

    def rhs(self, x_now: np.ndarray, delayed: Callable[[float], np.ndarray]) -> np.ndarray:
        """Right-hand side given the current state and ``delayed(d) -> x(t - d)``."""
        now = self.rates(x_now)
        produced = now.copy()
        for d, idx in self.delay_groups:
            produced[idx] = self.rates(delayed(d), idx)
        return self.Yp @ produced - self.Y @ now


@dataclass
class Trajectory:
    """Dense numeric solution; grid covers the history segment then [0, t_end]."""

    net: Network
    history: HistoryFunction
    step_h: float
    sol_times: np.ndarray
    sol_states: np.ndarray
    sol_derivs: np.ndarray
    hist_times: np.ndarray
    hist_states: np.ndarray
    hist_derivs: np.ndarray

    @property
    def grid(self) -> np.ndarray:
        return np.concatenate([self.hist_times, self.sol_times])

    @property
    def states(self) -> np.ndarray:
        return np.vstack([self.hist_states, self.sol_states])

    @property
    def derivs(self) -> np.ndarray:
        return np.vstack([self.hist_derivs, self.sol_derivs])

    @property
    def t_end(self) -> float:
        return float(self.sol_times[-1])

    @property
    def t_start(self) -> float:
        return -self.net.tau_max

    def state_at(self, t: float) -> np.ndarray:
        if t < 0:
            if t < self.t_start - 1e-12 and self.history.kind != "constant":
                raise SimulationError(f"t={t} precedes the stored history")
            return self.history(t)
        if t > self.t_end + 1e-12:
            raise SimulationError(f"t={t} is past the end of the trajectory ({self.t_end})")
        h = self.step_h
        k = min(int(t / h), self.sol_times.size - 2)
        theta = (t - k * h) / h
        return _hermite(theta, h, self.sol_states[k], self.sol_derivs[k], self.sol_states[k + 1], self.sol_derivs[k + 1])

    def states_at(self, ts: Sequence[float]) -> np.ndarray:
        return np.array([self.state_at(float(t)) for t in ts])


def simulate(net: Network, hist: HistoryFunction, cfg: SimConfig) -> Trajectory:
    """Integrate the delayed dynamics from ``hist`` up to ``cfg.t_end``.

    The step is shrunk so that a whole number of steps lands on ``t_end``.
    States below ``-1e-9`` abort the run; nothing is clipped.
    """
    cfg.validate_for(net)
    if hist.dim != net.n:
        raise ValueError(f"history has dimension {hist.dim}, network has {net.n} species")
    tau_max = net.tau_max
    if hist.kind == "sampled" and hist.start > -tau_max + 1e-12:
        raise ValueError(f"sampled history starts at {hist.start}, needs to cover {-tau_max}")

    nsteps = max(1, math.ceil(cfg.t_end / cfg.step_h - 1e-9))
    h = cfg.t_end / nsteps
    kin = _Kinetics(net)
    times = np.arange(nsteps + 1) * h
    states = np.empty((nsteps + 1, net.n))
    derivs = np.empty((nsteps + 1, net.n))
    states[0] = hist(0.0)

    def dense(s: float) -> np.ndarray:
        if s < 0:
            return hist(s)
        k = min(int(s / h), nsteps - 1)
        theta = (s - k * h) / h
        return _hermite(theta, h, states[k], derivs[k], states[k + 1], derivs[k + 1])

    def f(t: float, x: np.ndarray) -> np.ndarray:
        return kin.rhs(x, lambda d: dense(t - d))

    x = states[0]
    with np.errstate(over="ignore", invalid="ignore"):
        _integrate(f, x, times, states, derivs, h, net)
    derivs[nsteps] = f(times[nsteps], states[nsteps])

    if hist.kind == "constant":
        m = int(round(tau_max / h))
        hist_times = -np.arange(m, 0, -1) * h if m else np.empty(0)
        if m and hist_times[0] > -tau_max + 1e-12:
            hist_times = np.concatenate([[-tau_max], hist_times])
    else:
        hist_times = hist.times[hist.times < 0]
    hist_states = np.array([hist(t) for t in hist_times]).reshape(-1, net.n)
    hist_derivs = np.array([hist.derivative(t) for t in hist_times]).reshape(-1, net.n)
    return Trajectory(net, hist, h, times, states, derivs, hist_times, hist_states, hist_derivs)


def _integrate(f, x, times, states, derivs, h, net) -> None:
    for n in range(len(times) - 1):
        t = times[n]
        k1 = f(t, x)
        derivs[n] = k1
        k2 = f(t + h / 2, x + h / 2 * k1)
        k3 = f(t + h / 2, x + h / 2 * k2)
        k4 = f(t + h, x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise SimulationError(f"non-finite state at t={times[n + 1]:.6g}; try a smaller step")
        if x.min() < -NEGATIVITY_TOL:
            j = int(np.argmin(x))
            raise SimulationError(
                f"species {net.names[j]} went negative ({x[j]:.3e}) at t={times[n + 1]:.6g}; "
                f"reduce the step (currently {h:g})"
            )
        states[n + 1] = x


def full_rhs(net: Network, traj: Trajectory, t: float) -> np.ndarray:
    """Delayed right-hand side at time ``t`` evaluated on the interpolated trajectory."""
    kin = _Kinetics(net)
    if t - net.tau_max < traj.t_start - 1e-12 and traj.history.kind != "constant":
        raise SimulationError(f"t={t} needs history before the trajectory start")
    return kin.rhs(traj.state_at(t), lambda d: traj.state_at(t - d))


def mass_action_rhs(net: Network, x: Sequence[float]) -> np.ndarray:
    """Right-hand side at a constant state (delays drop out)."""
    kin = _Kinetics(net)
    x = np.asarray(x, dtype=float)
    return kin.rhs(x, lambda d: x)


def _simpson(fvals: np.ndarray, a: float, b: float) -> np.ndarray:
    panels = (len(fvals) - 1) // 2
    w = np.ones(2 * panels + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return (b - a) / (6 * panels) * (w @ fvals)


def _window_integral(traj: Trajectory, y: np.ndarray, a: float, b: float) -> float:
    """Integral of x(s)^y over [a, b], split at 0 so the history kink sits on a node."""
    total = 0.0
    pieces = [(a, min(b, 0.0)), (max(a, 0.0), b)] if a < 0 < b else [(a, b)]
    for lo, hi in pieces:
        if hi <= lo:
            continue
        panels = max(1, math.ceil((hi - lo) / traj.step_h - 1e-9))
        s = np.linspace(lo, hi, 2 * panels + 1)
        xs = traj.states_at(s)
        total += float(_simpson(np.prod(xs ** y, axis=1), lo, hi))
    return total


def c_functional(net: Network, a: Sequence[float], traj: Trajectory, t: float) -> float:
    """a . [x(t) + sum_i k_i (integral of x^{y_i} over [t - tau_i, t]) y_i]."""
    a = np.asarray(a, dtype=float)
    if t - net.tau_max < traj.t_start - 1e-12 and traj.history.kind != "constant":
        raise SimulationError(f"window [{t - net.tau_max}, {t}] not covered by the trajectory")
    if t > traj.t_end + 1e-12:
        raise SimulationError(f"t={t} is past the end of the trajectory")
    total = float(a @ traj.state_at(t))
    for rxn in net.reactions:
        if rxn.delay_tau == 0:
            continue
        y = np.array(rxn.reactant.coeffs, dtype=float)
        weight = float(a @ y)
        if weight == 0:
            continue
        total += rxn.rate_k * weight * _window_integral(traj, y, t - rxn.delay_tau, t)
    return total


def complex_balance_residual(net: Network, x: Sequence[float]) -> np.ndarray:
    """Inflow minus outflow at each distinct complex, in linkage-structure order."""
    x = np.asarray(x, dtype=float)
    if x.shape != (net.n,) or np.any(x <= 0):
        raise ValueError("complex balance residual needs a strictly positive state")
    links = linkage_classes(net)
    res = np.zeros(len(links.complexes))
    for rxn, src, dst in zip(net.reactions, links.reactant_index, links.product_index):
        flux = rxn.rate_k * float(np.prod(x ** np.array(rxn.reactant.coeffs, dtype=float)))
        res[dst] += flux
        res[src] -= flux
    return res


@dataclass(frozen=True)
class TrajectoryStats:
    min_per_species: np.ndarray
    settled: bool
    final_state: np.ndarray
    max_trailing_derivative: float

    def to_dict(self, names: Sequence[str]) -> Dict:
        return {
            "min_per_species": {n: float(v) for n, v in zip(names, self.min_per_species)},
            "settled": self.settled,
            "max_trailing_derivative": self.max_trailing_derivative,
            "final_state": {n: float(v) for n, v in zip(names, self.final_state)},
        }


def trajectory_stats(traj: Trajectory, cfg: SimConfig) -> TrajectoryStats:
    mins = traj.sol_states.min(axis=0)
    trailing = traj.sol_times >= traj.t_end - cfg.convergence_window - 1e-12
    peak = float(np.abs(traj.sol_derivs[trailing]).max())
    return TrajectoryStats(mins, peak < cfg.convergence_eps, traj.sol_states[-1].copy(), peak)


def trajectory_csv(traj: Trajectory, every: int = 1) -> str:
    """CSV with header ``t,x_<name>...``; rows use shortest round-trip float text."""
    if every < 1:
        raise ValueError("downsampling factor must be >= 1")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [f"x_{n}" for n in traj.net.names])
    grid, states = traj.grid, traj.states
    keep = list(range(0, len(grid), every))
    if keep[-1] != len(grid) - 1:
        keep.append(len(grid) - 1)
    for i in keep:
        writer.writerow([repr(float(grid[i]))] + [repr(float(v)) for v in states[i]])
    return buf.getvalue()


def read_history_csv(text: str, net: Network) -> HistoryFunction:
    rows = list(csv.reader(io.StringIO(text)))
    header = [h.strip() for h in rows[0]]
    expected = ["t"] + [f"x_{n}" for n in net.names]
    if header != expected:
        raise ValueError(f"history CSV header must be {','.join(expected)}")
    data = np.array([[float(v) for v in row] for row in rows[1:] if row], dtype=float)
    return HistoryFunction.sampled(data[:, 0], data[:, 1:])


def stats_json(stats: TrajectoryStats, names: Sequence[str]) -> str:
    return json.dumps(stats.to_dict(names), indent=2) + "\n"
