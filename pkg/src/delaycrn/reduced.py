"""Reduction of a delayed network onto a species subset.

Each reaction keeps its delay; its complexes are cut down to the kept
species and the dropped part of the reactant monomial moves into a
time-varying rate ``k_i * prod_{j not kept} x_j(t)^{y_ji}``. Reduced
networks are evaluated against trajectories of the full network; they are
not networks in their own right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .network import Complex, Network, NetworkError
from .sim import SimulationError, Trajectory


@dataclass(frozen=True)
class ReducedReaction:
    reactant: Complex
    product: Complex
    base_index: int
    residual_exponents: Tuple[Tuple[int, int], ...]
    delay_tau: float
    inert: bool


@dataclass(frozen=True)
class ReducedNetwork:
    base: Network
    kept_species: Tuple[int, ...]
    reactions: Tuple[ReducedReaction, ...]

    @property
    def kept_names(self) -> List[str]:
        return [self.base.names[j] for j in self.kept_species]


def reduce(net: Network, kept) -> ReducedNetwork:
    keep = net.subset(kept)
    if not keep:
        raise NetworkError("kept species set must be non-empty")
    dropped = [j for j in range(net.n) if j not in keep]
    out = []
    for i, rxn in enumerate(net.reactions):
        reactant = rxn.reactant.restrict(keep)
        product = rxn.product.restrict(keep)
        residual = tuple((j, rxn.reactant.coeffs[j]) for j in dropped if rxn.reactant.coeffs[j])
        out.append(ReducedReaction(reactant, product, i, residual, rxn.delay_tau, reactant == product))
    return ReducedNetwork(net, keep, tuple(out))


def reduced_rate(rn: ReducedNetwork, i: int, full_state: Sequence[float]) -> float:
    """k_i times the dropped-species monomial at ``full_state`` (0**0 == 1)."""
    x = np.asarray(full_state, dtype=float)
    if np.any(x < 0):
        raise ValueError("state must be non-negative")
    return _rate(rn, i, x)


def _rate(rn: ReducedNetwork, i: int, x: np.ndarray) -> float:
    rxn = rn.reactions[i]
    rate = rn.base.reactions[rxn.base_index].rate_k
    for j, e in rxn.residual_exponents:
        rate *= x[j] ** e
    return float(rate)


def reduced_rhs(rn: ReducedNetwork, traj: Trajectory, t: float) -> np.ndarray:
    """Time derivative of the kept species from the reduced reactions.

    Production uses the rate and reduced monomial at ``t - tau_i``;
    consumption uses them at ``t``.
    """
    tau_max = rn.base.tau_max
    if t > traj.t_end + 1e-12 or (t - tau_max < traj.t_start - 1e-12 and traj.history.kind != "constant"):
        raise SimulationError(f"t={t} is outside the trajectory coverage")
    keep = list(rn.kept_species)
    now_full = traj.state_at(t)
    now = now_full[keep]
    out = np.zeros(len(keep))
    for i, rxn in enumerate(rn.reactions):
        y = np.array(rxn.reactant.coeffs, dtype=float)
        yp = np.array(rxn.product.coeffs, dtype=float)
        if rxn.delay_tau:
            past_full = traj.state_at(t - rxn.delay_tau)
        else:
            past_full = now_full
        past = past_full[keep]
        out += _rate(rn, i, past_full) * float(np.prod(past ** y)) * yp
        out -= _rate(rn, i, now_full) * float(np.prod(now ** y)) * y
    return out


def format_reduced(rn: ReducedNetwork) -> str:
    names = rn.kept_names
    base_names = rn.base.names
    lines = [f"# reduced onto {', '.join(names)} ({len(rn.reactions)} reactions)"]
    for i, rxn in enumerate(rn.reactions):
        k = rn.base.reactions[rxn.base_index].rate_k
        rate = f"{k!r}"
        for j, e in rxn.residual_exponents:
            rate += f"*x_{base_names[j]}" + (f"^{e}" if e > 1 else "")
        line = f"R{rxn.base_index + 1}: {rxn.reactant.format(names)} -> {rxn.product.format(names)} | k(t)={rate}, tau={rxn.delay_tau!r}"
        if rxn.inert:
            line += "  [inert]"
        lines.append(line)
    return "\n".join(lines) + "\n"
