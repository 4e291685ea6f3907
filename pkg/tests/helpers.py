"""Shared test utilities: random networks and independent oracles."""

from itertools import combinations

import numpy as np
import sympy
from hypothesis import strategies as st

from delaycrn.network import Complex, Network, Reaction, SpeciesTable


def random_network(rng: np.random.Generator, max_n: int = 8, max_r: int = 12, delays: bool = True) -> Network:
    n = int(rng.integers(1, max_n + 1))
    r = int(rng.integers(1, max_r + 1))
    reactions = []
    while len(reactions) < r:
        y = tuple(int(v) for v in rng.choice([0, 0, 0, 1, 1, 2], size=n))
        yp = tuple(int(v) for v in rng.choice([0, 0, 0, 1, 1, 2], size=n))
        if y == yp:
            continue
        tau = float(rng.choice([0.0, 0.5, 1.0])) if delays else 0.0
        reactions.append(Reaction(Complex(y), Complex(yp), float(rng.uniform(0.5, 2.0)), tau))
    return Network(SpeciesTable(tuple(f"S{j}" for j in range(n))), tuple(reactions))


@st.composite
def networks(draw, max_n: int = 8, max_r: int = 12, delays: bool = True):
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, max_r))
    coef = st.integers(0, 2)
    reactions = []
    for _ in range(r):
        y = tuple(draw(st.lists(coef, min_size=n, max_size=n)))
        yp = tuple(draw(st.lists(coef, min_size=n, max_size=n)))
        if y == yp:
            yp = tuple(v + (1 if j == 0 else 0) for j, v in enumerate(yp))
        k = draw(st.floats(0.1, 10.0, allow_nan=False))
        tau = draw(st.sampled_from([0.0, 0.25, 1.0])) if delays else 0.0
        reactions.append(Reaction(Complex(y), Complex(yp), k, tau))
    return Network(SpeciesTable(tuple(f"S{j}" for j in range(n))), tuple(reactions))


def semilocking_oracle(net: Network):
    """Every non-empty subset checked straight from the definition."""
    out = []
    for size in range(1, net.n + 1):
        for w in combinations(range(net.n), size):
            ws = set(w)
            ok = True
            for rxn in net.reactions:
                prod = {j for j, c in enumerate(rxn.product.coeffs) if c > 0}
                reac = {j for j, c in enumerate(rxn.reactant.coeffs) if c > 0}
                if prod & ws and not reac & ws:
                    ok = False
                    break
            if ok:
                out.append(w)
    return out


def gamma_sympy(net: Network, reactions=None) -> sympy.Matrix:
    idx = range(net.r) if reactions is None else reactions
    cols = [[b - a for a, b in zip(net.reactions[i].reactant.coeffs, net.reactions[i].product.coeffs)] for i in idx]
    return sympy.Matrix(cols).T


def restricted_dim_oracle(net: Network, inside, reactions=None) -> int:
    """dim {G c : (G c)_j = 0 outside A}, via a sympy null space."""
    g = gamma_sympy(net, reactions)
    outside = [j for j in range(net.n) if j not in set(inside)]
    if not outside:
        return g.rank()
    cs = g.extract(outside, list(range(g.cols))).nullspace()
    if not cs:
        return 0
    return (g * sympy.Matrix.hstack(*cs)).rank()


def ode_reference(net, x0, h, nsteps):
    """Plain RK4 on x' = sum_i k_i x^{y_i} (y'_i - y_i), written out term by term."""

    def f(x):
        out = [0.0] * net.n
        for rxn in net.reactions:
            rate = rxn.rate_k
            for xj, e in zip(x, rxn.reactant.coeffs):
                rate *= xj**e
            for j in range(net.n):
                out[j] += rate * (rxn.product.coeffs[j] - rxn.reactant.coeffs[j])
        return np.array(out)

    xs = [np.array(x0, dtype=float)]
    x = xs[0]
    for _ in range(nsteps):
        k1 = f(x)
        k2 = f(x + h / 2 * k1)
        k3 = f(x + h / 2 * k2)
        k4 = f(x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        xs.append(x)
    return np.array(xs)
