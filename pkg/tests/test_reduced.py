import numpy as np
import pytest

from delaycrn import HistoryFunction, SimConfig, full_rhs, simulate
from delaycrn.network import NetworkError, parse_network
from delaycrn.reduced import format_reduced, reduce, reduced_rate, reduced_rhs
from delaycrn.sim import SimulationError
from helpers import random_network


def test_reduce_ex1_same_onto_x1_x2(ex1_same):
    rn = reduce(ex1_same, ["X1", "X2"])
    assert rn.kept_names == ["X1", "X2"]
    xi = ex1_same.names.index("Xi")
    x3 = ex1_same.names.index("X3")
    live = [(r.reactant.coeffs, r.product.coeffs, r.residual_exponents) for r in rn.reactions if not r.inert]
    assert live == [
        ((2, 0), (3, 0), ()),
        ((3, 0), (1, 0), ((xi, 1),)),
        ((1, 0), (2, 0), ((xi, 2),)),
        ((0, 1), (0, 2), ((xi, 1),)),
        ((0, 2), (0, 1), ()),
    ]
    inert = [r for r in rn.reactions if r.inert]
    assert [r.base_index for r in inert] == [5, 6]
    assert inert[1].residual_exponents == ((x3, 1),)


def test_delays_preserved(ex1_same):
    rn = reduce(ex1_same, ["X1"])
    assert [r.delay_tau for r in rn.reactions] == [r.delay_tau for r in ex1_same.reactions]


def test_keep_everything_is_identity(ex1_distinct):
    rn = reduce(ex1_distinct, ex1_distinct.names)
    for rr, rxn in zip(rn.reactions, ex1_distinct.reactions):
        assert rr.reactant == rxn.reactant and rr.product == rxn.product
        assert rr.residual_exponents == () and not rr.inert


def test_residual_exponent_single_species():
    net = parse_network("A + B -> 2 B | k=2")
    rn = reduce(net, ["B"])
    assert rn.reactions[0].residual_exponents == ((0, 1),)
    assert reduced_rate(rn, 0, [3.0, 5.0]) == pytest.approx(6.0)


def test_reduced_rate_values(ex1_same):
    rn = reduce(ex1_same, ["X1", "X2"])
    state = [1.0, 1.0, 1.0, 2.0]
    assert reduced_rate(rn, 2, state) == pytest.approx(4.0)
    assert reduced_rate(rn, 0, state) == 1.0
    assert reduced_rate(rn, 1, [1.0, 1.0, 1.0, 0.0]) == 0.0
    with pytest.raises(ValueError):
        reduced_rate(rn, 0, [1.0, -0.1, 1.0, 1.0])


def test_empty_keep_and_unknown_species(ex2):
    with pytest.raises(NetworkError):
        reduce(ex2, [])
    with pytest.raises(NetworkError):
        reduce(ex2, ["nope"])


def test_reduced_rhs_matches_mass_action_without_delay():
    net = parse_network("A + B -> 2 B | k=1.5")
    traj = simulate(net, HistoryFunction.constant([2.0, 1.0]), SimConfig(step_h=0.01, t_end=1.0))
    rn = reduce(net, ["B"])
    for t in (0.0, 0.33, 1.0):
        xa, xb = traj.state_at(t)
        assert reduced_rhs(rn, traj, t)[0] == pytest.approx(1.5 * xa * xb, rel=1e-12)


def test_reduced_rhs_outside_coverage():
    net = parse_network("A -> B | k=1, tau=1")
    traj = simulate(net, HistoryFunction.constant([1.0, 0.0]), SimConfig(step_h=0.1, t_end=1.0))
    with pytest.raises(SimulationError):
        reduced_rhs(reduce(net, ["B"]), traj, 2.0)


@pytest.mark.parametrize("seed", range(12))
def test_restriction_identity_random(seed):
    rng = np.random.default_rng(seed)
    while True:
        net = random_network(rng, max_n=5, max_r=6)
        cfg = SimConfig.for_network(net, step_h=0.05, t_end=1.0)
        hist = HistoryFunction.constant(rng.uniform(0.2, 1.0, net.n))
        try:
            traj = simulate(net, hist, cfg)
            break
        except SimulationError:
            continue  # stiff draw; take the next one
    size = int(rng.integers(1, net.n + 1))
    kept = sorted(rng.choice(net.n, size=size, replace=False).tolist())
    rn = reduce(net, kept)
    for t in np.linspace(0, 1.0, 7):
        full = full_rhs(net, traj, t)[kept]
        assert np.allclose(reduced_rhs(rn, traj, t), full, rtol=1e-12, atol=1e-9)


def test_format_reduced_marks_inert(ex1_same):
    text = format_reduced(reduce(ex1_same, ["X1", "X2"]))
    assert "k(t)=1.0*x_Xi^2" in text
    assert text.count("[inert]") == 2
